#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlines/graded.hpp"
#include "mlines/linemodule.hpp"

namespace mlines {

// Which coordinate line carries the curve: V(x,y) with functions in k[z,w],
// or its mirror V(z,w).
enum class Support { xy, zw };

// Multiplicity type (a; b_2,...,b_{d-1}) of a quasiprimitive d-uple line;
// b is empty for d <= 2, and b[j-2] stores b_j.
struct QPType {
  int a = 0;
  std::vector<int> b;

  bool primitive() const;
  std::string str() const;
};
bool operator==(const QPType& s, const QPType& t);
inline bool operator!=(const QPType& s, const QPType& t) { return !(s == t); }

// A curve supported on one coordinate line (or a disjoint pair of them),
// with the invariants its constructor certified.  `filtration` holds the
// ideals of L = C_1 up to C_degree = C when the constructor retained them;
// `window` is the degree through which the invariants were verified.
struct MultiLineCurve {
  GradedIdeal ideal;
  int degree = 0;
  long long genus = 0;
  Support support = Support::xy;
  bool composite = false;
  std::optional<QPType> type;
  std::vector<GradedIdeal> filtration;
  std::string recipe;
  uint64_t seed = 0;
  int window = 0;
};

// The full d-th infinitesimal neighborhood of the line x = y = 0, with its
// closed-form degree d(d+1)/2 and genus re-checked against the Hilbert data.
MultiLineCurve neighborhood(const Ring& R, int d, int window = 0);

// Double line of type a >= -1 with directrix data f, g: coprime forms of
// degree a+1 in z, w.  Ideal (x^2, xy, y^2, xg - yf); genus -1-a.
MultiLineCurve double_line(const Ring& R, int a, const Form2& f,
                           const Form2& g, int window = 0);

// Quasiprimitive triple line of type (a;b), a >= 0, b >= 0, from directrix
// data f, g (degree a+1, coprime), a plane form p of degree b and forms
// r, s, t of degree a+b whose combination q = r f^2 + s fg + t g^2 must be
// nonzero and coprime to p.  With F = xg - yf the ideal is
// (x,y)^3 + (xF, yF, pF - r x^2 - s xy - t y^2); genus -2-3a-b.
MultiLineCurve triple_line(const Ring& R, int a, int b, const Form2& f,
                           const Form2& g, const Form2& p, const Form2& r,
                           const Form2& s, const Form2& t, int window = 0);

// Quadruple line of type (a;b,b) for b in {1,2}, built over the triple line
// with the same data: with J = I_L I_{C3} + I_{C2}^2, a generator of the
// negative summand of I_{C3}/J is chosen at degree a+b+2 (seeded, retried on
// verification failure) and I_C = saturation of J + (xi).  Genus -3-6a-2b;
// the type and genus of the result are re-derived before returning.
MultiLineCurve quadruple_line(const Ring& R, int a, int b, const Form2& f,
                              const Form2& g, const Form2& p, const Form2& r,
                              const Form2& s, const Form2& t, uint64_t seed,
                              int window = 0);

// Primitive (d+1)-uple line containing the given primitive d-uple line of
// type a >= 0.  A seeded generator kappa of a rank-one summand of
// I_C/(I_L I_C) complementary to the image of I_L^d is chosen at degree a+2;
// the new ideal collects I_L I_C together with the multiples of kappa, then
// saturates.  Degree, genus and type of the result are verified.
MultiLineCurve primitive_extension(const Ring& R, const MultiLineCurve& C,
                                   uint64_t seed, int window = 0);

// Disjoint union: D is moved onto the mirror line V(z,w) and the ideals are
// intersected slicewise.  Degree adds; genus is g(C) + g(D) - 1.
MultiLineCurve disjoint_union(const MultiLineCurve& C, const MultiLineCurve& D,
                              int window = 0);

// Cohen-Macaulay filtration [I_{C_1}, ..., I_{C_d}] recomputed from scratch:
// I_{C_j} is the closure of I_C + I_L^j under the torsion of its quotient.
std::vector<GradedIdeal> cm_filtration(const MultiLineCurve& C,
                                       uint64_t seed = 1);

// Multiplicity type read off a filtration: the dimension of the j-th
// quotient slice must settle on n + t_j + 1 with t_j = j a + b_j.
QPType extract_type(const Ring& R, const std::vector<GradedIdeal>& filtration,
                    int window);
// Convenience wrapper recomputing the filtration (ignores any stored type).
QPType extract_type(const MultiLineCurve& C, uint64_t seed = 1);

// Splitting of the restricted conormal module I_C/(I_L I_C) as a sheaf on
// the support line, with torsion dimensions reported alongside.
SheafAnalysis conormal_restriction(const MultiLineCurve& C, uint64_t seed = 1);

// Relation matrix between the seven module generators of I_{C3} mod I_L^4
// (rows x^3, x^2 y, x y^2, y^3, xF, yF, G) and the six of J mod I_L^4
// (columns F^2, xG, yG, x^2 F, xy F, y^2 F), together with the generator
// [p, -g, f, -r, -s, -t] of its column syzygies.
struct BetaData {
  std::vector<std::vector<Form2>> matrix;
  std::vector<Form2> syzygy;
};
BetaData beta_matrix(const Fp& F, int a, const Form2& f, const Form2& g,
                     const Form2& p, const Form2& r, const Form2& s,
                     const Form2& t);

// Split-coordinate instances used as deterministic anchors.
MultiLineCurve standard_double_line(const Ring& R, int a);
MultiLineCurve standard_triple_line(const Ring& R, int a, int b);
MultiLineCurve standard_quadruple_line(const Ring& R, int a, int b,
                                       uint64_t seed = 1);

// Random instances with the numeric preconditions re-drawn until satisfied.
MultiLineCurve random_double_line(const Ring& R, int a, uint64_t seed);
MultiLineCurve random_triple_line(const Ring& R, int a, int b, uint64_t seed);
MultiLineCurve random_quadruple_line(const Ring& R, int a, int b,
                                     uint64_t seed);

} // namespace mlines
