#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlines/fp.hpp"
#include "mlines/linalg.hpp"

namespace mlines {

// Exponent vector of a monomial in k[x,y,z,w]; order is graded, then
// lexicographic with x > y > z > w.
struct Mono {
  std::array<uint8_t, 4> e{0, 0, 0, 0};

  int deg() const { return e[0] + e[1] + e[2] + e[3]; }
  int xy_deg() const { return e[0] + e[1]; }
  uint32_t pack() const {
    return uint32_t(e[0]) | uint32_t(e[1]) << 8 | uint32_t(e[2]) << 16 |
           uint32_t(e[3]) << 24;
  }
  Mono times(const Mono& o) const {
    Mono m;
    for (int i = 0; i < 4; ++i) m.e[i] = uint8_t(e[i] + o.e[i]);
    return m;
  }
  Mono times_var(int v) const {
    Mono m = *this;
    m.e[v] = uint8_t(m.e[v] + 1);
    return m;
  }
  // swap the roles of the two coordinate lines: (x,y,z,w) -> (z,w,x,y)
  Mono support_swapped() const { return Mono{{e[2], e[3], e[0], e[1]}}; }

  bool operator==(const Mono& o) const { return e == o.e; }
};

// true when a precedes b: higher degree first, then lex descending in x,y,z,w
bool mono_before(const Mono& a, const Mono& b);

// A homogeneous polynomial: terms sorted in monomial order, coefficients
// in (0, p).  The zero polynomial has no terms and degree -1.
class Polynomial {
public:
  Polynomial() = default;

  static Polynomial zero() { return Polynomial(); }
  static Polynomial term(const Mono& m, uint32_t c);
  static Polynomial variable(int v);

  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : terms_[0].first.deg(); }
  const std::vector<std::pair<Mono, uint32_t>>& terms() const { return terms_; }

  Polynomial support_swapped() const;

  std::string str() const;

private:
  friend Polynomial poly_add(const Polynomial&, const Polynomial&, const Fp&);
  friend Polynomial poly_mul(const Polynomial&, const Polynomial&, const Fp&);
  friend Polynomial poly_scale(const Polynomial&, uint32_t, const Fp&);
  friend class Ring;
  friend struct Form2;
  std::vector<std::pair<Mono, uint32_t>> terms_;
};

// sum of homogeneous polynomials of equal degree (or zero)
Polynomial poly_add(const Polynomial& a, const Polynomial& b, const Fp& F);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const Fp& F);
Polynomial poly_scale(const Polynomial& a, uint32_t c, const Fp& F);

// Homogeneous form in the two line coordinates z, w.
// c[i] is the coefficient of z^(deg-i) w^i; deg -1 encodes the zero form.
struct Form2 {
  int deg = -1;
  std::vector<uint32_t> c;

  bool is_zero() const;
  static Form2 zero() { return Form2(); }
  static Form2 constant(uint32_t v);
  static Form2 zpow(int k);  // z^k
  static Form2 wpow(int k);  // w^k
  uint32_t eval(uint32_t zv, uint32_t wv, const Fp& F) const;
  Polynomial to_polynomial() const;
  std::string str() const;
};

Form2 form_add(const Form2& a, const Form2& b, const Fp& F);
Form2 form_mul(const Form2& a, const Form2& b, const Fp& F);
Form2 form_scale(const Form2& a, uint32_t s, const Fp& F);
Form2 form_random(int deg, const Fp& F, Rng& rng);

// gcd of two-variable forms, monic in the sense of unit leading z-power
Form2 form_gcd(const Form2& a, const Form2& b, const Fp& F);
bool forms_coprime(const Form2& a, const Form2& b, const Fp& F);

// distinct irreducible factors (monic), via univariate factorization of the
// dehomogenization plus explicit z / w factors
std::vector<Form2> form_irreducible_factors(const Form2& a, const Fp& F,
                                            Rng& rng);

// Dense univariate polynomial over Fp, coefficients ascending.
struct Poly1 {
  std::vector<uint32_t> c;
  int deg() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  void trim();
};

Poly1 p1_mul(const Poly1& a, const Poly1& b, const Fp& F);
Poly1 p1_mod(Poly1 a, const Poly1& b, const Fp& F);
Poly1 p1_gcd(Poly1 a, Poly1 b, const Fp& F);
Poly1 p1_powmod(Poly1 base, uint64_t e, const Poly1& mod, const Fp& F);
// distinct monic irreducible factors (square-free part is factored)
std::vector<Poly1> p1_factor(Poly1 f, const Fp& F, Rng& rng);
// Lagrange interpolation through distinct sample points
Poly1 p1_interpolate(const std::vector<std::pair<uint32_t, uint32_t>>& pts,
                     const Fp& F);
uint32_t p1_eval(const Poly1& f, uint32_t x, const Fp& F);

// Shared context: the field plus lazily-built monomial tables per degree.
// Monomials of each degree are listed in monomial order; a polynomial's
// coefficient row lives in that coordinate system.
class Ring {
public:
  explicit Ring(uint32_t p = 32003) : F_(p) {}

  const Fp& field() const { return F_; }

  int dim(int n) const; // number of degree-n monomials = C(n+3,3)
  const std::vector<Mono>& basis(int n) const;
  int index(int n, const Mono& m) const;
  // column map of multiplication by variable v from degree n to n+1
  const std::vector<int>& shift(int n, int v) const;

  SparseRow row_of(const Polynomial& p) const;
  Polynomial poly_of(int n, const SparseRow& r) const;

  // random homogeneous polynomial with all degree-n monomials allowed
  Polynomial random_poly(int n, Rng& rng) const;

private:
  void ensure(int n) const;
  Fp F_;
  mutable std::vector<std::vector<Mono>> monos_;
  mutable std::vector<std::unordered_map<uint32_t, int>> index_;
  mutable std::vector<std::array<std::vector<int>, 4>> shifts_;
};

long long binom(long long n, long long k);

} // namespace mlines
