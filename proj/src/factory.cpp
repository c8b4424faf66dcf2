#include "mlines/factory.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace mlines {

namespace {

constexpr int kMaxDraws = 8;

Polynomial var_times_form(const Fp& F, int v, const Form2& h) {
  return poly_mul(Polynomial::variable(v), h.to_polynomial(), F);
}

Polynomial monomial_xy(int i, int j) {
  Mono m;
  m.e[0] = uint8_t(i);
  m.e[1] = uint8_t(j);
  return Polynomial::term(m, 1);
}

void require_form(const Form2& h, int deg, bool allow_zero, const char* what) {
  if (h.is_zero()) {
    if (allow_zero) return;
    throw std::invalid_argument(std::string(what) + " must be nonzero");
  }
  if (h.deg != deg)
    throw std::invalid_argument(std::string(what) + " has the wrong degree");
}

// x g - y f, the pencil generator cutting the double line inside L_2
Polynomial directrix_poly(const Fp& F, const Form2& f, const Form2& g) {
  return poly_add(var_times_form(F, 0, g),
                  poly_scale(var_times_form(F, 1, f), F.neg(1), F), F);
}

std::vector<Polynomial> double_line_gens(const Fp& F, const Form2& f,
                                         const Form2& g) {
  return {monomial_xy(2, 0), monomial_xy(1, 1), monomial_xy(0, 2),
          directrix_poly(F, f, g)};
}

std::vector<Polynomial> triple_line_gens(const Fp& F, const Form2& f,
                                         const Form2& g, const Form2& p,
                                         const Form2& r, const Form2& s,
                                         const Form2& t) {
  Polynomial Fxy = directrix_poly(F, f, g);
  Polynomial G = poly_mul(p.to_polynomial(), Fxy, F);
  G = poly_add(G, poly_scale(poly_mul(monomial_xy(2, 0), r.to_polynomial(), F),
                             F.neg(1), F),
               F);
  G = poly_add(G, poly_scale(poly_mul(monomial_xy(1, 1), s.to_polynomial(), F),
                             F.neg(1), F),
               F);
  G = poly_add(G, poly_scale(poly_mul(monomial_xy(0, 2), t.to_polynomial(), F),
                             F.neg(1), F),
               F);
  return {monomial_xy(3, 0),
          monomial_xy(2, 1),
          monomial_xy(1, 2),
          monomial_xy(0, 3),
          poly_mul(Polynomial::variable(0), Fxy, F),
          poly_mul(Polynomial::variable(1), Fxy, F),
          G};
}

// q = r f^2 + s f g + t g^2, the form whose zeros are the non-primitive
// points of the triple structure
Form2 discriminant_form(const Fp& F, const Form2& f, const Form2& g,
                        const Form2& r, const Form2& s, const Form2& t) {
  Form2 q = form_mul(r, form_mul(f, f, F), F);
  q = form_add(q, form_mul(s, form_mul(f, g, F), F), F);
  q = form_add(q, form_mul(t, form_mul(g, g, F), F), F);
  return q;
}

void check_triple_data(const Fp& F, int a, int b, const Form2& f,
                       const Form2& g, const Form2& p, const Form2& r,
                       const Form2& s, const Form2& t) {
  if (a < 0 || b < 0)
    throw std::invalid_argument("triple data: type entries must be nonnegative");
  require_form(f, a + 1, false, "triple data: f");
  require_form(g, a + 1, false, "triple data: g");
  require_form(p, b, false, "triple data: p");
  require_form(r, a + b, true, "triple data: r");
  require_form(s, a + b, true, "triple data: s");
  require_form(t, a + b, true, "triple data: t");
  if (!forms_coprime(f, g, F))
    throw std::invalid_argument("triple data: f and g must be coprime");
  Form2 q = discriminant_form(F, f, g, r, s, t);
  if (q.is_zero() || !forms_coprime(q, p, F))
    throw std::invalid_argument(
        "triple data: r f^2 + s fg + t g^2 must be nonzero and coprime to p");
}

void fit_gate(const GradedIdeal& I, int window, int degree, long long genus,
              const char* who) {
  HilbertFit fit = hilbert_fit(I, window);
  if (!fit.certified || fit.degree != degree || fit.genus != genus)
    throw std::runtime_error(std::string(who) +
                             ": computed Hilbert data disagrees with the "
                             "expected degree and genus");
}

// ambient row for sum c_i reps[i]
SparseRow combine_rows(const std::vector<SparseRow>& reps,
                       const std::vector<uint32_t>& c, int cols, const Fp& F) {
  std::vector<uint64_t> acc(cols, 0);
  for (size_t i = 0; i < reps.size(); ++i) {
    if (i < c.size() && c[i] != 0)
      for (const auto& [col, val] : reps[i].t)
        acc[col] += uint64_t(c[i]) * val;
  }
  std::vector<uint32_t> dense(cols);
  for (int j = 0; j < cols; ++j) dense[j] = F.reduce64(acc[j]);
  return dense_to_sparse(dense);
}

std::vector<uint32_t> sparse_to_dense(const SparseRow& r, int cols) {
  std::vector<uint32_t> out(cols, 0);
  for (const auto& [col, val] : r.t) out[col] = val;
  return out;
}

// full sparse row of an echelon basis element: unit pivot plus stored tail
SparseRow full_row(const EchelonBasis& E, size_t i) {
  SparseRow r;
  const SparseRow& tail = E.row(int(i));
  r.t.reserve(tail.t.size() + 1);
  r.t.push_back({E.pivot(int(i)), 1});
  r.t.insert(r.t.end(), tail.t.begin(), tail.t.end());
  return r;
}

// Minimal generators re-extracted from the slices, for ideals that were
// produced slicewise.  Verified to reproduce every slice through `top`.
GradedIdeal regenerate(const Ring& R, const GradedIdeal& I, int top) {
  GradedIdeal J = GradedIdeal::from_generators(R, I.minimal_generators(top));
  for (int n = 0; n <= top; ++n)
    if (J.dim_slice(n) != I.dim_slice(n))
      throw std::logic_error("regenerate: extracted generators miss a slice");
  return J;
}

QPType primitive_type(int a, int d) {
  QPType t;
  t.a = a;
  t.b.assign(size_t(std::max(0, d - 2)), 0);
  return t;
}

MultiLineCurve make_curve(GradedIdeal I, int degree, long long genus) {
  return MultiLineCurve{std::move(I), degree,       genus, Support::xy,
                        false,        std::nullopt, {},    std::string(),
                        0,            0};
}

} // namespace

bool QPType::primitive() const {
  return std::all_of(b.begin(), b.end(), [](int v) { return v == 0; });
}

std::string QPType::str() const {
  std::string s = "(" + std::to_string(a);
  for (size_t i = 0; i < b.size(); ++i)
    s += (i == 0 ? "; " : ", ") + std::to_string(b[i]);
  return s + ")";
}

bool operator==(const QPType& s, const QPType& t) {
  return s.a == t.a && s.b == t.b;
}

MultiLineCurve neighborhood(const Ring& R, int d, int window) {
  if (d < 1)
    throw std::invalid_argument("neighborhood: order must be positive");
  if (window <= 0) window = d + 6;
  GradedIdeal I = GradedIdeal::line_power(R, d);
  int degree = d * (d + 1) / 2;
  long long genus = 1 - degree + 2 * binom(d + 1, 3);
  fit_gate(I, window, degree, genus, "neighborhood");
  MultiLineCurve C = make_curve(std::move(I), degree, genus);
  C.recipe = d == 1 ? "line" : "neighborhood(" + std::to_string(d) + ")";
  C.window = window;
  if (d == 1) C.filtration.push_back(C.ideal);
  return C;
}

MultiLineCurve double_line(const Ring& R, int a, const Form2& f,
                           const Form2& g, int window) {
  const Fp& F = R.field();
  if (a < -1)
    throw std::invalid_argument("double_line: type must be at least -1");
  require_form(f, a + 1, false, "double_line: f");
  require_form(g, a + 1, false, "double_line: g");
  if (!forms_coprime(f, g, F))
    throw std::invalid_argument("double_line: f and g must be coprime");
  if (window <= 0) window = std::max(a, 0) + 7;
  GradedIdeal I = GradedIdeal::from_generators(R, double_line_gens(F, f, g));
  fit_gate(I, window, 2, -1 - a, "double_line");
  MultiLineCurve C = make_curve(std::move(I), 2, -1 - a);
  C.type = QPType{a, {}};
  C.filtration = {GradedIdeal::line_power(R, 1), C.ideal};
  C.recipe = "double(a=" + std::to_string(a) + ")";
  C.window = window;
  return C;
}

MultiLineCurve triple_line(const Ring& R, int a, int b, const Form2& f,
                           const Form2& g, const Form2& p, const Form2& r,
                           const Form2& s, const Form2& t, int window) {
  const Fp& F = R.field();
  check_triple_data(F, a, b, f, g, p, r, s, t);
  if (window <= 0) window = 2 * a + b + 8;
  GradedIdeal I =
      GradedIdeal::from_generators(R, triple_line_gens(F, f, g, p, r, s, t));
  long long genus = -2 - 3 * a - b;
  fit_gate(I, window, 3, genus, "triple_line");
  MultiLineCurve C = make_curve(std::move(I), 3, genus);
  C.type = QPType{a, {b}};
  C.filtration = {GradedIdeal::line_power(R, 1),
                  GradedIdeal::from_generators(R, double_line_gens(F, f, g)),
                  C.ideal};
  C.recipe = "triple(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
  C.window = window;
  return C;
}

MultiLineCurve quadruple_line(const Ring& R, int a, int b, const Form2& f,
                              const Form2& g, const Form2& p, const Form2& r,
                              const Form2& s, const Form2& t, uint64_t seed,
                              int window) {
  const Fp& F = R.field();
  if (b != 1 && b != 2)
    throw std::invalid_argument("quadruple_line: b must be 1 or 2");
  MultiLineCurve C3 = triple_line(R, a, b, f, g, p, r, s, t);
  if (window <= 0) window = 3 * a + b + 7;

  GradedIdeal C2I = GradedIdeal::from_generators(R, double_line_gens(F, f, g));
  GradedIdeal J =
      ideal_sum(ideal_product(GradedIdeal::line_power(R, 1), C3.ideal),
                ideal_product(C2I, C2I));

  // the negative summand of I_{C3}/J is generated at this degree
  int xi_deg = a + b + 2;
  int hiM = xi_deg + 1;
  ModulePresentation M = subquotient_module(R, ideal_chain(C3.ideal, 0, hiM),
                                            ideal_chain(J, 0, hiM));
  int dn = M.mod.dim(xi_deg);
  if (dn == 0)
    throw std::runtime_error("quadruple_line: extension module is trivial");
  EchelonBasis image(dn, F);
  {
    const MatF& Z = M.mod.Z[xi_deg - 1];
    const MatF& W = M.mod.W[xi_deg - 1];
    for (int i = 0; i < M.mod.dim(xi_deg - 1); ++i) {
      image.insert(dense_to_sparse(
          std::vector<uint32_t>(Z.row(i), Z.row(i) + Z.cols)));
      image.insert(dense_to_sparse(
          std::vector<uint32_t>(W.row(i), W.row(i) + W.cols)));
    }
  }

  long long genus = -3 - 6LL * a - 2 * b;
  QPType want{a, {b, b}};
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Rng draw = rng.fork(attempt);
    std::vector<uint32_t> cls(dn);
    for (auto& v : cls) v = draw.field_elt(F);
    EchelonBasis probe = image;
    if (!probe.insert(dense_to_sparse(cls))) continue;

    SparseRow xi = combine_rows(M.reps[xi_deg], cls, R.dim(xi_deg), F);
    std::vector<Polynomial> gens = J.generators();
    gens.push_back(R.poly_of(xi_deg, xi));
    GradedIdeal I =
        GradedIdeal::from_generators(R, std::move(gens)).saturated(window);

    HilbertFit fit = hilbert_fit(I, window);
    if (!fit.certified || fit.degree != 4 || fit.genus != genus) continue;
    MultiLineCurve C = make_curve(std::move(I), 4, genus);
    C.type = want;
    C.seed = seed;
    C.window = window;
    C.recipe =
        "quadruple(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
    try {
      if (extract_type(C, draw.next()) != want) continue;
    } catch (const std::runtime_error&) {
      continue;
    }
    C.filtration = {GradedIdeal::line_power(R, 1), std::move(C2I),
                    std::move(C3.ideal), C.ideal};
    return C;
  }
  throw std::runtime_error(
      "quadruple_line: no verified extension generator after reseeding");
}

MultiLineCurve primitive_extension(const Ring& R, const MultiLineCurve& C,
                                   uint64_t seed, int window) {
  const Fp& F = R.field();
  if (C.composite || C.support != Support::xy)
    throw std::invalid_argument(
        "primitive_extension: curve must live on the x=y line");
  if (!C.type || !C.type->primitive())
    throw std::invalid_argument(
        "primitive_extension: curve must be primitive with known type");
  int a = C.type->a;
  int d = C.degree;
  if (a < 0)
    throw std::invalid_argument(
        "primitive_extension: type must be nonnegative");
  if (d < 2)
    throw std::invalid_argument(
        "primitive_extension: base must be at least a double line");
  if (window <= 0) window = std::max(d * a + 10, d + 8);

  GradedIdeal LC = ideal_product(GradedIdeal::line_power(R, 1), C.ideal);
  Rng rng(seed);
  TorsionResult tor =
      torsion_closure(R, ideal_chain(C.ideal, 0, window),
                      ideal_chain(LC, 0, window), rng);
  if (!tor.certified)
    throw std::runtime_error(
        "primitive_extension: torsion detection is inconclusive");
  if (!tor.torsion_dims.empty())
    throw std::runtime_error(
        "primitive_extension: conormal restriction has torsion, base is not "
        "primitive");
  ModulePresentation M =
      subquotient_module(R, ideal_chain(C.ideal, 0, window), tor.closure);
  int top = window;

  // Pencil of the double line under C: its ideal holds one class xg - yf
  // beyond (x,y)^2 in degree a+2, with f, g coprime of degree a+1.  Powers
  // of the pencil coordinatize classes of I_L^d inside the conormal
  // restriction: an element with coefficient form c_i on x^(d-i) y^i has
  // coordinate sum_i c_i f^(d-i) g^i of degree n + da.  The coordinate
  // kills I_L^(d-1) (xg - yf) and (x,y)^(d+1) -- both land in I_L I_C --
  // commutes with z and w, and is injective on classes.
  Form2 fpen, gpen;
  {
    std::vector<GradedIdeal> base;
    if (C.filtration.size() < 2) base = cm_filtration(C, seed);
    const GradedIdeal& C2 =
        C.filtration.size() >= 2 ? C.filtration[1] : base[1];
    GradedIdeal L2 = GradedIdeal::line_power(R, 2);
    EchelonBasis l2span(R.dim(a + 2), F);
    const EchelonBasis& L2S = L2.slice(a + 2);
    for (size_t i = 0; i < L2S.rows().size(); ++i)
      l2span.insert(full_row(L2S, i));
    const EchelonBasis& D2 = C2.slice(a + 2);
    for (size_t i = 0; i < D2.rows().size() && fpen.is_zero(); ++i) {
      SparseRow r = l2span.reduce(full_row(D2, i));
      if (r.t.empty()) continue;
      fpen = Form2{a + 1, std::vector<uint32_t>(size_t(a) + 2, 0)};
      gpen = fpen;
      Polynomial cls = R.poly_of(a + 2, r);
      for (const auto& [m, c] : cls.terms()) {
        if (m.xy_deg() != 1) continue;
        if (m.e[0] == 1) gpen.c[m.e[3]] = c;
        else fpen.c[m.e[3]] = F.neg(c);
      }
    }
    if (fpen.is_zero() || gpen.is_zero() || !forms_coprime(fpen, gpen, F))
      throw std::runtime_error("primitive_extension: degenerate double pencil");
  }
  std::vector<Form2> fgpow(size_t(d) + 1);
  {
    std::vector<Form2> fpw(size_t(d) + 1, Form2::constant(1)), gpw = fpw;
    for (int i = 1; i <= d; ++i) {
      fpw[size_t(i)] = form_mul(fpw[size_t(i) - 1], fpen, F);
      gpw[size_t(i)] = form_mul(gpw[size_t(i) - 1], gpen, F);
    }
    for (int i = 0; i <= d; ++i)
      fgpow[size_t(i)] = form_mul(fpw[size_t(d - i)], gpw[size_t(i)], F);
  }
  auto chi = [&](const Polynomial& u) {
    Form2 out;
    for (const auto& [m, c] : u.terms()) {
      if (m.xy_deg() != d) continue;
      Form2 t;
      t.deg = m.e[2] + m.e[3];
      t.c.assign(size_t(t.deg) + 1, 0);
      t.c[m.e[3]] = c;
      out = form_add(out, form_mul(t, fgpow[m.e[1]], F), F);
    }
    return out;
  };

  // Image of I_L^d at the three top degrees, where graded pieces and sheaf
  // sections agree; saturation recovers every lower degree from them.
  // Representatives are recorded before reduction so the pencil coordinate
  // applies to them.
  GradedIdeal Ld = GradedIdeal::line_power(R, d);
  std::vector<std::vector<SparseRow>> urows(3);
  std::vector<std::vector<Form2>> ucoord(3);
  for (int t = 0; t < 3; ++t) {
    int n = top - 2 + t;
    EchelonBasis have = tor.closure.at(n);
    const EchelonBasis& LdS = Ld.slice(n);
    for (size_t i = 0; i < LdS.rows().size(); ++i) {
      SparseRow r = full_row(LdS, i);
      if (!have.insert(r)) continue;
      urows[size_t(t)].push_back(r);
      ucoord[size_t(t)].push_back(chi(R.poly_of(n, r)));
    }
    if (int(urows[size_t(t)].size()) != n + d * a + 1 ||
        M.mod.dim(n) != (n + d * a + 1) + (n - a - 1))
      throw std::runtime_error(
          "primitive_extension: conormal slice has unexpected dimensions");
  }
  // Completed section module of the conormal restriction.  Both summands
  // are line bundles, so every degree must match the free dimension count;
  // the top two degrees keep the presentation coordinates.
  LineModule Mp = section_completion(M.mod, 0, F);
  for (int n = 0; n <= top; ++n)
    if (Mp.dim(n) != (n + d * a + 1) + std::max(0, n - a - 1))
      throw std::runtime_error(
          "primitive_extension: completed conormal module is not a sum of "
          "two line bundles");

  auto apply = [&F](const std::vector<uint32_t>& v, const MatF& A) {
    std::vector<uint64_t> acc(size_t(A.cols), 0);
    for (int r = 0; r < A.rows; ++r) {
      if (v[size_t(r)] == 0) continue;
      for (int j = 0; j < A.cols; ++j)
        acc[size_t(j)] += uint64_t(v[size_t(r)]) * A.at(r, j);
    }
    std::vector<uint32_t> out(size_t(A.cols));
    for (int j = 0; j < A.cols; ++j)
      out[size_t(j)] = F.reduce64(acc[size_t(j)]);
    return out;
  };

  // Sections of the positive summand in degree a+2: the span of all
  // products of the degree-0 completed sections.  Its complement there is
  // one-dimensional and meets no graded class of the base ideal in general.
  int gdeg = a + 2;
  EchelonBasis imgspan(Mp.dim(gdeg), F);
  {
    std::vector<std::vector<uint32_t>> cur;
    for (int j = 0; j < Mp.dim(0); ++j) {
      std::vector<uint32_t> e(size_t(Mp.dim(0)), 0);
      e[size_t(j)] = 1;
      cur.push_back(std::move(e));
    }
    for (int n = 0; n < gdeg; ++n) {
      std::vector<std::vector<uint32_t>> nxt;
      for (const auto& v : cur) {
        nxt.push_back(apply(v, Mp.Z[size_t(n)]));
        nxt.push_back(apply(v, Mp.W[size_t(n)]));
      }
      EchelonBasis B(Mp.dim(n + 1), F);
      cur.clear();
      for (auto& v : nxt)
        if (B.insert(dense_to_sparse(v))) cur.push_back(std::move(v));
    }
    for (const auto& v : cur) imgspan.insert(dense_to_sparse(v));
  }
  if (imgspan.dim() != gdeg + d * a + 1)
    throw std::runtime_error(
        "primitive_extension: positive summand sections are incomplete");

  long long genus = -(d) - (long long)a * d * (d + 1) / 2;
  QPType want = primitive_type(a, d + 1);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Rng draw = rng.fork(100 + attempt);

    // A generator class for the negative summand: any completed section of
    // degree a+2 off the positive span.  Its monomial multiples reach the
    // top degree with known labels.
    std::vector<uint32_t> v0(size_t(Mp.dim(gdeg)));
    for (auto& x : v0) x = draw.field_elt(F);
    if (imgspan.reduce(dense_to_sparse(v0)).t.empty()) continue;
    int steps = top - gdeg;
    std::vector<std::vector<std::vector<uint32_t>>> P(size_t(steps) + 1);
    for (int k = 0; k <= steps; ++k) P[size_t(k)].resize(size_t(k) + 1);
    P[0][0] = std::move(v0);
    for (int k = 0; k < steps; ++k) {
      int n = gdeg + k;
      for (int j = 0; j <= k; ++j) {
        if (j == 0)
          P[size_t(k) + 1][0] = apply(P[size_t(k)][0], Mp.Z[size_t(n)]);
        P[size_t(k) + 1][size_t(j) + 1] =
            apply(P[size_t(k)][size_t(j)], Mp.W[size_t(n)]);
      }
    }

    // Classes at top-2 carry completion coordinates; pull them back to
    // presentation coordinates through their two multiplication images,
    // which land in the presentation basis.  Torsion-freeness makes the
    // preimage unique.
    std::vector<std::vector<std::vector<uint32_t>>> lvl(3);
    lvl[2] = P[size_t(steps)];
    lvl[1] = P[size_t(steps) - 1];
    {
      int D2 = M.mod.dim(top - 2);
      int D1 = M.mod.dim(top - 1);
      const MatF& Z2 = M.mod.Z[size_t(top) - 2];
      const MatF& W2 = M.mod.W[size_t(top) - 2];
      bool pulled = true;
      for (const auto& v : P[size_t(steps) - 2]) {
        std::vector<uint32_t> za = apply(v, Mp.Z[size_t(top) - 2]);
        std::vector<uint32_t> wb = apply(v, Mp.W[size_t(top) - 2]);
        MatF A(2 * D1, D2 + 1);
        for (int r = 0; r < D2; ++r)
          for (int j = 0; j < D1; ++j) {
            A.at(j, r) = Z2.at(r, j);
            A.at(D1 + j, r) = W2.at(r, j);
          }
        for (int j = 0; j < D1; ++j) {
          A.at(j, D2) = za[size_t(j)];
          A.at(D1 + j, D2) = wb[size_t(j)];
        }
        auto [rk, ker] = rank_kernel(std::move(A), F);
        (void)rk;
        bool solved = false;
        for (int r = 0; r < ker.rows && !solved; ++r) {
          uint32_t alpha = ker.at(r, D2);
          if (alpha == 0) continue;
          uint32_t s = F.neg(F.inv(alpha));
          std::vector<uint32_t> m(size_t(D2), 0);
          for (int j = 0; j < D2; ++j) m[size_t(j)] = F.mul(s, ker.at(r, j));
          lvl[0].push_back(std::move(m));
          solved = true;
        }
        pulled = pulled && solved;
      }
      if (!pulled) continue;
    }

    // The retractions onto the image form an affine family over homs from
    // the negative summand, one per form psi of degree (d+1)a+2.  The
    // kernel of the psi-twisted retraction is spanned degreewise by the
    // sections mu v0 minus the image class with pencil coordinate psi mu.
    Form2 psi = form_random((d + 1) * a + 2, F, draw);
    std::vector<EchelonBasis> slices;
    slices.reserve(size_t(window) + 1);
    for (int n = 0; n <= window; ++n) slices.push_back(tor.closure.at(n));
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      int n = top - 2 + t;
      int lv = steps - 2 + t;
      for (int j = 0; j <= lv && ok; ++j) {
        std::vector<uint32_t> amb = sparse_to_dense(
            combine_rows(M.reps[size_t(n)], lvl[size_t(t)][size_t(j)],
                         R.dim(n), F),
            R.dim(n));
        Form2 label = form_mul(Form2::zpow(lv - j), Form2::wpow(j), F);
        Form2 h = form_mul(psi, label, F);
        std::vector<uint32_t> part(size_t(R.dim(n)), 0);
        const std::vector<SparseRow>& ur = urows[size_t(t)];
        const std::vector<Form2>& uc = ucoord[size_t(t)];
        if (!h.is_zero()) {
          MatF A(n + d * a + 1, int(ur.size()) + 1);
          for (size_t i = 0; i < ur.size(); ++i)
            for (int k = 0; k <= n + d * a; ++k)
              A.at(k, int(i)) = uc[i].c[size_t(k)];
          for (int k = 0; k <= n + d * a; ++k)
            A.at(k, int(ur.size())) = h.c[size_t(k)];
          auto [rk, ker] = rank_kernel(std::move(A), F);
          (void)rk;
          bool solved = false;
          for (int r = 0; r < ker.rows && !solved; ++r) {
            uint32_t alpha = ker.at(r, int(ur.size()));
            if (alpha == 0) continue;
            uint32_t s = F.neg(F.inv(alpha));
            std::vector<uint32_t> lam(ur.size());
            for (size_t i = 0; i < ur.size(); ++i)
              lam[i] = F.mul(s, ker.at(r, int(i)));
            part = sparse_to_dense(combine_rows(ur, lam, R.dim(n), F),
                                   R.dim(n));
            solved = true;
          }
          if (!solved)
            throw std::logic_error(
                "primitive_extension: pencil coordinates do not span");
        }
        std::vector<uint32_t> row(size_t(R.dim(n)));
        for (size_t q = 0; q < row.size(); ++q)
          row[q] = F.sub(amb[q], part[q]);
        if (!slices[size_t(n)].insert(dense_to_sparse(row))) ok = false;
      }
    }
    if (!ok) continue;
    {
      // complementarity at the top certifies the retraction
      EchelonBasis certify = slices[size_t(top)];
      bool complement = true;
      for (const SparseRow& u : urows[2])
        complement = complement && certify.insert(u);
      if (!complement) continue;
    }

    GradedIdeal I = GradedIdeal::from_slices(R, std::move(slices))
                        .saturated(window);
    I = regenerate(R, I, window);
    HilbertFit fit = hilbert_fit(I, window);
    if (!fit.certified || fit.degree != d + 1 || fit.genus != genus) continue;
    MultiLineCurve E = make_curve(std::move(I), d + 1, genus);
    E.type = want;
    E.seed = seed;
    E.window = window;
    E.recipe = "extension(" + C.recipe + ")";
    try {
      if (extract_type(E, draw.next()) != want) continue;
    } catch (const std::runtime_error&) {
      continue;
    }
    E.filtration = C.filtration;
    E.filtration.push_back(E.ideal);
    return E;
  }
  throw std::runtime_error(
      "primitive_extension: no verified retraction after reseeding");
}

MultiLineCurve disjoint_union(const MultiLineCurve& C, const MultiLineCurve& D,
                              int window) {
  if (C.composite || D.composite)
    throw std::invalid_argument("disjoint_union: operands must be single lines");
  if (C.support != Support::xy || D.support != Support::xy)
    throw std::invalid_argument(
        "disjoint_union: operands must be presented on the x=y line");
  if (window <= 0) window = std::max(C.window, D.window) + 4;
  GradedIdeal Dsw = D.ideal.support_swapped();
  GradedIdeal I = ideal_intersection(C.ideal, Dsw, window);
  int degree = C.degree + D.degree;
  long long genus = C.genus + D.genus - 1;
  fit_gate(I, window, degree, genus, "disjoint_union");
  MultiLineCurve U = make_curve(std::move(I), degree, genus);
  U.composite = true;
  U.recipe = "union(" + C.recipe + ", " + D.recipe + ")";
  U.window = window;
  return U;
}

std::vector<GradedIdeal> cm_filtration(const MultiLineCurve& C,
                                       uint64_t seed) {
  if (C.composite)
    throw std::invalid_argument("cm_filtration: curve must be a single line");
  const Ring& R = C.ideal.ring();
  int d = C.degree;
  std::vector<GradedIdeal> out;
  if (d == 1) {
    out.push_back(C.ideal);
    return out;
  }
  out.push_back(GradedIdeal::line_power(R, 1));
  Rng rng(seed);
  for (int j = 2; j <= d - 1; ++j) {
    GradedIdeal Sj = ideal_sum(C.ideal, GradedIdeal::line_power(R, j));
    Rng sub = rng.fork(j);
    TorsionResult tr = torsion_closure(R, full_chain(R, 0, C.window),
                                       ideal_chain(Sj, 0, C.window), sub);
    if (!tr.certified)
      throw std::runtime_error(
          "cm_filtration: torsion closure is inconclusive; enlarge the window");
    out.push_back(GradedIdeal::from_slices(R, std::move(tr.closure.E)));
  }
  out.push_back(C.ideal);
  return out;
}

QPType extract_type(const Ring& R, const std::vector<GradedIdeal>& filtration,
                    int window) {
  int d = int(filtration.size());
  if (d < 2)
    throw std::invalid_argument("extract_type: need at least a double line");
  if (window < 4)
    throw std::invalid_argument("extract_type: window too small");
  (void)R;
  std::vector<int> tail(size_t(d - 1));
  for (int j = 1; j <= d - 1; ++j) {
    // dim of the slice of I_{C_j} / I_{C_{j+1}}, which must settle on a line
    // bundle count n + t_j + 1
    int vals[4];
    for (int i = 0; i < 4; ++i) {
      int n = window - 3 + i;
      vals[i] =
          filtration[j - 1].dim_slice(n) - filtration[j].dim_slice(n);
    }
    for (int i = 0; i < 3; ++i)
      if (vals[i + 1] - vals[i] != 1) {
        if (j == 1)
          throw std::runtime_error("extract_type: curve is not quasiprimitive");
        throw std::runtime_error(
            "extract_type: filtration quotient is not a line bundle");
      }
    tail[j - 1] = vals[3] - window - 1;
  }
  QPType ty;
  ty.a = tail[0];
  for (int j = 2; j <= d - 1; ++j) {
    int bj = tail[j - 1] - j * ty.a;
    if (bj < 0)
      throw std::runtime_error("extract_type: negative divisor degree");
    ty.b.push_back(bj);
  }
  return ty;
}

QPType extract_type(const MultiLineCurve& C, uint64_t seed) {
  std::vector<GradedIdeal> filt = cm_filtration(C, seed);
  return extract_type(C.ideal.ring(), filt, C.window);
}

SheafAnalysis conormal_restriction(const MultiLineCurve& C, uint64_t seed) {
  if (C.composite || C.support != Support::xy)
    throw std::invalid_argument(
        "conormal_restriction: curve must live on the x=y line");
  const Ring& R = C.ideal.ring();
  GradedIdeal LC = ideal_product(GradedIdeal::line_power(R, 1), C.ideal);
  Rng rng(seed);
  return sheaf_splitting(R, ideal_chain(C.ideal, 0, C.window),
                         ideal_chain(LC, 0, C.window), rng);
}

BetaData beta_matrix(const Fp& F, int a, const Form2& f, const Form2& g,
                     const Form2& p, const Form2& r, const Form2& s,
                     const Form2& t) {
  int b = p.is_zero() ? -1 : p.deg;
  check_triple_data(F, a, b, f, g, p, r, s, t);
  auto neg = [&](const Form2& h) { return form_scale(h, F.neg(1), F); };
  Form2 o = Form2::zero();
  BetaData d;
  d.matrix = {
      {o, neg(r), o, g, o, o},
      {o, neg(s), neg(r), neg(f), g, o},
      {o, neg(t), neg(s), o, neg(f), g},
      {o, o, neg(t), o, o, neg(f)},
      {g, p, o, o, o, o},
      {neg(f), o, p, o, o, o},
      {o, o, o, o, o, o},
  };
  d.syzygy = {p, neg(g), f, neg(r), neg(s), neg(t)};
  return d;
}

MultiLineCurve standard_double_line(const Ring& R, int a) {
  return double_line(R, a, Form2::zpow(a + 1), Form2::wpow(a + 1));
}

MultiLineCurve standard_triple_line(const Ring& R, int a, int b) {
  Form2 p = b == 0 ? Form2::constant(1) : Form2::zpow(b);
  return triple_line(R, a, b, Form2::zpow(a + 1), Form2::wpow(a + 1), p,
                     Form2::zpow(a + b), Form2::zero(), Form2::wpow(a + b));
}

MultiLineCurve standard_quadruple_line(const Ring& R, int a, int b,
                                       uint64_t seed) {
  Form2 p = b == 2 ? form_mul(Form2::zpow(1), Form2::wpow(1), R.field())
                   : Form2::zpow(1);
  return quadruple_line(R, a, b, Form2::zpow(a + 1), Form2::wpow(a + 1), p,
                        Form2::zpow(a + b), Form2::zero(), Form2::wpow(a + b),
                        seed);
}

MultiLineCurve random_double_line(const Ring& R, int a, uint64_t seed) {
  const Fp& F = R.field();
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Rng draw = rng.fork(attempt);
    Form2 f = form_random(a + 1, F, draw);
    Form2 g = form_random(a + 1, F, draw);
    if (f.is_zero() || g.is_zero() || !forms_coprime(f, g, F)) continue;
    MultiLineCurve C = double_line(R, a, f, g);
    C.seed = seed;
    return C;
  }
  throw std::runtime_error("random_double_line: no coprime directrix found");
}

MultiLineCurve random_triple_line(const Ring& R, int a, int b, uint64_t seed) {
  const Fp& F = R.field();
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Rng draw = rng.fork(attempt);
    Form2 f = form_random(a + 1, F, draw);
    Form2 g = form_random(a + 1, F, draw);
    Form2 p = b == 0 ? Form2::constant(1 + uint32_t(draw.below(F.p() - 1)))
                     : form_random(b, F, draw);
    Form2 r = form_random(a + b, F, draw);
    Form2 s = form_random(a + b, F, draw);
    Form2 t = form_random(a + b, F, draw);
    if (f.is_zero() || g.is_zero() || p.is_zero()) continue;
    if (!forms_coprime(f, g, F)) continue;
    Form2 q = discriminant_form(F, f, g, r, s, t);
    if (q.is_zero() || !forms_coprime(q, p, F)) continue;
    MultiLineCurve C = triple_line(R, a, b, f, g, p, r, s, t);
    C.seed = seed;
    return C;
  }
  throw std::runtime_error("random_triple_line: no admissible data found");
}

MultiLineCurve random_quadruple_line(const Ring& R, int a, int b,
                                     uint64_t seed) {
  const Fp& F = R.field();
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Rng draw = rng.fork(attempt);
    Form2 f = form_random(a + 1, F, draw);
    Form2 g = form_random(a + 1, F, draw);
    Form2 p = form_random(b, F, draw);
    Form2 r = form_random(a + b, F, draw);
    Form2 s = form_random(a + b, F, draw);
    Form2 t = form_random(a + b, F, draw);
    if (f.is_zero() || g.is_zero() || p.is_zero()) continue;
    if (!forms_coprime(f, g, F)) continue;
    Form2 q = discriminant_form(F, f, g, r, s, t);
    if (q.is_zero() || !forms_coprime(q, p, F)) continue;
    MultiLineCurve C = quadruple_line(R, a, b, f, g, p, r, s, t, draw.next());
    C.seed = seed;
    return C;
  }
  throw std::runtime_error("random_quadruple_line: no admissible data found");
}

} // namespace mlines
