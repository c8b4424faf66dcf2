#include "mlines/poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mlines {

bool mono_before(const Mono& a, const Mono& b) {
  int da = a.deg(), db = b.deg();
  if (da != db) return da < db ? false : true;
  for (int i = 0; i < 4; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  return false;
}

Polynomial Polynomial::term(const Mono& m, uint32_t c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Polynomial Polynomial::variable(int v) {
  Mono m;
  m.e[v] = 1;
  return term(m, 1);
}

Polynomial Polynomial::support_swapped() const {
  Polynomial q;
  q.terms_.reserve(terms_.size());
  for (const auto& [m, c] : terms_) q.terms_.push_back({m.support_swapped(), c});
  std::sort(q.terms_.begin(), q.terms_.end(),
            [](const auto& a, const auto& b) { return mono_before(a.first, b.first); });
  return q;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  static const char* names = "xyzw";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    std::string mono;
    for (int v = 0; v < 4; ++v) {
      if (m.e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (m.e[v] > 1) mono += "^" + std::to_string(int(m.e[v]));
    }
    if (mono.empty()) {
      s += std::to_string(c);
    } else if (c == 1) {
      s += mono;
    } else {
      s += std::to_string(c) + "*" + mono;
    }
  }
  return s;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b, const Fp& F) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.degree() != b.degree())
    throw std::invalid_argument("poly_add: degree mismatch");
  Polynomial r;
  size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    if (j == b.terms_.size() ||
        (i < a.terms_.size() && mono_before(a.terms_[i].first, b.terms_[j].first))) {
      r.terms_.push_back(a.terms_[i++]);
    } else if (i == a.terms_.size() || mono_before(b.terms_[j].first, a.terms_[i].first)) {
      r.terms_.push_back(b.terms_[j++]);
    } else {
      uint32_t c = F.add(a.terms_[i].second, b.terms_[j].second);
      if (c != 0) r.terms_.push_back({a.terms_[i].first, c});
      ++i, ++j;
    }
  }
  return r;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const Fp& F) {
  if (a.is_zero() || b.is_zero()) return Polynomial::zero();
  std::map<uint32_t, std::pair<Mono, uint64_t>> acc;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Mono m = ma.times(mb);
      auto& slot = acc[m.pack()];
      slot.first = m;
      slot.second += uint64_t(ca) * cb;
    }
  Polynomial r;
  for (auto& [key, slot] : acc) {
    (void)key;
    uint32_t c = F.reduce64(slot.second);
    if (c != 0) r.terms_.push_back({slot.first, c});
  }
  std::sort(r.terms_.begin(), r.terms_.end(),
            [](const auto& x, const auto& y) { return mono_before(x.first, y.first); });
  return r;
}

Polynomial poly_scale(const Polynomial& a, uint32_t c, const Fp& F) {
  c %= F.p();
  if (c == 0) return Polynomial::zero();
  Polynomial r;
  r.terms_.reserve(a.terms_.size());
  for (const auto& [m, v] : a.terms_) r.terms_.push_back({m, F.mul(v, c)});
  return r;
}

bool Form2::is_zero() const {
  for (uint32_t v : c)
    if (v != 0) return false;
  return true;
}

Form2 Form2::constant(uint32_t v) {
  Form2 f;
  if (v == 0) return f;
  f.deg = 0;
  f.c = {v};
  return f;
}

Form2 Form2::zpow(int k) {
  Form2 f;
  f.deg = k;
  f.c.assign(k + 1, 0);
  f.c[0] = 1;
  return f;
}

Form2 Form2::wpow(int k) {
  Form2 f;
  f.deg = k;
  f.c.assign(k + 1, 0);
  f.c[k] = 1;
  return f;
}

uint32_t Form2::eval(uint32_t zv, uint32_t wv, const Fp& F) const {
  if (deg < 0) return 0;
  uint32_t acc = 0;
  uint32_t zp = 1;
  std::vector<uint32_t> zpow(deg + 1);
  for (int i = 0; i <= deg; ++i) {
    zpow[i] = zp;
    zp = F.mul(zp, zv);
  }
  uint32_t wp = 1;
  for (int i = 0; i <= deg; ++i) {
    acc = F.add(acc, F.mul(c[i], F.mul(zpow[deg - i], wp)));
    wp = F.mul(wp, wv);
  }
  return acc;
}

Polynomial Form2::to_polynomial() const {
  Polynomial r;
  // monomial order on pure z,w monomials of one degree is descending z power
  for (int i = 0; i <= deg; ++i) {
    if (c[i] == 0) continue;
    Mono m;
    m.e[2] = uint8_t(deg - i);
    m.e[3] = uint8_t(i);
    r.terms_.push_back({m, c[i]});
  }
  return r;
}

std::string Form2::str() const { return to_polynomial().str(); }

Form2 form_add(const Form2& a, const Form2& b, const Fp& F) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.deg != b.deg) throw std::invalid_argument("form_add: degree mismatch");
  Form2 r;
  r.deg = a.deg;
  r.c.resize(a.deg + 1);
  bool any = false;
  for (int i = 0; i <= a.deg; ++i) {
    r.c[i] = F.add(a.c[i], b.c[i]);
    any = any || r.c[i] != 0;
  }
  if (!any) return Form2::zero();
  return r;
}

Form2 form_mul(const Form2& a, const Form2& b, const Fp& F) {
  if (a.is_zero() || b.is_zero()) return Form2::zero();
  Form2 r;
  r.deg = a.deg + b.deg;
  std::vector<uint64_t> acc(r.deg + 1, 0);
  for (int i = 0; i <= a.deg; ++i)
    for (int j = 0; j <= b.deg; ++j) acc[i + j] += uint64_t(a.c[i]) * b.c[j];
  r.c.resize(r.deg + 1);
  for (int i = 0; i <= r.deg; ++i) r.c[i] = F.reduce64(acc[i]);
  return r;
}

Form2 form_scale(const Form2& a, uint32_t s, const Fp& F) {
  s %= F.p();
  if (s == 0 || a.is_zero()) return Form2::zero();
  Form2 r = a;
  for (auto& v : r.c) v = F.mul(v, s);
  return r;
}

Form2 form_random(int deg, const Fp& F, Rng& rng) {
  Form2 r;
  r.deg = deg;
  r.c.resize(deg + 1);
  bool any = false;
  for (auto& v : r.c) {
    v = rng.field_elt(F);
    any = any || v != 0;
  }
  if (!any) return Form2::zero();
  return r;
}

namespace {

// w-adic valuation: index of the lowest nonzero coefficient
int val_w(const Form2& f) {
  for (int i = 0; i <= f.deg; ++i)
    if (f.c[i] != 0) return i;
  return -1;
}

// z-adic valuation: deg minus index of the highest nonzero coefficient
int val_z(const Form2& f) {
  for (int i = f.deg; i >= 0; --i)
    if (f.c[i] != 0) return f.deg - i;
  return -1;
}

// dehomogenize at z = 1 after stripping all z and w factors
Poly1 strip_dehom(const Form2& f, int vw, int vz) {
  Poly1 u;
  u.c.assign(f.deg - vw - vz + 1, 0);
  for (int i = vw; i <= f.deg - vz; ++i) u.c[i - vw] = f.c[i];
  return u;
}

Form2 homogenize(const Poly1& u) {
  Form2 f;
  f.deg = u.deg();
  f.c = u.c;
  return f;
}

} // namespace

Poly1 p1_mul(const Poly1& a, const Poly1& b, const Fp& F) {
  if (a.is_zero() || b.is_zero()) return Poly1{};
  std::vector<uint64_t> acc(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) acc[i + j] += uint64_t(a.c[i]) * b.c[j];
  Poly1 r;
  r.c.resize(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r.c[i] = F.reduce64(acc[i]);
  r.trim();
  return r;
}

void Poly1::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

namespace {

// quotient and remainder of a by monic-normalized b
std::pair<Poly1, Poly1> p1_divmod(Poly1 a, const Poly1& b, const Fp& F) {
  if (b.is_zero()) throw std::domain_error("p1_divmod: division by zero");
  uint32_t lead_inv = F.inv(b.c.back());
  Poly1 q;
  if (a.deg() >= b.deg()) q.c.assign(a.deg() - b.deg() + 1, 0);
  while (!a.is_zero() && a.deg() >= b.deg()) {
    int shift = a.deg() - b.deg();
    uint32_t f = F.mul(a.c.back(), lead_inv);
    q.c[shift] = f;
    for (int i = 0; i <= b.deg(); ++i)
      a.c[shift + i] = F.sub(a.c[shift + i], F.mul(f, b.c[i]));
    a.trim();
  }
  q.trim();
  return {q, a};
}

Poly1 p1_monic(Poly1 a, const Fp& F) {
  if (a.is_zero()) return a;
  uint32_t s = F.inv(a.c.back());
  for (auto& v : a.c) v = F.mul(v, s);
  return a;
}

Poly1 p1_derivative(const Poly1& a, const Fp& F) {
  Poly1 d;
  if (a.deg() < 1) return d;
  d.c.resize(a.deg());
  for (int i = 1; i <= a.deg(); ++i) d.c[i - 1] = F.mul(a.c[i], uint32_t(i % F.p()));
  d.trim();
  return d;
}

Poly1 p1_sub(const Poly1& a, const Poly1& b, const Fp& F) {
  Poly1 r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i) {
    uint32_t av = i < a.c.size() ? a.c[i] : 0;
    uint32_t bv = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F.sub(av, bv);
  }
  r.trim();
  return r;
}

} // namespace

Poly1 p1_mod(Poly1 a, const Poly1& b, const Fp& F) {
  return p1_divmod(std::move(a), b, F).second;
}

Poly1 p1_gcd(Poly1 a, Poly1 b, const Fp& F) {
  while (!b.is_zero()) {
    Poly1 r = p1_mod(std::move(a), b, F);
    a = std::move(b);
    b = std::move(r);
  }
  return p1_monic(std::move(a), F);
}

Poly1 p1_powmod(Poly1 base, uint64_t e, const Poly1& mod, const Fp& F) {
  Poly1 r;
  r.c = {1};
  base = p1_mod(std::move(base), mod, F);
  while (e) {
    if (e & 1) r = p1_mod(p1_mul(r, base, F), mod, F);
    base = p1_mod(p1_mul(base, base, F), mod, F);
    e >>= 1;
  }
  return r;
}

namespace {

// Cantor-Zassenhaus split of a product of irreducibles of equal degree d
void cz_split(const Poly1& g, int d, const Fp& F, Rng& rng,
              std::vector<Poly1>& out) {
  if (g.deg() == d) {
    out.push_back(p1_monic(g, F));
    return;
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    Poly1 a;
    a.c.resize(g.deg());
    for (auto& v : a.c) v = rng.field_elt(F);
    a.trim();
    if (a.deg() < 1) continue;
    // a^((p^d-1)/2) via the factorization (p^d-1)/2 = (1+p+...+p^(d-1)) * (p-1)/2
    Poly1 c = p1_mod(a, g, F);
    Poly1 t = c;
    for (int j = 1; j < d; ++j) {
      t = p1_powmod(t, F.p(), g, F);
      c = p1_mod(p1_mul(c, t, F), g, F);
    }
    Poly1 b = p1_powmod(c, (F.p() - 1) / 2, g, F);
    b = p1_sub(b, Poly1{{1}}, F);
    Poly1 h = p1_gcd(b, g, F);
    if (h.deg() > 0 && h.deg() < g.deg()) {
      cz_split(h, d, F, rng, out);
      cz_split(p1_divmod(g, h, F).first, d, F, rng, out);
      return;
    }
  }
  throw std::runtime_error("polynomial factorization failed to split");
}

} // namespace

std::vector<Poly1> p1_factor(Poly1 f, const Fp& F, Rng& rng) {
  std::vector<Poly1> out;
  f = p1_monic(std::move(f), F);
  if (f.deg() < 1) return out;
  // distinct factors only: reduce to the square-free part
  Poly1 df = p1_derivative(f, F);
  if (df.is_zero()) throw std::runtime_error("degree exceeds characteristic");
  Poly1 g = p1_gcd(f, df, F);
  f = p1_divmod(f, g, F).first;
  // distinct-degree sieve
  Poly1 h;
  h.c = {0, 1}; // the variable
  Poly1 rem = f;
  for (int d = 1; rem.deg() >= 2 * d; ++d) {
    h = p1_powmod(h, F.p(), rem, F);
    Poly1 diff = p1_sub(h, Poly1{{0, 1}}, F);
    Poly1 gd = p1_gcd(diff, rem, F);
    if (gd.deg() > 0) {
      cz_split(gd, d, F, rng, out);
      rem = p1_divmod(rem, gd, F).first;
      h = p1_mod(h, rem, F);
    }
  }
  if (rem.deg() > 0) out.push_back(p1_monic(rem, F));
  return out;
}

Poly1 p1_interpolate(const std::vector<std::pair<uint32_t, uint32_t>>& pts,
                     const Fp& F) {
  Poly1 r;
  for (size_t i = 0; i < pts.size(); ++i) {
    // basis polynomial through point i, zero at the others
    Poly1 l;
    l.c = {1};
    uint32_t denom = 1;
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      l = p1_mul(l, Poly1{{F.neg(pts[j].first), 1}}, F);
      denom = F.mul(denom, F.sub(pts[i].first, pts[j].first));
    }
    uint32_t s = F.mul(pts[i].second, F.inv(denom));
    if (l.c.size() > r.c.size()) r.c.resize(l.c.size(), 0);
    for (size_t k = 0; k < l.c.size(); ++k)
      r.c[k] = F.add(r.c[k], F.mul(l.c[k], s));
  }
  r.trim();
  return r;
}

uint32_t p1_eval(const Poly1& f, uint32_t x, const Fp& F) {
  uint32_t acc = 0;
  for (size_t i = f.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f.c[i]);
  return acc;
}

Form2 form_gcd(const Form2& a, const Form2& b, const Fp& F) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int vw = std::min(val_w(a), val_w(b));
  int vz = std::min(val_z(a), val_z(b));
  Poly1 ua = strip_dehom(a, val_w(a), val_z(a));
  Poly1 ub = strip_dehom(b, val_w(b), val_z(b));
  Poly1 g = p1_gcd(ua, ub, F);
  Form2 r = homogenize(g);
  if (vz > 0) r = form_mul(r, Form2::zpow(vz), F);
  if (vw > 0) r = form_mul(r, Form2::wpow(vw), F);
  return r;
}

bool forms_coprime(const Form2& a, const Form2& b, const Fp& F) {
  if (a.is_zero() || b.is_zero()) return false;
  return form_gcd(a, b, F).deg == 0;
}

std::vector<Form2> form_irreducible_factors(const Form2& a, const Fp& F,
                                            Rng& rng) {
  std::vector<Form2> out;
  if (a.is_zero() || a.deg == 0) return out;
  int vw = val_w(a), vz = val_z(a);
  if (vz > 0) out.push_back(Form2::zpow(1));
  if (vw > 0) out.push_back(Form2::wpow(1));
  Poly1 u = strip_dehom(a, vw, vz);
  for (const Poly1& q : p1_factor(u, F, rng)) out.push_back(homogenize(q));
  return out;
}

int Ring::dim(int n) const {
  if (n < 0) return 0;
  return int(binom(n + 3, 3));
}

void Ring::ensure(int n) const {
  while (int(monos_.size()) <= n) {
    int k = int(monos_.size());
    std::vector<Mono> list;
    list.reserve(dim(k));
    for (int ex = k; ex >= 0; --ex)
      for (int ey = k - ex; ey >= 0; --ey)
        for (int ez = k - ex - ey; ez >= 0; --ez) {
          Mono m;
          m.e = {uint8_t(ex), uint8_t(ey), uint8_t(ez), uint8_t(k - ex - ey - ez)};
          list.push_back(m);
        }
    std::unordered_map<uint32_t, int> idx;
    idx.reserve(list.size() * 2);
    for (int i = 0; i < int(list.size()); ++i) idx[list[i].pack()] = i;
    monos_.push_back(std::move(list));
    index_.push_back(std::move(idx));
    shifts_.emplace_back();
  }
  // shift tables from degree k need degree k+1 indices
  for (int k = 0; k < n; ++k) {
    if (!shifts_[k][0].empty()) continue;
    for (int v = 0; v < 4; ++v) {
      std::vector<int> map(monos_[k].size());
      for (size_t i = 0; i < monos_[k].size(); ++i)
        map[i] = index_[k + 1].at(monos_[k][i].times_var(v).pack());
      shifts_[k][v] = std::move(map);
    }
  }
}

const std::vector<Mono>& Ring::basis(int n) const {
  ensure(n);
  return monos_[n];
}

int Ring::index(int n, const Mono& m) const {
  ensure(n);
  return index_[n].at(m.pack());
}

const std::vector<int>& Ring::shift(int n, int v) const {
  ensure(n + 1);
  return shifts_[n][v];
}

SparseRow Ring::row_of(const Polynomial& p) const {
  SparseRow r;
  if (p.is_zero()) return r;
  int n = p.degree();
  ensure(n);
  r.t.reserve(p.terms().size());
  for (const auto& [m, c] : p.terms()) r.t.push_back({index_[n].at(m.pack()), c});
  r.sort_terms();
  return r;
}

Polynomial Ring::poly_of(int n, const SparseRow& r) const {
  ensure(n);
  Polynomial p;
  p.terms_.reserve(r.t.size());
  for (const auto& [i, c] : r.t) p.terms_.push_back({monos_[n][i], c});
  std::sort(p.terms_.begin(), p.terms_.end(),
            [](const auto& a, const auto& b) { return mono_before(a.first, b.first); });
  return p;
}

Polynomial Ring::random_poly(int n, Rng& rng) const {
  ensure(n);
  Polynomial p;
  for (const Mono& m : monos_[n]) {
    uint32_t c = rng.field_elt(F_);
    if (c != 0) p.terms_.push_back({m, c});
  }
  return p;
}

long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

} // namespace mlines
