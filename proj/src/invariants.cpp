#include "mlines/invariants.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mlines {

namespace {

// Euler characteristic of the twisted structure sheaf of the d-th
// neighborhood of a line; equals its section count for n >= d-1.
long long neighborhood_chi(int d, int n) {
  long long chi = 0;
  for (int i = 0; i < d; ++i) chi += (long long)(i + 1) * (n - i + 1);
  return chi;
}

long long neighborhood_h0(int d, int n) {
  long long h = 0;
  for (int i = 0; i < d && i <= n; ++i)
    h += (long long)(i + 1) * (n - i + 1);
  return h;
}

bool superadditive(const std::vector<int>& b, int d) {
  // b[j-2] = b_j, with b_1 = 0.  b_1 + b_j <= b_{j+1} is monotonicity.
  for (int i = 1; i + 1 <= d - 1; ++i)
    for (int j = i; i + j <= d - 1; ++j) {
      int bi = i == 1 ? 0 : b[i - 2];
      int bj = j == 1 ? 0 : b[j - 2];
      if (bi + bj > b[i + j - 2]) return false;
    }
  return true;
}

void append_b_tails(int d, int pos, int remaining, std::vector<int>& b,
                    std::vector<QPType>& out, int a) {
  if (pos == d - 1) {
    if (remaining == 0 && superadditive(b, d)) out.push_back({a, b});
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    b.push_back(v);
    append_b_tails(d, pos + 1, remaining - v, b, out, a);
    b.pop_back();
  }
}

void require_line_supported(const MultiLineCurve& C, const char* who) {
  if (C.composite)
    throw std::invalid_argument(std::string(who) +
                                ": curve must be supported on one line");
  if (C.support != Support::xy)
    throw std::invalid_argument(std::string(who) +
                                ": curve must be supported on x = y = 0");
}

} // namespace

long long max_genus_bound(int d, int s) {
  if (s < 1 || d < s)
    throw std::invalid_argument("max_genus_bound: need 1 <= s <= d");
  if (d <= 2 * s) return (long long)(s - 1) * d + 1 - binom(s + 2, 3);
  return binom(d - s, 2) - binom(s - 1, 3);
}

long long extremal_genus(int d, int ell) {
  if (d < 1 || ell < 0)
    throw std::invalid_argument("extremal_genus: need d >= 1, l >= 0");
  return -(d - 1) - binom(d, 3) - (long long)ell * binom(d, 2);
}

long long quasiprimitive_genus(int d, const QPType& type) {
  if (d < 2 || type.a < -1 || (int)type.b.size() != std::max(d - 2, 0))
    throw std::invalid_argument("quasiprimitive_genus: bad type");
  long long g = -(d - 1) - (long long)type.a * d * (d - 1) / 2;
  for (int bj : type.b) g -= bj;
  return g;
}

long long family_dimension(int d, const QPType& type) {
  if (d < 2 || type.a < 0 || (int)type.b.size() != d - 2)
    throw std::invalid_argument("family_dimension: bad type");
  int nonzero = 0;
  for (int bj : type.b)
    if (bj != 0) ++nonzero;
  long long prim = (long long)type.a * (d - 1) * (d + 2) / 2 + 3 * d + 1;
  if (nonzero == 0) return prim;
  if (nonzero == 1 && type.b.back() != 0) return prim + 2 * type.b.back();
  if (nonzero == 2 && type.b.back() != 0 && type.b[d - 4] != 0) {
    QPType inner{type.a, std::vector<int>(type.b.begin(), type.b.end() - 1)};
    return family_dimension(d - 1, inner) + (long long)d * type.a +
           2 * type.b.back() + 3;
  }
  throw std::invalid_argument(
      "family_dimension: known only for types (a; 0,...,0,b,c)");
}

int min_surface_degree(const MultiLineCurve& C) {
  for (int n = 0; n <= C.window; ++n)
    if (C.ideal.dim_slice(n) > 0) return n;
  throw std::runtime_error("min_surface_degree: no surface within window");
}

bool postulation_condition(const MultiLineCurve& C, int ell) {
  require_line_supported(C, "postulation_condition");
  if (ell < 0)
    throw std::invalid_argument("postulation_condition: need l >= 0");
  const Ring& R = C.ideal.ring();
  GradedIdeal Ld = GradedIdeal::line_power(R, C.degree);
  for (int n = 0; n <= ell + C.degree - 1; ++n)
    if (C.ideal.dim_slice(n) != Ld.dim_slice(n)) return false;
  return true;
}

ExtremalityReport extremality_report(const MultiLineCurve& C, int ell,
                                     uint64_t seed) {
  require_line_supported(C, "extremality_report");
  if (ell < 0)
    throw std::invalid_argument("extremality_report: need l >= 0");
  const Ring& R = C.ideal.ring();
  const int d = C.degree;
  const int n = ell + d - 1;

  ExtremalityReport rep;
  rep.degree = d;
  rep.genus = C.genus;
  rep.level = ell;
  rep.s = min_surface_degree(C);
  rep.genus_extremal = C.genus == extremal_genus(d, ell);

  GradedIdeal Ld = GradedIdeal::line_power(R, d);
  rep.h0_curve = C.ideal.dim_slice(n);
  rep.h0_power = Ld.dim_slice(n);

  // The neighborhood ideal has no middle cohomology at n >= d-1: its
  // section count must match its Euler characteristic exactly.
  if (neighborhood_h0(d, n) != neighborhood_chi(d, n) ||
      (long long)rep.h0_power != binom(n + 3, 3) - neighborhood_chi(d, n))
    throw std::runtime_error(
        "extremality_report: neighborhood cohomology is inconsistent");
  rep.crit_sections = rep.genus_extremal && rep.h0_curve == rep.h0_power;

  long long chi = binom(n + 3, 3) - ((long long)d * n + 1 - C.genus);
  rep.h1_curve = rep.h0_curve - chi;
  if (rep.h1_curve < 0)
    throw std::runtime_error("extremality_report: negative h1");
  rep.crit_vanishing = rep.genus_extremal && rep.h1_curve == 0;

  const int hi = std::max(C.window, n + 4);
  Rng rng(seed);
  SliceChain V = ideal_chain(C.ideal, 0, hi);
  SliceChain W = ideal_chain(Ld, 0, hi);
  SheafAnalysis sheaf = sheaf_splitting(R, V, W, rng);
  rep.splitting = sheaf.splitting;
  rep.torsion_dims = sheaf.torsion_dims;
  std::vector<int> want((size_t)d * (d - 1) / 2, -(d + ell));
  rep.crit_splitting = sheaf.torsion_certified && sheaf.torsion_dims.empty() &&
                       sheaf.splitting.certified &&
                       sheaf.splitting.twists == want;

  rep.is_extremal = rep.crit_sections;
  return rep;
}

bool is_extremal(const MultiLineCurve& C, int ell, uint64_t seed) {
  ExtremalityReport rep = extremality_report(C, ell, seed);
  if (rep.crit_sections != rep.crit_vanishing ||
      rep.crit_sections != rep.crit_splitting)
    throw std::runtime_error("is_extremal: criteria disagree for " + C.recipe);
  return rep.is_extremal;
}

std::vector<QPType> admissible_types(int d, int ell, bool filtered) {
  if (d < 2 || ell < 0)
    throw std::invalid_argument("admissible_types: need d >= 2, l >= 0");
  std::vector<QPType> out;
  for (int a = ell; a <= ell + (d - 2) / 3; ++a) {
    long long sum = binom(d, 3) - (long long)(a - ell) * binom(d, 2);
    if (sum < 0) continue;
    if (d == 2) {
      if (sum == 0) out.push_back({a, {}});
      continue;
    }
    std::vector<int> b;
    append_b_tails(d, 1, (int)sum, b, out, a);
  }
  if (filtered && d >= 3) {
    int need = d == 3 ? 1 : 2;
    std::erase_if(out, [&](const QPType& t) {
      return t.a == ell && t.b[0] < need;
    });
  }
  return out;
}

bool genus_bound_holds(const MultiLineCurve& C, int ell) {
  if (!postulation_condition(C, ell))
    throw std::invalid_argument(
        "genus_bound_holds: postulation hypothesis fails for " + C.recipe);
  return C.genus <= extremal_genus(C.degree, ell);
}

} // namespace mlines
