#include "mlines/graded.hpp"

#include <algorithm>
#include <stdexcept>

namespace mlines {

namespace {

// full sparse row of an echelon basis element: unit pivot plus stored tail
SparseRow full_row(const EchelonBasis& E, size_t i) {
  SparseRow r;
  const SparseRow& tail = E.row(i);
  r.t.reserve(tail.t.size() + 1);
  r.t.push_back({E.pivot(i), 1});
  r.t.insert(r.t.end(), tail.t.begin(), tail.t.end());
  return r;
}

// multiplication by a variable is monotone on sorted index rows
SparseRow shifted(const SparseRow& r, const std::vector<int>& map) {
  SparseRow s;
  s.t.reserve(r.t.size());
  for (const auto& [i, c] : r.t) s.t.push_back({map[i], c});
  return s;
}

} // namespace

GradedIdeal GradedIdeal::from_generators(const Ring& R,
                                         std::vector<Polynomial> gens) {
  GradedIdeal I(R);
  for (auto& g : gens)
    if (!g.is_zero()) I.gens_.push_back(std::move(g));
  std::sort(I.gens_.begin(), I.gens_.end(),
            [](const Polynomial& a, const Polynomial& b) {
              return a.degree() < b.degree();
            });
  return I;
}

GradedIdeal GradedIdeal::from_slices(const Ring& R,
                                     std::vector<EchelonBasis> slices) {
  GradedIdeal I(R);
  I.explicit_top_ = int(slices.size()) - 1;
  I.slices_ = std::move(slices);
  return I;
}

GradedIdeal GradedIdeal::line_power(const Ring& R, int d) {
  std::vector<Polynomial> gens;
  gens.reserve(d + 1);
  for (int i = 0; i <= d; ++i) {
    Mono m;
    m.e[0] = uint8_t(d - i);
    m.e[1] = uint8_t(i);
    gens.push_back(Polynomial::term(m, 1));
  }
  return from_generators(R, std::move(gens));
}

void GradedIdeal::ensure(int n) const {
  while (int(slices_.size()) <= n) {
    int k = int(slices_.size());
    EchelonBasis E(R_->dim(k), R_->field());
    if (k > 0) {
      const EchelonBasis& prev = slices_[k - 1];
      for (int v = 0; v < 4; ++v) {
        const std::vector<int>& map = R_->shift(k - 1, v);
        for (size_t i = 0; i < prev.rows().size(); ++i)
          E.insert(shifted(full_row(prev, i), map));
      }
    }
    for (const Polynomial& g : gens_)
      if (g.degree() == k) E.insert(R_->row_of(g));
    slices_.push_back(std::move(E));
  }
}

const EchelonBasis& GradedIdeal::slice(int n) const {
  if (n < 0) throw std::invalid_argument("negative degree");
  ensure(n);
  return slices_[n];
}

bool GradedIdeal::contains(const Polynomial& p) const {
  if (p.is_zero()) return true;
  return slice(p.degree()).contains(R_->row_of(p));
}

std::vector<Polynomial> GradedIdeal::slice_polys(int n) const {
  std::vector<Polynomial> out;
  for (const SparseRow& r : slice(n).canonical_rows()) out.push_back(R_->poly_of(n, r));
  return out;
}

std::map<int, int> GradedIdeal::minimal_generator_counts(int top) const {
  std::map<int, int> out;
  for (int n = 0; n <= top; ++n) {
    int span_dim = 0;
    if (n > 0) {
      const EchelonBasis& prev = slice(n - 1);
      EchelonBasis E(R_->dim(n), R_->field());
      for (int v = 0; v < 4; ++v) {
        const std::vector<int>& map = R_->shift(n - 1, v);
        for (size_t i = 0; i < prev.rows().size(); ++i)
          E.insert(shifted(full_row(prev, i), map));
      }
      span_dim = int(E.rows().size());
    }
    int extra = dim_slice(n) - span_dim;
    if (extra > 0) out[n] = extra;
  }
  return out;
}

std::vector<Polynomial> GradedIdeal::minimal_generators(int top) const {
  std::vector<Polynomial> out;
  for (int n = 0; n <= top; ++n) {
    EchelonBasis E(R_->dim(n), R_->field());
    if (n > 0) {
      const EchelonBasis& prev = slice(n - 1);
      for (int v = 0; v < 4; ++v) {
        const std::vector<int>& map = R_->shift(n - 1, v);
        for (size_t i = 0; i < prev.rows().size(); ++i)
          E.insert(shifted(full_row(prev, i), map));
      }
    }
    for (const SparseRow& r : slice(n).canonical_rows())
      if (E.insert(r)) out.push_back(R_->poly_of(n, r));
  }
  return out;
}

GradedIdeal GradedIdeal::saturated(int window) const {
  if (window < 3) throw std::invalid_argument("saturation window too small");
  const Fp& F = R_->field();
  std::vector<EchelonBasis> S;
  S.reserve(window + 1);
  for (int n = 0; n <= window; ++n) S.push_back(slice(n));
  std::vector<Polynomial> added;
  int top_growth = -1;

  for (int n = window - 1; n >= 0; --n) {
    const std::vector<int>& np = S[n].nonpivots();
    if (np.empty()) continue;
    const std::vector<int>& np1 = S[n + 1].nonpivots();
    std::vector<int> pos(R_->dim(n + 1), -1);
    for (int j = 0; j < int(np1.size()); ++j) pos[np1[j]] = j;

    // columns: complement monomials of degree n; rows: four reduced images
    MatF M(4 * int(np1.size()), int(np.size()));
    for (int r = 0; r < int(np.size()); ++r)
      for (int v = 0; v < 4; ++v) {
        SparseRow unit;
        unit.t.push_back({R_->shift(n, v)[np[r]], 1});
        SparseRow res = S[n + 1].reduce(unit);
        for (const auto& [col, c] : res.t)
          M.at(v * int(np1.size()) + pos[col], r) = c;
      }
    auto [rk, K] = rank_kernel(std::move(M), F);
    (void)rk;
    if (K.rows == 0) continue;
    top_growth = std::max(top_growth, n);
    for (int r = 0; r < K.rows; ++r) {
      SparseRow row;
      for (int j = 0; j < int(np.size()); ++j)
        if (K.at(r, j) != 0) row.t.push_back({np[j], K.at(r, j)});
      added.push_back(R_->poly_of(n, row));
      S[n].insert(std::move(row));
    }
  }
  if (top_growth > window - 3)
    throw std::runtime_error("saturation window too small");

  GradedIdeal out = from_slices(*R_, std::move(S));
  out.gens_ = gens_;
  for (auto& p : added) out.gens_.push_back(std::move(p));
  std::sort(out.gens_.begin(), out.gens_.end(),
            [](const Polynomial& a, const Polynomial& b) {
              return a.degree() < b.degree();
            });
  return out;
}

GradedIdeal GradedIdeal::support_swapped() const {
  std::vector<Polynomial> gens;
  gens.reserve(gens_.size());
  for (const Polynomial& g : gens_) gens.push_back(g.support_swapped());
  if (explicit_top_ < 0) return from_generators(*R_, std::move(gens));
  if (gens.empty())
    throw std::logic_error("support swap requires a generator presentation");
  // explicit slices with a complete generator list: swapping the generators
  // reproduces the same ideal on the other line
  return from_generators(*R_, std::move(gens));
}

GradedIdeal ideal_sum(const GradedIdeal& a, const GradedIdeal& b) {
  if (!a.generator_backed() || !b.generator_backed())
    throw std::logic_error("ideal_sum requires generator-backed operands");
  std::vector<Polynomial> gens = a.generators();
  const auto& bg = b.generators();
  gens.insert(gens.end(), bg.begin(), bg.end());
  return GradedIdeal::from_generators(a.ring(), std::move(gens));
}

GradedIdeal ideal_product(const GradedIdeal& a, const GradedIdeal& b) {
  if (!a.generator_backed() || !b.generator_backed())
    throw std::logic_error("ideal_product requires generator-backed operands");
  std::vector<Polynomial> gens;
  gens.reserve(a.generators().size() * b.generators().size());
  for (const Polynomial& f : a.generators())
    for (const Polynomial& g : b.generators())
      gens.push_back(poly_mul(f, g, a.ring().field()));
  return GradedIdeal::from_generators(a.ring(), std::move(gens));
}

GradedIdeal ideal_intersection(const GradedIdeal& a, const GradedIdeal& b,
                               int top) {
  std::vector<EchelonBasis> slices;
  slices.reserve(top + 1);
  for (int n = 0; n <= top; ++n) slices.push_back(intersect(a.slice(n), b.slice(n)));
  return GradedIdeal::from_slices(a.ring(), std::move(slices));
}

HilbertFit hilbert_fit(const GradedIdeal& I, int window) {
  HilbertFit fit;
  if (window < 3) return fit;
  long long h[4];
  for (int i = 0; i < 4; ++i) h[i] = I.hilbert(window - 3 + i);
  long long d1 = h[1] - h[0], d2 = h[2] - h[1], d3 = h[3] - h[2];
  fit.degree = int(d3);
  fit.genus = fit.degree * (long long)window + 1 - h[3];
  fit.certified = (d1 == d2 && d2 == d3);
  return fit;
}

} // namespace mlines
