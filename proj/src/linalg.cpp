#include "mlines/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace mlines {

std::vector<int> rref(MatF& m, const Fp& F) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int sel = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c) != 0) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = c; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
    uint32_t piv_inv = F.inv(m.at(r, c));
    for (int j = c; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), piv_inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      uint32_t f = m.at(i, c);
      if (f == 0) continue;
      uint32_t fneg = F.neg(f);
      const uint32_t* src = m.row(r);
      uint32_t* dst = m.row(i);
      for (int j = c; j < m.cols; ++j)
        dst[j] = F.reduce64(dst[j] + uint64_t(fneg) * src[j]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(MatF m, const Fp& F) { return int(rref(m, F).size()); }

std::pair<int, MatF> rank_kernel(MatF m, const Fp& F) {
  int n = m.cols;
  std::vector<int> pivots = rref(m, F);
  int r = int(pivots.size());
  std::vector<char> is_piv(n, 0);
  for (int c : pivots) is_piv[c] = 1;
  MatF ker(n - r, n);
  int k = 0;
  for (int c = 0; c < n; ++c) {
    if (is_piv[c]) continue;
    ker.at(k, c) = 1;
    for (int i = 0; i < r; ++i)
      ker.at(k, pivots[i]) = F.neg(m.at(i, c));
    ++k;
  }
  return {r, ker};
}

MatF row_basis(MatF m, const Fp& F) {
  std::vector<int> pivots = rref(m, F);
  MatF out(int(pivots.size()), m.cols);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

MatF mat_mul(const MatF& a, const MatF& b, const Fp& F) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul shape mismatch");
  MatF out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      uint32_t f = a.at(i, k);
      if (f == 0) continue;
      const uint32_t* src = b.row(k);
      uint32_t* dst = out.row(i);
      for (int j = 0; j < b.cols; ++j)
        dst[j] = F.reduce64(dst[j] + uint64_t(f) * src[j]);
    }
  return out;
}

uint32_t det(MatF m, const Fp& F) {
  if (m.rows != m.cols) throw std::invalid_argument("det needs a square matrix");
  uint32_t d = 1;
  for (int c = 0; c < m.cols; ++c) {
    int piv = -1;
    for (int r = c; r < m.rows; ++r)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = c; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, m.at(c, c));
    uint32_t inv = F.inv(m.at(c, c));
    for (int r = c + 1; r < m.rows; ++r) {
      uint32_t f = F.mul(m.at(r, c), inv);
      if (f == 0) continue;
      uint32_t nf = F.neg(f);
      for (int j = c; j < m.cols; ++j)
        m.at(r, j) = F.reduce64(m.at(r, j) + uint64_t(nf) * m.at(c, j));
    }
  }
  return d;
}

void SparseRow::sort_terms() {
  std::sort(t.begin(), t.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
}

SparseRow dense_to_sparse(const std::vector<uint32_t>& v) {
  SparseRow r;
  for (int i = 0; i < int(v.size()); ++i)
    if (v[i] != 0) r.t.push_back({i, v[i]});
  return r;
}

void EchelonBasis::load_scratch(const SparseRow& v,
                                std::vector<uint32_t>* coeffs) const {
  if (int(scratch_.size()) < cols_) scratch_.assign(cols_, 0);
  touched_.clear();
  for (auto& [c, x] : v.t) {
    scratch_[c] = x;
    touched_.push_back(c);
  }
  const Fp& F = *F_;
  const uint64_t p = F.p();
  // guard against accumulator overflow: renormalize lazily
  const uint64_t cap = ~uint64_t(0) - uint64_t(p - 1) * (p - 1);
  for (size_t i = 0; i < rows_.size(); ++i) {
    int pc = pivots_[i];
    uint64_t val = scratch_[pc] % p;
    scratch_[pc] = val;
    if (val == 0) continue;
    uint32_t f = F.neg(uint32_t(val)); // subtract val * row_i
    if (coeffs) (*coeffs)[i] = uint32_t(val);
    for (auto& [c, x] : rows_[i].t) {
      uint64_t cur = scratch_[c];
      if (cur == 0) touched_.push_back(c);
      uint64_t add = uint64_t(f) * x;
      if (cur > cap) cur %= p;
      scratch_[c] = cur + add;
    }
    scratch_[pc] = 0;
  }
}

SparseRow EchelonBasis::reduce(const SparseRow& v) const {
  load_scratch(v, nullptr);
  SparseRow out;
  for (int c : touched_) {
    uint32_t x = uint32_t(scratch_[c] % F_->p());
    scratch_[c] = 0;
    if (x) out.t.push_back({c, x});
  }
  out.sort_terms();
  // touched_ may repeat columns; collapse duplicates
  if (!out.t.empty()) {
    std::vector<std::pair<int, uint32_t>> dedup;
    for (auto& term : out.t) {
      if (!dedup.empty() && dedup.back().first == term.first)
        continue; // same column already emitted (scratch was zeroed after read)
      dedup.push_back(term);
    }
    out.t.swap(dedup);
  }
  return out;
}

bool EchelonBasis::insert(const SparseRow& v) {
  SparseRow r = reduce(v);
  if (r.empty()) return false;
  // normalize to unit pivot at the leading column
  uint32_t inv = F_->inv(r.t.front().second);
  int pc = r.t.front().first;
  SparseRow stored;
  stored.t.reserve(r.t.size() - 1);
  for (size_t i = 1; i < r.t.size(); ++i)
    stored.t.push_back({r.t[i].first, F_->mul(r.t[i].second, inv)});
  rows_.push_back(std::move(stored));
  pivots_.push_back(pc);
  row_of_pivot_[pc] = int(rows_.size()) - 1;
  return true;
}

std::optional<std::vector<uint32_t>> EchelonBasis::coordinates(
    const SparseRow& v) const {
  std::vector<uint32_t> coeffs(rows_.size(), 0);
  load_scratch(v, &coeffs);
  bool zero = true;
  for (int c : touched_) {
    if (scratch_[c] % F_->p() != 0) zero = false;
    scratch_[c] = 0;
  }
  if (!zero) return std::nullopt;
  return coeffs;
}

std::vector<int> EchelonBasis::pivots_sorted() const {
  std::vector<int> p = pivots_;
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<int> EchelonBasis::nonpivots() const {
  std::vector<int> out;
  out.reserve(cols_ - dim());
  for (int c = 0; c < cols_; ++c)
    if (!is_pivot(c)) out.push_back(c);
  return out;
}

std::vector<SparseRow> EchelonBasis::canonical_rows() const {
  // full back-reduction, in pivot order: a stored tail never touches the
  // pivot columns of earlier rows, so one reduction pass leaves a residual
  // supported on non-pivot columns only; unit pivot plus residual is the
  // reduced-echelon row
  std::vector<int> order(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pivots_[a] < pivots_[b]; });
  std::vector<SparseRow> out;
  out.reserve(rows_.size());
  for (int i : order) {
    SparseRow res = reduce(rows_[i]);
    SparseRow full;
    full.t.reserve(res.t.size() + 1);
    full.t.push_back({pivots_[i], 1});
    full.t.insert(full.t.end(), res.t.begin(), res.t.end());
    full.sort_terms();
    out.push_back(std::move(full));
  }
  return out;
}

EchelonBasis intersect(const EchelonBasis& a, const EchelonBasis& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("intersect: column mismatch");
  const Fp& F = a.field();
  // v = sum c_i a_i lies in b iff c lies in the kernel of the matrix of
  // residuals of a's rows modulo b, written over b's nonpivot columns
  std::vector<int> np = b.nonpivots();
  std::unordered_map<int, int> np_idx;
  for (int i = 0; i < int(np.size()); ++i) np_idx[np[i]] = i;
  MatF resid(int(np.size()), a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    SparseRow full;
    full.t.push_back({a.pivot(i), 1});
    for (auto& t : a.row(i).t) full.t.push_back(t);
    full.sort_terms();
    SparseRow r = b.reduce(full);
    for (auto& [c, x] : r.t) resid.at(np_idx.at(c), i) = x;
  }
  auto [rk, ker] = rank_kernel(std::move(resid), F);
  (void)rk;
  EchelonBasis out(a.cols(), F);
  for (int k = 0; k < ker.rows; ++k) {
    // assemble sum_i ker[k][i] * a_i ; kernel vectors are sparse (unit at a
    // free index plus entries at pivot indices), walk nonzeros only
    SparseRow acc;
    std::unordered_map<int, uint64_t> accmap;
    for (int i = 0; i < a.dim(); ++i) {
      uint32_t cf = ker.at(k, i);
      if (cf == 0) continue;
      accmap[a.pivot(i)] += cf;
      for (auto& [c, x] : a.row(i).t) accmap[c] += uint64_t(cf) * x;
    }
    for (auto& [c, x] : accmap) {
      uint32_t v = F.reduce64(x);
      if (v) acc.t.push_back({c, v});
    }
    acc.sort_terms();
    out.insert(acc);
  }
  return out;
}

} // namespace mlines
