#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mlines/fp.hpp"

namespace mlines {

// Dense row-major matrix over Fp.  Used for the small generic solves
// (kernels of action maps, rank checks); the big graded slices live in
// EchelonBasis instead.
struct MatF {
  int rows = 0, cols = 0;
  std::vector<uint32_t> a;

  MatF() = default;
  MatF(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}
  uint32_t& at(int r, int c) { return a[size_t(r) * cols + c]; }
  uint32_t at(int r, int c) const { return a[size_t(r) * cols + c]; }
  uint32_t* row(int r) { return a.data() + size_t(r) * cols; }
  const uint32_t* row(int r) const { return a.data() + size_t(r) * cols; }
};

// In-place reduced row echelon form; returns the pivot column of each
// surviving row (rows below the rank are zeroed but kept).
std::vector<int> rref(MatF& m, const Fp& F);

int rank(MatF m, const Fp& F);

// rank plus a basis of the right kernel {v : M v = 0}, kernel vectors as rows.
std::pair<int, MatF> rank_kernel(MatF m, const Fp& F);

// rows of `m` spanning its row space, reduced; convenience wrapper.
MatF row_basis(MatF m, const Fp& F);

MatF mat_mul(const MatF& a, const MatF& b, const Fp& F);

// determinant of a square matrix
uint32_t det(MatF m, const Fp& F);

// A sparse vector: sorted (column, value) pairs with values in (0, p).
struct SparseRow {
  std::vector<std::pair<int, uint32_t>> t;
  bool empty() const { return t.empty(); }
  int leading() const { return t.front().first; }
  void sort_terms();
};

SparseRow dense_to_sparse(const std::vector<uint32_t>& v);

// Row space of a set of vectors kept in echelon form: every row has a unit
// pivot column, and is reduced against all rows inserted before it.  Rows
// are immutable once inserted, so reduction of a new vector replays the
// rows in insertion order.  Tails only touch columns that were non-pivot at
// insertion time, which keeps rows sparse when the span has small codimension.
class EchelonBasis {
public:
  explicit EchelonBasis(int cols, const Fp& F) : cols_(cols), F_(&F) {}

  int dim() const { return int(rows_.size()); }
  int cols() const { return cols_; }
  const Fp& field() const { return *F_; }

  // reduce v against the basis and insert the residual if nonzero;
  // returns true when the dimension grew
  bool insert(const SparseRow& v);

  // residual of v modulo the row space
  SparseRow reduce(const SparseRow& v) const;

  bool contains(const SparseRow& v) const { return reduce(v).empty(); }

  // coefficients c with v = sum c_i row_i, if v lies in the span
  std::optional<std::vector<uint32_t>> coordinates(const SparseRow& v) const;

  const std::vector<SparseRow>& rows() const { return rows_; }
  const SparseRow& row(int i) const { return rows_[i]; }
  int pivot(int i) const { return pivots_[i]; }
  std::vector<int> pivots_sorted() const;
  bool is_pivot(int col) const { return row_of_pivot_.count(col) > 0; }

  // columns that are not pivots, ascending
  std::vector<int> nonpivots() const;

  // fully back-reduced canonical rows, sorted by pivot column
  std::vector<SparseRow> canonical_rows() const;

private:
  void load_scratch(const SparseRow& v, std::vector<uint32_t>* coeffs) const;

  int cols_;
  const Fp* F_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivots_;
  std::unordered_map<int, int> row_of_pivot_;
  mutable std::vector<uint64_t> scratch_;
  mutable std::vector<int> touched_;
};

// intersection of two row spaces over the same column space
EchelonBasis intersect(const EchelonBasis& a, const EchelonBasis& b);

} // namespace mlines
