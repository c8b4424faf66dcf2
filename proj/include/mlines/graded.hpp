#pragma once

#include <map>
#include <vector>

#include "mlines/poly.hpp"

namespace mlines {

// A homogeneous ideal presented degreewise.  Slices are echelon bases of the
// degree-n pieces, built lazily from slice(n-1) and the generators.  An ideal
// constructed from explicit slices extends above its construction window by
// the ideal span of the top slice.
class GradedIdeal {
public:
  static GradedIdeal from_generators(const Ring& R, std::vector<Polynomial> gens);
  static GradedIdeal from_slices(const Ring& R, std::vector<EchelonBasis> slices);
  // (x,y)^d, the degree-d neighborhood ideal of the line x = y = 0
  static GradedIdeal line_power(const Ring& R, int d);

  const Ring& ring() const { return *R_; }
  const std::vector<Polynomial>& generators() const { return gens_; }
  // true when the stored generators span every slice (ideals built from bare
  // slices have no usable generator list)
  bool generator_backed() const { return explicit_top_ < 0 || !gens_.empty(); }

  const EchelonBasis& slice(int n) const;
  int dim_slice(int n) const { return int(slice(n).rows().size()); }
  // dimension of the degree-n piece of the quotient ring
  int hilbert(int n) const { return R_->dim(n) - dim_slice(n); }
  bool contains(const Polynomial& p) const;

  // canonical representatives of a slice basis, for reporting
  std::vector<Polynomial> slice_polys(int n) const;

  // degree -> number of minimal generators required at that degree
  std::map<int, int> minimal_generator_counts(int top) const;

  // canonical minimal generators up to the given degree, usable to rebuild
  // the ideal even when no generator list was recorded
  std::vector<Polynomial> minimal_generators(int top) const;

  // Saturation with respect to the irrelevant ideal, computed inside the
  // window.  Fails unless the ideal is quiescent near the top of the window.
  GradedIdeal saturated(int window) const;

  GradedIdeal support_swapped() const;

private:
  explicit GradedIdeal(const Ring& R) : R_(&R) {}
  void ensure(int n) const;
  const Ring* R_;
  std::vector<Polynomial> gens_;
  int explicit_top_ = -1;
  mutable std::vector<EchelonBasis> slices_;
};

GradedIdeal ideal_sum(const GradedIdeal& a, const GradedIdeal& b);
GradedIdeal ideal_product(const GradedIdeal& a, const GradedIdeal& b);
// slicewise intersection, explicit through the given top degree
GradedIdeal ideal_intersection(const GradedIdeal& a, const GradedIdeal& b,
                               int top);

// Linear fit of the top of the quotient's dimension sequence.  For a curve
// the tail is deg*n + (1 - genus); certified requires three equal
// consecutive differences.
struct HilbertFit {
  int degree = 0;
  long long genus = 0;
  bool certified = false;
};
HilbertFit hilbert_fit(const GradedIdeal& I, int window);

} // namespace mlines
