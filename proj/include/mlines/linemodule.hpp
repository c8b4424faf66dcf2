#pragma once

#include <map>
#include <vector>

#include "mlines/graded.hpp"
#include "mlines/poly.hpp"

namespace mlines {

// Chain of subspaces of the polynomial slices, one echelon basis per degree
// in [lo, hi].  Chains fed to the module machinery must be stable under
// multiplication by the two line coordinates.
struct SliceChain {
  int lo = 0;
  std::vector<EchelonBasis> E;
  int hi() const { return lo + int(E.size()) - 1; }
  const EchelonBasis& at(int n) const { return E[n - lo]; }
  EchelonBasis& at(int n) { return E[n - lo]; }
};

SliceChain ideal_chain(const GradedIdeal& I, int lo, int hi);
SliceChain full_chain(const Ring& R, int lo, int hi);
SliceChain zero_chain(const Ring& R, int lo, int hi);

// A graded module over the line's coordinate ring, given degreewise.
// Z[i] and W[i] act on row vectors, mapping degree lo+i to degree lo+i+1.
struct LineModule {
  int lo = 0;
  std::vector<int> dims;
  std::vector<MatF> Z, W;
  int hi() const { return lo + int(dims.size()) - 1; }
  int dim(int n) const {
    int i = n - lo;
    return (i < 0 || i >= int(dims.size())) ? 0 : dims[i];
  }
};

// Quotient module V/W together with ambient representatives of the chosen
// basis: reps[i][j] is the degree lo+i basis vector j as a polynomial row.
struct ModulePresentation {
  LineModule mod;
  std::vector<std::vector<SparseRow>> reps;
};

// requires W.at(n) contained in V.at(n) and both chains z,w stable
ModulePresentation subquotient_module(const Ring& R, const SliceChain& V,
                                      const SliceChain& W);

// Torsion of V/W: the largest chain T between W and V with T/W killed
// degreewise by forms in the line coordinates.  Detection combines a
// downward sweep for the irrelevant part with factor candidates read off
// rank drops of the multiplication pencil near the top of the window.
struct TorsionResult {
  SliceChain closure;
  std::map<int, int> torsion_dims;
  bool certified = false;
};
TorsionResult torsion_closure(const Ring& R, const SliceChain& V,
                              const SliceChain& W, Rng& rng);

// Rebuild slices below the top two by the section gluing kernel
//   M'(n) = ker(M(n+1) x M(n+1) -> M(n+2)), (a,b) -> w a - z b,
// extending the window down to the given degree.
LineModule section_completion(const LineModule& M, int down_to, const Fp& F);

// degree -> number of minimal module generators at that degree
std::map<int, int> generator_degrees(const LineModule& M, const Fp& F);

// Twists of the free summands, descending.  Certified when the dimension
// sequence over the whole window matches the free module on the generators
// found.
struct Splitting {
  std::vector<int> twists;
  bool certified = false;
};
Splitting splitting_from_generators(const LineModule& M,
                                    const std::map<int, int>& gens);

// Full pipeline for the sheaf associated to V/W: remove torsion, complete
// sections downward, read off the splitting.
struct SheafAnalysis {
  Splitting splitting;
  std::map<int, int> torsion_dims;
  std::map<int, int> generator_counts;
  bool torsion_certified = false;
};
SheafAnalysis sheaf_splitting(const Ring& R, const SliceChain& V,
                              const SliceChain& W, Rng& rng);

} // namespace mlines
