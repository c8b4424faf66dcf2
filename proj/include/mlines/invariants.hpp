#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mlines/factory.hpp"

namespace mlines {

// Largest genus of a degree-d space curve not lying on a surface of degree
// less than s, for 1 <= s <= d.
long long max_genus_bound(int d, int s);

// Genus forced on a degree-d extremal curve at level l: the bound for s = d
// dropped by l*C(d,2).
long long extremal_genus(int d, int ell);

// Genus of a quasiprimitive d-uple line of type (a; b_2,...,b_{d-1}).
long long quasiprimitive_genus(int d, const QPType& type);

// Dimension of the irreducible family of quasiprimitive d-uple lines of the
// given type.  Known for types (a; 0,...,0,b,c) (at most the last two
// entries nonzero, covering all primitive, triple and quadruple types).
long long family_dimension(int d, const QPType& type);

// Smallest degree of a surface containing the curve.
int min_surface_degree(const MultiLineCurve& C);

// Whether the curve has the same postulation as the d-th neighborhood of
// its support line in every degree up to l+d-1.
bool postulation_condition(const MultiLineCurve& C, int ell);

// The three equivalent extremality criteria at level l, evaluated
// independently: section count against the line neighborhood, vanishing of
// the first cohomology of the twisted ideal sheaf, and the splitting of
// I_C/I_L^d into d(d-1)/2 line bundles of twist -(d+l).
struct ExtremalityReport {
  int degree = 0;
  long long genus = 0;
  int s = 0;
  int level = 0;
  int h0_curve = 0;      // sections of I_C(l+d-1)
  int h0_power = 0;      // sections of I_L^d(l+d-1)
  long long h1_curve = 0;
  bool genus_extremal = false;
  Splitting splitting;
  std::map<int, int> torsion_dims;
  bool crit_sections = false;
  bool crit_vanishing = false;
  bool crit_splitting = false;
  bool is_extremal = false;
};
ExtremalityReport extremality_report(const MultiLineCurve& C, int ell,
                                     uint64_t seed = 1);

// Consensus of the three criteria; throws when they disagree.
bool is_extremal(const MultiLineCurve& C, int ell, uint64_t seed = 1);

// Quasiprimitive types numerically admissible for an extremal d-uple line at
// level l: a in [l, l + (d-2)/3], superadditive b with
// sum b_j = C(d,3) - (a-l) C(d,2).  With `filtered` the classification of
// double, triple and quadruple substructures is applied on top:
// a > l, or b_2 >= 1 (d = 3) resp. b_2 >= 2 (d >= 4).
std::vector<QPType> admissible_types(int d, int ell, bool filtered);

// Checks genus(C) <= extremal_genus(d, l); requires the postulation
// hypothesis, and throws when the curve does not satisfy it.
bool genus_bound_holds(const MultiLineCurve& C, int ell);

} // namespace mlines
