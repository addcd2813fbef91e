#pragma once
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "eqlab/green.hpp"
#include "eqlab/maps.hpp"

namespace eqlab::per {

using dyn::ProjPoint;
using dyn::RationalMap;
using meas::Membership;

enum class Classification { repelling, attracting, indifferent };

const char* classification_name(Classification c);
const char* membership_name(Membership m);

// |multiplier| within this band of 1 classifies as indifferent; below the
// band numerical classification at default precision is meaningless
inline constexpr double kIndifferenceBand = 1e-8;

struct PeriodicPoint {
  ProjPoint location;
  int period = 0;
  int minimal_period = 0;  // filled by minimal_periods, defaults to period
  std::complex<double> multiplier;
  double multiplier_modulus = 0;
  Classification classification = Classification::repelling;
  Membership in_small_julia = Membership::outside;
  double residual = 0;  // spherical distance between f^n(x) and x
  int multiplicity = 1;
};

struct CycleCounts {
  long long with_multiplicity = 0;
  long long distinct = 0;
  long long repelling = 0;  // tallies carry multiplicity
  long long attracting = 0;
  long long indifferent = 0;
};

// points holds one entry per root cluster (distinct location) with its
// multiplicity; with_multiplicity sums to (d^(2n)-1)/(d^n-1) = d^n + 1
struct CycleSet {
  std::vector<PeriodicPoint> points;
  int n = 0;
  int degree = 0;
  CycleCounts counts;
};

enum class Backend { automatic, expand, newton_seeded, cross_check };

// All solutions of f^n(x) = x on P^1, with multiplier, classification,
// Julia membership, and residual.  expand solves the degree d^n + 1
// fixed-point polynomial at a precision elevated above the coefficient
// mass; newton_seeded (polynomial maps) runs Newton on f^n(z) - z from a
// preimage-tree cloud plus circle rings and checks completeness against
// the exact count; cross_check runs both and fails hard on mismatch.
CycleSet find_periodic(const RationalMap& map, int n, Backend backend = Backend::automatic,
                       double julia_tol = 1e-3);

// largest multiset-matching distance between the two point clouds,
// multiplicity-aware; used for backend agreement checks
double cycle_set_distance(const CycleSet& a, const CycleSet& b);

// marks minimal periods by sieving against the CycleSets of all proper
// divisors of n (tolerance 1e-12 in spherical distance)
CycleSet minimal_periods(const CycleSet& cs, const std::map<int, CycleSet>& lower);

// P_{n,gamma}: members of the Julia boundary-band whose inverse multiplier
// satisfies 1/|m| <= d^(-(1-gamma)n/2)
CycleSet filter_repelling_gamma(const CycleSet& cs, double gamma);

// A_n: non-repelling count with multiplicity; B_n: count with multiplicity
// outside the small Julia set (anything not boundary-band)
struct ExceptionalCounts {
  long long a_n = 0;
  long long b_n = 0;
};
ExceptionalCounts count_exceptional(const CycleSet& cs);

// product map P_n = cartesian product of component results
struct ProductCycleSet {
  CycleSet first, second;
  int n = 0;
  long long with_multiplicity = 0;  // product of component totals
};
ProductCycleSet find_periodic_product(const dyn::ProductMap& map, int n,
                                      Backend backend = Backend::automatic,
                                      double julia_tol = 1e-3);

// product point is repelling iff both components are; it lies in the small
// Julia set iff both components are boundary-band
ExceptionalCounts count_exceptional_product(const ProductCycleSet& pcs);

// distinct non-repelling cycles with minimal period <= max_n (each cycle of
// minimal period p contributes once, not p times)
long long nonrepelling_cycle_count(const RationalMap& map, int max_n,
                                   Backend backend = Backend::automatic);

// CSV report: header plus one row per distinct point,
// re,im,chart,period,minimal_period,multiplier_modulus,class,julia_flag,multiplicity,residual
std::string cycle_csv(const CycleSet& cs);

}  // namespace eqlab::per
