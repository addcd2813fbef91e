#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/periodic.hpp"
#include "eqlab/sampling.hpp"
#include "eqlab/testfn.hpp"

namespace eqlab::eq {

using dyn::RationalMap;
using meas::MeasureSample;

// integral of phi against a minus the same against b, both weighted by the
// stored atom weights (total masses are NOT normalized away)
double pair_measures(const MeasureSample& a, const MeasureSample& b, const TestFunction& phi);

// 95% half-width of the Monte Carlo error on <sample, phi>; zero for the
// deterministic provenances (exact quadrature, trees, periodic points)
double pairing_ci(const MeasureSample& sample, const TestFunction& phi);

struct RatePoint {
  int n = 0;
  double pairing = 0;  // |<empirical - reference, phi>|
  double ci = 0;
  bool used = true;  // false: excluded from the fit (below CI floor or zero)
};

struct RateFit {
  std::vector<RatePoint> series;
  double prefactor = 0;    // A in A * base^n
  double base = 0;         // xi
  double base_lo = 0;      // bootstrap CI; degenerate when the reference is exact
  double base_hi = 0;
  double r2 = 0;           // goodness of the log-linear fit
  double envelope_c = 0;   // smallest C with pairing <= C * d^(-n/3), preimage fits
  bool envelope_check = false;
  std::string note;
};

// Weighted log-linear fit of pairing ~ A * base^n over the used entries.
// Entries with pairing <= 3*ci or pairing <= 0 are excluded; fewer than 4
// usable points refuse the fit.
RateFit fit_rate(std::vector<RatePoint> series);

enum class QChoice { repelling_gamma, repelling, all };

// CycleSet as a measure: one atom per distinct point, weight d^(-n) per unit
// of multiplicity
MeasureSample periodic_sample(const per::CycleSet& cs);

// reference measure for the map: exact quadrature nodes for z^2 and z^2 - 2,
// else a backward-orbit sample with >= `atoms` atoms seeded from `rng_seed`
MeasureSample reference_measure(const RationalMap& map, int atoms, std::uint64_t rng_seed);

// |<d^(-n) sum_{P_n} delta - mu_ref, phi>| for n in [n_lo, n_hi], log-linear
// rate fit, bootstrap CI over reference atoms when the reference is Monte
// Carlo.  envelope_check records base_hi < 1 (the exponential-rate claim).
RateFit periodic_discrepancy(const RationalMap& map, int n_lo, int n_hi, const TestFunction& phi,
                             QChoice choice = QChoice::repelling_gamma, double gamma = 0.5,
                             std::uint64_t rng_seed = 1, int ref_atoms = 100000,
                             const MeasureSample* mu_ref = nullptr);

// |<d^(-m) (f^m)* delta_a - mu_ref, phi>| for m in [m_lo, m_hi] (truncated at
// the atom cap with a note), rate fit plus the d^(-m/3) envelope:
// envelope_c is the smallest dominating constant and envelope_check asserts
// the fitted decay is at least d^(-1/3).  Requires a to keep clear of the
// order-n0 postcritical proxy.
RateFit preimage_discrepancy(const RationalMap& map, const dyn::ProjPoint& a, int m_lo, int m_hi,
                             const TestFunction& phi, std::uint64_t rng_seed = 1,
                             int ref_atoms = 100000, long long atom_cap = 1 << 20, int n0 = 5,
                             const MeasureSample* mu_ref = nullptr);

// CSV report: (map_hash, phi_id, choice, n, pairing, ci) rows
std::string rate_csv(const RationalMap& map, const std::string& phi_id, const std::string& choice,
                     const RateFit& fit);

// JSON fragment with the fitted parameters
std::string fit_json(const RateFit& fit);

}  // namespace eqlab::eq
