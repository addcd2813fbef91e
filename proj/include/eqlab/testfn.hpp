#pragma once
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eqlab/sampling.hpp"

namespace eqlab::eq {

using dyn::ProjPoint;

enum class Family { smooth_chart, trig, bump, holder };

const char* family_name(Family f);

// Test function on P^1, stored as a chart-coordinate evaluator (canonical
// form: |coord| <= 1, inf_chart selects w/z, same convention as Atom and
// ProjPoint).  Norms are measured upper bounds, inflated by a safety factor
// and spot-verified; alpha is 1 for the C^1 families.
struct TestFunction {
  std::string id;
  Family family = Family::smooth_chart;
  double alpha = 1.0;
  double norm_c0 = 0;
  double norm_c1 = 0;
  double norm_alpha = 0;
  std::function<double(std::complex<double>, bool)> eval_chart;

  double operator()(std::complex<double> coord, bool inf_chart) const {
    return eval_chart(coord, inf_chart);
  }
  double operator()(const meas::Atom& a) const { return eval_chart(a.coord, a.inf_chart); }
  double operator()(const ProjPoint& x) const;
};

// phi([z:w]) = |z|^2 / (|z|^2 + |w|^2), the closed-form pairing function
TestFunction fubini_weight();
TestFunction constant_one();

// Reproducible family of `count` functions.  smooth_chart: rational
// chart-coordinate functions smooth across both charts; trig: low-order
// spherical-harmonic analogues in the R^3 embedding; bump: mollifiers at
// random centers; holder: |dist to center|^alpha kernels, alpha in
// {1/4, 1/2} alternating unless fixed by `alpha`.
std::vector<TestFunction> make_test_family(Family kind, int count, std::uint64_t rng_seed,
                                           double alpha = 0.5);

// Largest |phi(x)-phi(y)| / dist(x,y)^alpha over `pairs` random sphere
// pairs; the Hölder-pair spot check behind every stored norm
double holder_ratio(const TestFunction& fn, double alpha, int pairs, std::uint64_t rng_seed);

// uniform random point on the sphere in canonical chart form
std::pair<std::complex<double>, bool> random_chart_point(Rng& rng);

}  // namespace eqlab::eq
