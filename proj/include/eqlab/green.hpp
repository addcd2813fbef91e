#pragma once
#include <complex>
#include <optional>
#include <vector>

#include "eqlab/maps.hpp"

namespace eqlab::meas {

using dyn::Chart;
using dyn::ProjPoint;
using dyn::RationalMap;

// Double-precision evaluator of the homogeneous lift.  The state is a
// max-norm-1 pair; each step evaluates the chart split of (P, Q) and records
// the renormalizer, so nothing ever overflows.
class DoubleLift {
 public:
  explicit DoubleLift(const RationalMap& map);

  int degree() const { return d_; }

  struct Step {
    std::complex<double> a, b;  // next pair, max-norm 1
    double log_m;               // log of the renormalizer
  };
  Step step(std::complex<double> a, std::complex<double> b) const;

  // one application in canonical chart form (coord, at_infinity_chart)
  std::pair<std::complex<double>, bool> apply_chart(std::complex<double> coord,
                                                    bool inf_chart) const;

  // sup and inf of ||F|| on the max-norm sphere: sup from coefficient sums,
  // inf from a gridded scan with a factor-2 safety margin
  double sup_log() const { return sup_log_; }
  double inf_log() const { return inf_log_; }

 private:
  std::complex<double> horner(const std::vector<std::complex<double>>& c,
                              std::complex<double> t) const;
  int d_ = 0;
  std::vector<std::complex<double>> pc_, qc_, prc_, qrc_;
  double sup_log_ = 0, inf_log_ = 0;
};

struct GreenValue {
  double value = 0;        // +infinity at the pole of a polynomial map
  double error_bound = 0;  // rigorous |G_depth - G| bound, C * d^(-depth)
};

// Escape-rate Green function.  Polynomial maps report the log+ |f^n|
// normalization (nonnegative in the limit, log|z| + O(1) at infinity);
// general rational maps report the potential on max-norm-1 representatives.
class GreenEvaluator {
 public:
  GreenEvaluator(const RationalMap& map, int depth);

  int depth() const { return depth_; }
  double error_constant() const { return error_constant_; }
  bool log_plus_form() const { return log_plus_; }

  GreenValue value(const ProjPoint& x) const;
  GreenValue value_at(std::complex<double> coord, bool inf_chart) const;

 private:
  DoubleLift lift_;
  int depth_;
  double error_constant_;
  bool log_plus_;
};

GreenValue green_value(const RationalMap& map, const ProjPoint& x, int depth);

enum class Membership { inside, outside, boundary_band };

// Julia membership classifier.  Polynomial maps: G against tolerance plus an
// 8-point star of chart radius tolerance^(1/3) (boundary-band means G small
// but some star point escapes).  Other maps fall back to proximity to a
// sampled preimage tree of the support; they never report inside.
class JuliaClassifier {
 public:
  JuliaClassifier(const RationalMap& map, double tolerance);

  double tolerance() const { return tol_; }
  Membership classify(const ProjPoint& x) const;
  Membership classify_chart(std::complex<double> coord, bool inf_chart) const;

 private:
  double tol_, star_radius_;
  bool escape_mode_;
  std::optional<GreenEvaluator> eval_;                          // escape mode
  std::vector<std::pair<std::complex<double>, bool>> support_;  // fallback mode
};

Membership julia_membership(const RationalMap& map, const ProjPoint& x, double tolerance);

}  // namespace eqlab::meas
