#include "eqlab/tube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqlab/errors.hpp"

namespace eqlab::meas {

namespace {

double min_target_dist(const Atom& a, const std::vector<Atom>& targets) {
  double best = std::numeric_limits<double>::infinity();
  for (const Atom& t : targets)
    best = std::min(best, dyn::sph_dist_d(a.coord, a.inf_chart, t.coord, t.inf_chart));
  return best;
}

TubeMass weighted_fraction(const MeasureSample& sample, const std::vector<Atom>& targets,
                           double radius) {
  double hit = 0, sw = 0, sw2 = 0;
  for (const Atom& a : sample.atoms) {
    sw += a.weight;
    sw2 += a.weight * a.weight;
    if (min_target_dist(a, targets) <= radius) hit += a.weight;
  }
  double p = std::clamp(hit / sample.total_mass, 0.0, 1.0);
  // binomial normal approximation on the effective sample size, floored so a
  // clean 0 or 1 still reports nonzero uncertainty
  double n_eff = sw * sw / sw2;
  double half = 1.96 * std::sqrt(std::max(p * (1 - p), 1.0 / n_eff) / n_eff);
  return {p, half};
}

}  // namespace

TubeQuery tube_query_from_points(const std::vector<ProjPoint>& v, double radius,
                                 double kappa) {
  TubeQuery q;
  q.radius = radius;
  q.kappa = kappa;
  q.targets.reserve(v.size());
  for (const ProjPoint& x : v) q.targets.push_back(Atom::from_point(x, 0.0));
  return q;
}

TubeMass tube_mass(const MeasureSample& sample, const TubeQuery& q) {
  if (sample.atoms.empty()) throw ValidationError("tube mass needs a nonempty sample");
  if (!(q.radius > 0)) throw ValidationError("tube radius must be positive");
  if (q.targets.size() < 2)
    throw ValidationError("tube target set needs at least 2 points");
  return weighted_fraction(sample, q.targets, q.radius);
}

TubeMass fiber_tube_mass(const ProductSample& sample, FiberAxis axis,
                         const std::vector<Atom>& through, double radius) {
  const MeasureSample& comp = axis == FiberAxis::first ? sample.first : sample.second;
  if (comp.atoms.empty()) throw ValidationError("tube mass needs a nonempty sample");
  if (!(radius > 0)) throw ValidationError("tube radius must be positive");
  if (through.size() < 2)
    throw ValidationError("fiber union needs at least 2 base points");
  return weighted_fraction(comp, through, radius);
}

ModerateFit moderateness_fit(const MeasureSample& sample, const Atom& h,
                             const std::vector<double>& radii) {
  if (sample.atoms.empty()) throw ValidationError("moderateness fit needs a nonempty sample");
  std::vector<Atom> one{h};
  std::vector<std::pair<double, double>> pts;  // (log t, log mass)
  for (double t : radii) {
    if (!(t > 0)) throw ValidationError("moderateness radii must be positive");
    double m = weighted_fraction(sample, one, t).estimate;
    if (m > 0) pts.emplace_back(std::log(t), std::log(m));
  }
  if (pts.size() < 3)
    throw ValidationError("moderateness fit needs at least 3 radii with mass");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(pts.size());
  double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - beta * sx) / n;
  return {std::exp(intercept), beta, static_cast<int>(pts.size())};
}

}  // namespace eqlab::meas
