#include "eqlab/green.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eqlab/errors.hpp"
#include "eqlab/sampling.hpp"

namespace eqlab::meas {

namespace {

std::vector<std::complex<double>> to_doubles(const mp::Poly& p) {
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<size_t>(p.degree()) + 1);
  for (const auto& c : p.coeffs()) {
    std::complex<double> v = c.to_complex();
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("map coefficient exceeds double range for the lift");
    out.push_back(v);
  }
  return out;
}

double coeff_sum(const std::vector<std::complex<double>>& c) {
  double s = 0;
  for (auto v : c) s += std::abs(v);
  return s;
}

}  // namespace

DoubleLift::DoubleLift(const RationalMap& map)
    : d_(map.degree()),
      pc_(to_doubles(map.p())),
      qc_(to_doubles(map.q())),
      prc_(to_doubles(map.p_rev())),
      qrc_(to_doubles(map.q_rev())) {
  sup_log_ = std::log(std::max(coeff_sum(pc_), coeff_sum(qc_)));

  // inf ||F|| over the max-norm sphere, scanned on both faces |a|=1 and
  // |b|=1 through the quotient parameter t in the closed unit disk, with a
  // factor-2 margin for grid coarseness
  double lo = std::numeric_limits<double>::infinity();
  constexpr int kRad = 16, kAng = 32;
  for (int face = 0; face < 2; ++face) {
    const auto& num = face == 0 ? prc_ : pc_;
    const auto& den = face == 0 ? qrc_ : qc_;
    for (int l = 0; l <= kRad; ++l) {
      double r = static_cast<double>(l) / kRad;
      int angles = l == 0 ? 1 : kAng;
      for (int k = 0; k < angles; ++k) {
        std::complex<double> t = std::polar(r, 2 * std::numbers::pi * k / kAng);
        double v = std::max(std::abs(horner(num, t)), std::abs(horner(den, t)));
        lo = std::min(lo, v);
      }
    }
  }
  inf_log_ = std::log(std::max(lo / 2, 1e-300));
}

std::complex<double> DoubleLift::horner(const std::vector<std::complex<double>>& c,
                                        std::complex<double> t) const {
  std::complex<double> acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

DoubleLift::Step DoubleLift::step(std::complex<double> a, std::complex<double> b) const {
  std::complex<double> pa, pb;
  if (std::norm(a) <= std::norm(b)) {
    std::complex<double> t = a / b;  // |b| = 1 up to rounding
    pa = horner(pc_, t);
    pb = horner(qc_, t);
  } else {
    std::complex<double> t = b / a;
    pa = horner(prc_, t);
    pb = horner(qrc_, t);
  }
  double m = std::max(std::abs(pa), std::abs(pb));
  if (m == 0 || !std::isfinite(m)) throw NumericalError("lift iteration left the sphere");
  return {pa / m, pb / m, std::log(m)};
}

std::pair<std::complex<double>, bool> DoubleLift::apply_chart(std::complex<double> coord,
                                                              bool inf_chart) const {
  std::complex<double> a = inf_chart ? std::complex<double>(1, 0) : coord;
  std::complex<double> b = inf_chart ? coord : std::complex<double>(1, 0);
  Step s = step(a, b);
  if (std::norm(s.a) <= std::norm(s.b)) return {s.a / s.b, false};
  return {s.b / s.a, true};
}

GreenEvaluator::GreenEvaluator(const RationalMap& map, int depth)
    : lift_(map), depth_(depth), log_plus_(map.is_polynomial()) {
  if (!map.is_dynamical()) throw ValidationError("green function needs degree at least 2");
  if (depth < 1) throw ValidationError("green depth must be at least 1");
  double k = std::max({lift_.sup_log(), -lift_.inf_log(), 1e-6});
  error_constant_ = k / (lift_.degree() - 1);
}

GreenValue GreenEvaluator::value_at(std::complex<double> coord, bool inf_chart) const {
  double bound = error_constant_ * std::pow(static_cast<double>(lift_.degree()), -depth_);
  if (inf_chart && coord == std::complex<double>(0, 0)) {
    if (log_plus_) return {std::numeric_limits<double>::infinity(), 0.0};
    // fall through: (1, 0) is a regular lift point for non-polynomial maps
  }
  std::complex<double> a = inf_chart ? std::complex<double>(1, 0) : coord;
  std::complex<double> b = inf_chart ? coord : std::complex<double>(1, 0);
  double m0 = std::max(std::abs(a), std::abs(b));
  a /= m0;
  b /= m0;
  // log+ form keeps the seed term of the (z, 1) lift; the potential form
  // evaluates on the normalized representative instead
  double g = log_plus_ ? std::log(m0) : 0.0;
  double scale = 1.0;
  for (int j = 1; j <= depth_; ++j) {
    DoubleLift::Step s = lift_.step(a, b);
    a = s.a;
    b = s.b;
    scale /= lift_.degree();
    g += scale * s.log_m;
  }
  if (log_plus_ && inf_chart) g -= std::log(std::abs(coord));
  return {g, bound};
}

GreenValue GreenEvaluator::value(const ProjPoint& x) const {
  return value_at(x.coord().to_complex(), x.chart() == dyn::Chart::infinity);
}

GreenValue green_value(const RationalMap& map, const ProjPoint& x, int depth) {
  return GreenEvaluator(map, depth).value(x);
}

JuliaClassifier::JuliaClassifier(const RationalMap& map, double tolerance)
    : tol_(tolerance), star_radius_(std::cbrt(tolerance)), escape_mode_(map.is_polynomial()) {
  if (!(tolerance > 0)) throw ValidationError("julia tolerance must be positive");
  if (!map.is_dynamical()) throw ValidationError("julia membership needs degree at least 2");
  if (escape_mode_) {
    GreenEvaluator probe(map, 10);
    double c = probe.error_constant();
    int depth = static_cast<int>(
        std::ceil(std::log(std::max(c * 1000.0 / tol_, 2.0)) / std::log(map.degree())));
    eval_.emplace(map, std::clamp(depth, 10, 400));
  } else {
    // proximity to a sampled preimage tree of the support
    int m = 1;
    long long atoms = map.degree();
    while (atoms * map.degree() <= 8192) {
      atoms *= map.degree();
      ++m;
    }
    MeasureSample tree =
        preimage_tree(map, ProjPoint::from_double({10.0, 0.0}, map.prec()), m, 8192);
    support_.reserve(tree.atoms.size());
    for (const Atom& at : tree.atoms) support_.emplace_back(at.coord, at.inf_chart);
  }
}

Membership JuliaClassifier::classify_chart(std::complex<double> coord, bool inf_chart) const {
  if (escape_mode_) {
    GreenValue g = eval_->value_at(coord, inf_chart);
    if (!std::isfinite(g.value) || g.value > tol_) return Membership::outside;
    for (int k = 0; k < 8; ++k) {
      std::complex<double> off = std::polar(star_radius_, std::numbers::pi * k / 4);
      GreenValue s = eval_->value_at(coord + off, inf_chart);
      if (!std::isfinite(s.value) || s.value > tol_) return Membership::boundary_band;
    }
    return Membership::inside;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [sc, sinf] : support_)
    best = std::min(best, dyn::sph_dist_d(coord, inf_chart, sc, sinf));
  return best <= star_radius_ ? Membership::boundary_band : Membership::outside;
}

Membership JuliaClassifier::classify(const ProjPoint& x) const {
  return classify_chart(x.coord().to_complex(), x.chart() == dyn::Chart::infinity);
}

Membership julia_membership(const RationalMap& map, const ProjPoint& x, double tolerance) {
  return JuliaClassifier(map, tolerance).classify(x);
}

}  // namespace eqlab::meas
