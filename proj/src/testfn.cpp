#include "eqlab/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "eqlab/errors.hpp"
#include "eqlab/projective.hpp"
#include "eqlab/rng.hpp"

namespace eqlab::eq {

namespace {

// stereographic embedding, same orientation as ProjPoint::sphere3: the point
// at infinity is the north pole.  Valid for any coordinate modulus, not just
// the canonical |coord| <= 1 form.
void sph3(std::complex<double> coord, bool inf_chart, double out[3]) {
  double n2 = std::norm(coord);
  double denom = 1.0 + n2;
  double u1 = 2.0 * coord.real() / denom;
  double u2 = 2.0 * coord.imag() / denom;
  double u3 = (n2 - 1.0) / denom;
  if (!inf_chart) {
    out[0] = u1; out[1] = u2; out[2] = u3;
  } else {
    out[0] = u1; out[1] = -u2; out[2] = -u3;
  }
}

double chord2(std::complex<double> a, bool a_inf, std::complex<double> b, bool b_inf) {
  double u[3], v[3];
  sph3(a, a_inf, u);
  sph3(b, b_inf, v);
  double s = 0;
  for (int i = 0; i < 3; ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return s;
}

constexpr std::uint64_t kNormSeed = 0x9b1f3c5d7e90a2b4ULL;

// measured sup and difference-quotient bounds, inflated; close pairs probe
// the gradient scale that independent pairs miss
void measure_norms(TestFunction& fn) {
  Rng rng(derive_seed(kNormSeed, fn.id));
  double c0 = 0, lip = 0, hold = 0;
  for (int i = 0; i < 5000; ++i) {
    auto [xz, xinf] = random_chart_point(rng);
    auto [yz, yinf] = random_chart_point(rng);
    double fx = fn.eval_chart(xz, xinf);
    c0 = std::max(c0, std::abs(fx));
    double d = dyn::sph_dist_d(xz, xinf, yz, yinf);
    if (d > 1e-12) {
      double diff = std::abs(fx - fn.eval_chart(yz, yinf));
      lip = std::max(lip, diff / d);
      hold = std::max(hold, diff / std::pow(d, fn.alpha));
    }
    // short step inside the same chart
    double eps = std::pow(10.0, rng.uniform(-6.0, -2.0));
    std::complex<double> step = std::polar(eps, rng.uniform(0.0, 6.283185307179586));
    std::complex<double> yc = xz + step;
    double dc = dyn::sph_dist_d(xz, xinf, yc, xinf);
    if (dc > 1e-12) {
      double diff = std::abs(fx - fn.eval_chart(yc, xinf));
      lip = std::max(lip, diff / dc);
      hold = std::max(hold, diff / std::pow(dc, fn.alpha));
    }
  }
  fn.norm_c0 = 1.05 * c0 + 1e-12;
  fn.norm_c1 = fn.norm_c0 + 1.25 * lip;
  fn.norm_alpha = 1.25 * hold + 1e-12;
}

TestFunction with_norms(std::string id, Family family, double alpha,
                        std::function<double(std::complex<double>, bool)> eval) {
  TestFunction fn;
  fn.id = std::move(id);
  fn.family = family;
  fn.alpha = alpha;
  fn.eval_chart = std::move(eval);
  measure_norms(fn);
  return fn;
}

// the five base forms of the smooth chart family; rotation by phase lambda
// (an isometry) makes the family as long as requested
std::function<double(std::complex<double>, bool)> smooth_form(int k, std::complex<double> lambda) {
  switch (k) {
    case 0:  // |z|^2/(|z|^2+1), extends to 1 at infinity
      return [](std::complex<double> c, bool inf) {
        double n2 = std::norm(c);
        return inf ? 1.0 / (1.0 + n2) : n2 / (1.0 + n2);
      };
    // the rotation z -> lambda z reads as w -> conj(lambda) w in the
    // opposite chart; conjugating keeps the two chart formulas glued
    case 1:
      return [lambda](std::complex<double> c, bool inf) {
        c *= inf ? std::conj(lambda) : lambda;
        double n2 = std::norm(c);
        return 2.0 * c.real() / (1.0 + n2);
      };
    case 2:
      return [lambda](std::complex<double> c, bool inf) {
        c *= inf ? std::conj(lambda) : lambda;
        double n2 = std::norm(c);
        return (inf ? -2.0 : 2.0) * c.imag() / (1.0 + n2);
      };
    case 3:
      return [lambda](std::complex<double> c, bool inf) {
        c *= inf ? std::conj(lambda) : lambda;
        double n2 = std::norm(c);
        double d = (1.0 + n2) * (1.0 + n2);
        return (c * c).real() / d;
      };
    default:  // 1/(1+|z|^2), vanishing at infinity
      return [](std::complex<double> c, bool inf) {
        double n2 = std::norm(c);
        return inf ? n2 / (1.0 + n2) : 1.0 / (1.0 + n2);
      };
  }
}

double spherical_poly(int k, const double u[3]) {
  double x = u[0], y = u[1], z = u[2];
  switch (k % 10) {
    case 0: return z;
    case 1: return x;
    case 2: return y;
    case 3: return x * y;
    case 4: return 0.5 * (x * x - y * y);
    case 5: return x * z;
    case 6: return y * z;
    case 7: return 0.5 * (3.0 * z * z - 1.0);
    case 8: return x * y * z;
    default: return 0.5 * z * (x * x - y * y);
  }
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::smooth_chart: return "smooth-chart";
    case Family::trig: return "trig";
    case Family::bump: return "bump";
    case Family::holder: return "holder";
  }
  return "?";
}

double TestFunction::operator()(const ProjPoint& x) const {
  return eval_chart(x.coord().to_complex(), x.chart() == dyn::Chart::infinity);
}

TestFunction fubini_weight() {
  return with_norms("fubini-weight", Family::smooth_chart, 1.0, smooth_form(0, {1, 0}));
}

TestFunction constant_one() {
  TestFunction fn;
  fn.id = "one";
  fn.family = Family::smooth_chart;
  fn.alpha = 1.0;
  fn.eval_chart = [](std::complex<double>, bool) { return 1.0; };
  fn.norm_c0 = 1.0;
  fn.norm_c1 = 1.0;  // zero gradient part
  fn.norm_alpha = 1.0;
  return fn;
}

std::vector<TestFunction> make_test_family(Family kind, int count, std::uint64_t rng_seed,
                                           double alpha) {
  if (count < 1) throw ValidationError("test family needs a positive count");
  if (kind == Family::holder && !(alpha > 0 && alpha <= 1))
    throw ValidationError("Hölder exponent must lie in (0, 1]");
  Rng rng(derive_seed(rng_seed, std::string("family-") + family_name(kind)));
  std::vector<TestFunction> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::string id = std::string(family_name(kind)) + "-" + std::to_string(i);
    switch (kind) {
      case Family::smooth_chart: {
        std::complex<double> lambda =
            i < 5 ? std::complex<double>(1, 0)
                  : std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
        out.push_back(with_norms(id, kind, 1.0, smooth_form(i % 5, lambda)));
        break;
      }
      case Family::trig: {
        int k = i;
        out.push_back(with_norms(id, kind, 1.0, [k](std::complex<double> c, bool inf) {
          double u[3];
          sph3(c, inf, u);
          return spherical_poly(k, u);
        }));
        break;
      }
      case Family::bump: {
        auto [cz, cinf] = random_chart_point(rng);
        double rho = rng.uniform(0.35, 0.65);  // chordal radius
        double rho2 = rho * rho;
        out.push_back(
            with_norms(id, kind, 1.0, [cz, cinf, rho2](std::complex<double> c, bool inf) {
              double s = chord2(c, inf, cz, cinf) / rho2;
              return s < 1.0 ? std::exp(-s / (1.0 - s)) : 0.0;
            }));
        break;
      }
      case Family::holder: {
        auto [cz, cinf] = random_chart_point(rng);
        out.push_back(
            with_norms(id, kind, alpha, [cz, cinf, alpha](std::complex<double> c, bool inf) {
              return std::pow(dyn::sph_dist_d(c, inf, cz, cinf), alpha);
            }));
        break;
      }
    }
  }
  return out;
}

double holder_ratio(const TestFunction& fn, double alpha, int pairs, std::uint64_t rng_seed) {
  if (pairs < 1) throw ValidationError("Hölder check needs a positive pair count");
  Rng rng(rng_seed);
  double worst = 0;
  for (int i = 0; i < pairs; ++i) {
    auto [xz, xinf] = random_chart_point(rng);
    auto [yz, yinf] = random_chart_point(rng);
    double d = dyn::sph_dist_d(xz, xinf, yz, yinf);
    if (d <= 1e-12) continue;
    double diff = std::abs(fn.eval_chart(xz, xinf) - fn.eval_chart(yz, yinf));
    worst = std::max(worst, diff / std::pow(d, alpha));
  }
  return worst;
}

std::pair<std::complex<double>, bool> random_chart_point(Rng& rng) {
  double x, y, z, n;
  do {
    x = rng.normal();
    y = rng.normal();
    z = rng.normal();
    n = std::sqrt(x * x + y * y + z * z);
  } while (n < 1e-6);
  x /= n; y /= n; z /= n;
  if (z <= 0) return {std::complex<double>(x, y) / (1.0 - z), false};
  return {std::complex<double>(x, -y) / (1.0 + z), true};
}

}  // namespace eqlab::eq
