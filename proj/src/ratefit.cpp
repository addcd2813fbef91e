#include "eqlab/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "eqlab/errors.hpp"
#include "eqlab/rng.hpp"

namespace eqlab::eq {

namespace {

bool monte_carlo(const MeasureSample& s) {
  return s.provenance == meas::Provenance::backward_orbit ||
         s.provenance == meas::Provenance::product;
}

struct LogLine {
  double intercept = 0, slope = 0, r2 = 0;
};

// weighted least squares of log(pairing) against n over the used entries
LogLine loglinear(const std::vector<RatePoint>& series) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const RatePoint& p : series) {
    if (!p.used) continue;
    double sigma = p.pairing > 0 ? std::max(p.ci / p.pairing, 1e-12) : 1e-12;
    double w = 1.0 / (sigma * sigma);
    double x = p.n, y = std::log(p.pairing);
    sw += w; sx += w * x; sy += w * y; sxx += w * x * x; sxy += w * x * y;
  }
  double det = sw * sxx - sx * sx;
  LogLine out;
  out.slope = (sw * sxy - sx * sy) / det;
  out.intercept = (sy - out.slope * sx) / sw;
  double ssr = 0, sst = 0, mean = sy / sw;
  for (const RatePoint& p : series) {
    if (!p.used) continue;
    double sigma = p.pairing > 0 ? std::max(p.ci / p.pairing, 1e-12) : 1e-12;
    double w = 1.0 / (sigma * sigma);
    double y = std::log(p.pairing);
    double fit = out.intercept + out.slope * p.n;
    ssr += w * (y - fit) * (y - fit);
    sst += w * (y - mean) * (y - mean);
  }
  out.r2 = sst > 0 ? 1.0 - ssr / sst : 1.0;
  return out;
}

int usable(const std::vector<RatePoint>& series) {
  int k = 0;
  for (const RatePoint& p : series)
    if (p.used) ++k;
  return k;
}

void mark_used(std::vector<RatePoint>& series) {
  for (RatePoint& p : series) p.used = p.pairing > 0 && p.pairing > 3.0 * p.ci;
}

// percentile bootstrap of the fitted base: resample the reference atoms,
// shift every pairing by the resampled reference mean, refit on the same
// used mask.  phi_w and phi_v are weight and phi value per reference atom.
void bootstrap_base(RateFit& fit, const std::vector<double>& sums,
                    const std::vector<double>& phi_w, const std::vector<double>& phi_v,
                    double ref_total_mass, std::uint64_t seed) {
  constexpr int kReps = 200;
  size_t n_atoms = phi_w.size();
  Rng rng(seed);
  std::vector<double> bases;
  bases.reserve(kReps);
  for (int rep = 0; rep < kReps; ++rep) {
    double acc_w = 0, acc_wv = 0;
    for (size_t i = 0; i < n_atoms; ++i) {
      size_t j = rng.index(n_atoms);
      acc_w += phi_w[j];
      acc_wv += phi_w[j] * phi_v[j];
    }
    if (acc_w <= 0) continue;
    double mu_phi = acc_wv / acc_w * ref_total_mass;
    std::vector<RatePoint> rs = fit.series;
    for (size_t i = 0; i < rs.size(); ++i) {
      rs[i].pairing = std::abs(sums[i] - mu_phi);
      if (rs[i].pairing <= 0) rs[i].used = false;
    }
    if (usable(rs) < 2) continue;
    bases.push_back(std::exp(loglinear(rs).slope));
  }
  if (bases.size() < 10) return;  // keep the degenerate CI
  std::sort(bases.begin(), bases.end());
  fit.base_lo = bases[static_cast<size_t>(0.025 * (bases.size() - 1))];
  fit.base_hi = bases[static_cast<size_t>(std::ceil(0.975 * (bases.size() - 1)))];
  fit.base_lo = std::min(fit.base_lo, fit.base);
  fit.base_hi = std::max(fit.base_hi, fit.base);
}

bool is_conjugate_of(const RationalMap& map, double c0_re) {
  // z^2 + c with real c: p = (c, 0, s), q = (s) for a common scale s
  if (!map.is_polynomial() || map.degree() != 2) return false;
  const mp::Poly& p = map.p();
  const mp::BigComplex& s = map.q().coeff(0);
  if (!(p.coeff(1).is_zero())) return false;
  if (!((p.coeff(2) - s).is_zero())) return false;
  mp::BigComplex want = s * mp::BigComplex(c0_re, 0.0, map.prec());
  return (p.coeff(0) - want).is_zero();
}

}  // namespace

double pair_measures(const MeasureSample& a, const MeasureSample& b, const TestFunction& phi) {
  auto eval = [&phi](const meas::Atom& at) { return phi(at); };
  return a.mean(eval) * a.total_mass - b.mean(eval) * b.total_mass;
}

double pairing_ci(const MeasureSample& sample, const TestFunction& phi) {
  if (!monte_carlo(sample) || sample.atoms.empty()) return 0.0;
  double sw = 0, sww = 0;
  for (const meas::Atom& a : sample.atoms) {
    sw += a.weight;
    sww += a.weight * a.weight;
  }
  if (sw <= 0) return 0.0;
  double mean = 0;
  for (const meas::Atom& a : sample.atoms) mean += a.weight * phi(a);
  mean /= sw;
  double var = 0;
  for (const meas::Atom& a : sample.atoms) {
    double d = phi(a) - mean;
    var += a.weight * d * d;
  }
  var /= sw;
  double n_eff = sw * sw / sww;
  return 1.96 * std::sqrt(var / n_eff);
}

RateFit fit_rate(std::vector<RatePoint> series) {
  mark_used(series);
  if (usable(series) < 4)
    throw ValidationError("rate fit needs at least 4 usable points, got " +
                          std::to_string(usable(series)));
  LogLine line = loglinear(series);
  RateFit fit;
  fit.series = std::move(series);
  fit.prefactor = std::exp(line.intercept);
  fit.base = std::exp(line.slope);
  fit.base_lo = fit.base;
  fit.base_hi = fit.base;
  fit.r2 = line.r2;
  return fit;
}

MeasureSample periodic_sample(const per::CycleSet& cs) {
  MeasureSample out;
  out.provenance = meas::Provenance::periodic_points;
  out.rng_seed = 0;
  double w = std::pow(static_cast<double>(cs.degree), -cs.n);
  for (const per::PeriodicPoint& p : cs.points) {
    out.atoms.push_back(meas::Atom::from_point(p.location, w * p.multiplicity));
    out.total_mass += w * p.multiplicity;
  }
  return out;
}

MeasureSample reference_measure(const RationalMap& map, int atoms, std::uint64_t rng_seed) {
  if (atoms < 1) throw ValidationError("reference measure needs a positive atom budget");
  if (is_conjugate_of(map, 0.0))  // squaring map: the unit circle
    return meas::reference_nodes(meas::ExactKind::circle, 4096);
  if (is_conjugate_of(map, -2.0))  // Chebyshev: arcsine on [-2, 2]
    return meas::reference_nodes(meas::ExactKind::arcsine, 4096);
  return meas::sample_backward(map, dyn::ProjPoint::from_double({10.0, 0.0}, map.prec()), 50,
                               atoms, rng_seed);
}

RateFit periodic_discrepancy(const RationalMap& map, int n_lo, int n_hi, const TestFunction& phi,
                             QChoice choice, double gamma, std::uint64_t rng_seed, int ref_atoms,
                             const MeasureSample* mu_ref) {
  if (n_lo < 1 || n_hi < n_lo) throw ValidationError("periodic discrepancy needs 1 <= n_lo <= n_hi");
  MeasureSample ref_local;
  if (!mu_ref) {
    ref_local = reference_measure(map, ref_atoms, derive_seed(rng_seed, "mu-ref"));
    mu_ref = &ref_local;
  }
  auto eval = [&phi](const meas::Atom& a) { return phi(a); };
  double mu_phi = mu_ref->mean(eval) * mu_ref->total_mass;
  double ref_ci = pairing_ci(*mu_ref, phi);

  std::vector<RatePoint> series;
  std::vector<double> sums;
  for (int n = n_lo; n <= n_hi; ++n) {
    per::CycleSet cs = per::find_periodic(map, n);
    MeasureSample emp;
    switch (choice) {
      case QChoice::all:
        emp = periodic_sample(cs);
        break;
      case QChoice::repelling: {
        per::CycleSet sub = cs;
        sub.points.clear();
        for (const per::PeriodicPoint& p : cs.points)
          if (p.classification == per::Classification::repelling) sub.points.push_back(p);
        emp = periodic_sample(sub);
        break;
      }
      case QChoice::repelling_gamma:
        emp = periodic_sample(per::filter_repelling_gamma(cs, gamma));
        break;
    }
    double s = emp.mean(eval) * emp.total_mass;
    sums.push_back(s);
    series.push_back({n, std::abs(s - mu_phi), ref_ci, true});
  }

  RateFit fit = fit_rate(std::move(series));
  if (monte_carlo(*mu_ref)) {
    std::vector<double> phi_w, phi_v;
    phi_w.reserve(mu_ref->atoms.size());
    phi_v.reserve(mu_ref->atoms.size());
    for (const meas::Atom& a : mu_ref->atoms) {
      phi_w.push_back(a.weight);
      phi_v.push_back(phi(a));
    }
    bootstrap_base(fit, sums, phi_w, phi_v, mu_ref->total_mass,
                   derive_seed(rng_seed, "bootstrap"));
  }
  fit.envelope_check = fit.base_hi < 1.0;
  return fit;
}

RateFit preimage_discrepancy(const RationalMap& map, const dyn::ProjPoint& a, int m_lo, int m_hi,
                             const TestFunction& phi, std::uint64_t rng_seed, int ref_atoms,
                             long long atom_cap, int n0, const MeasureSample* mu_ref) {
  if (m_lo < 1 || m_hi < m_lo) throw ValidationError("preimage discrepancy needs 1 <= m_lo <= m_hi");
  dyn::PostcriticalSet pc = map.postcritical(n0);
  for (const dyn::ProjPoint& p : pc.points)
    if (dyn::sph_dist_d(a, p) <= 1e-9)
      throw ValidationError("base point sits on the order-" + std::to_string(n0) +
                            " postcritical proxy");

  MeasureSample ref_local;
  if (!mu_ref) {
    ref_local = reference_measure(map, ref_atoms, derive_seed(rng_seed, "mu-ref"));
    mu_ref = &ref_local;
  }
  auto eval = [&phi](const meas::Atom& at) { return phi(at); };
  double mu_phi = mu_ref->mean(eval) * mu_ref->total_mass;
  double ref_ci = pairing_ci(*mu_ref, phi);

  std::string note;
  std::vector<RatePoint> series;
  std::vector<double> sums;
  for (int m = m_lo; m <= m_hi; ++m) {
    long long leaves = 1;
    bool over = false;
    for (int i = 0; i < m; ++i) {
      leaves *= map.degree();
      if (leaves > atom_cap) { over = true; break; }
    }
    if (over) {
      note = "m range truncated at " + std::to_string(m - 1) + " by the atom cap";
      break;
    }
    MeasureSample tree = meas::preimage_tree(map, a, m, atom_cap);
    double s = tree.mean(eval) * tree.total_mass;
    sums.push_back(s);
    series.push_back({m, std::abs(s - mu_phi), ref_ci, true});
  }

  RateFit fit = fit_rate(std::move(series));
  fit.note = note;
  if (monte_carlo(*mu_ref)) {
    std::vector<double> phi_w, phi_v;
    phi_w.reserve(mu_ref->atoms.size());
    phi_v.reserve(mu_ref->atoms.size());
    for (const meas::Atom& at : mu_ref->atoms) {
      phi_w.push_back(at.weight);
      phi_v.push_back(phi(at));
    }
    bootstrap_base(fit, sums, phi_w, phi_v, mu_ref->total_mass,
                   derive_seed(rng_seed, "bootstrap"));
  }

  double envelope_rate = std::pow(static_cast<double>(map.degree()), -1.0 / 3.0);
  fit.envelope_c = 0;
  for (const RatePoint& p : fit.series)
    if (p.pairing > 0)
      fit.envelope_c = std::max(fit.envelope_c, p.pairing * std::pow(envelope_rate, -p.n));
  fit.envelope_check = fit.base <= envelope_rate + 0.05;
  return fit;
}

std::string rate_csv(const RationalMap& map, const std::string& phi_id, const std::string& choice,
                     const RateFit& fit) {
  char line[256];
  std::string out = "map_hash,phi_id,choice,n,pairing,ci\n";
  for (const RatePoint& p : fit.series) {
    std::snprintf(line, sizeof line, "%016llx,%s,%s,%d,%.17g,%.17g\n",
                  static_cast<unsigned long long>(map.canonical_hash()), phi_id.c_str(),
                  choice.c_str(), p.n, p.pairing, p.ci);
    out += line;
  }
  return out;
}

std::string fit_json(const RateFit& fit) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\"prefactor\": %.17g, \"base\": %.17g, \"base_lo\": %.17g, \"base_hi\": %.17g, "
                "\"r2\": %.17g, \"envelope_c\": %.17g, \"envelope_check\": %s, \"note\": \"%s\"}",
                fit.prefactor, fit.base, fit.base_lo, fit.base_hi, fit.r2, fit.envelope_c,
                fit.envelope_check ? "true" : "false", fit.note.c_str());
  return buf;
}

}  // namespace eqlab::eq
