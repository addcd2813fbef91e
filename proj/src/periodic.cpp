#include "eqlab/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "eqlab/errors.hpp"
#include "eqlab/roots.hpp"
#include "eqlab/sampling.hpp"

namespace eqlab::per {

namespace {

long long checked_pow(int d, int n) {
  long long v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > (1LL << 40)) throw ValidationError("periodic-point count overflows the solver");
    v *= d;
  }
  return v;
}

CycleCounts tally(const std::vector<PeriodicPoint>& pts) {
  CycleCounts c;
  c.distinct = static_cast<long long>(pts.size());
  for (const PeriodicPoint& p : pts) {
    c.with_multiplicity += p.multiplicity;
    switch (p.classification) {
      case Classification::repelling: c.repelling += p.multiplicity; break;
      case Classification::attracting: c.attracting += p.multiplicity; break;
      case Classification::indifferent: c.indifferent += p.multiplicity; break;
    }
  }
  return c;
}

PeriodicPoint annotate(const RationalMap& map, int n, const ProjPoint& x, int multiplicity,
                       const meas::JuliaClassifier& julia) {
  std::vector<ProjPoint> orbit;
  orbit.reserve(static_cast<size_t>(n));
  orbit.push_back(x);
  for (int i = 1; i < n; ++i) orbit.push_back(map.apply(orbit.back()));
  ProjPoint wrap = map.apply(orbit.back());
  double residual = dyn::sph_dist(wrap, x).to_double();
  auto m = map.cycle_multiplier(orbit, 1e-10);

  PeriodicPoint pp;
  pp.location = x;
  pp.period = n;
  pp.minimal_period = n;
  pp.multiplier = m.value.to_complex();
  pp.multiplier_modulus = m.modulus;
  if (m.modulus > 1 + kIndifferenceBand)
    pp.classification = Classification::repelling;
  else if (m.modulus < 1 - kIndifferenceBand)
    pp.classification = Classification::attracting;
  else
    pp.classification = Classification::indifferent;
  pp.in_small_julia = julia.classify(x);
  pp.residual = residual;
  pp.multiplicity = multiplicity;
  return pp;
}

CycleSet expand_backend(const RationalMap& map, int n, double julia_tol) {
  long long finite_count = checked_pow(map.degree(), n);
  if (finite_count > mp::kComposeCap)
    throw ValidationError("expand backend capacity exceeded: degree " +
                          std::to_string(finite_count) + " > " +
                          std::to_string(mp::kComposeCap));

  RationalMap fn = map.iterate_map(n);
  mp::Poly phi = mp::Poly::fixed_point_poly(fn.p(), fn.q());
  if (phi.is_zero()) throw NumericalError("fixed-point polynomial vanished");

  // coefficient mass decides the working precision: roots are only as good
  // as the evaluation noise 2^(-prec) * sum |c_j| |z|^j lets them be
  double mass = phi.magnitude_at(mp::BigFloat(2.0, 64)).to_double();
  unsigned want = 256;
  if (std::isfinite(mass) && mass > 1)
    want += static_cast<unsigned>(std::ceil(std::log2(mass)));
  if (want > map.prec()) {
    fn = map.with_prec(want).iterate_map(n);
    phi = mp::Poly::fixed_point_poly(fn.p(), fn.q());
  }

  mp::RootOptions opts;
  opts.precision = std::max(want, map.prec());
  mp::RootSet rs = mp::poly_roots(phi, opts);

  // the d^n + 1 fixed points of f^n split between the deg(phi) finite roots
  // and the point at infinity; a degree drop in phi is exactly the infinity
  // multiplicity
  long long total = finite_count + 1;
  int inf_mult = static_cast<int>(total - phi.degree());
  if (inf_mult < 0) throw NumericalError("fixed-point polynomial degree exceeds d^n + 1");

  meas::JuliaClassifier julia(map, julia_tol);
  CycleSet cs;
  cs.n = n;
  cs.degree = map.degree();
  // cluster members of a multiple root straddle it symmetrically, so the
  // cluster mean is a sharper representative than any single member
  int nclusters = rs.cluster_count();
  std::vector<mp::BigComplex> sum(static_cast<size_t>(nclusters),
                                  mp::BigComplex::zero(opts.precision));
  std::vector<int> size(static_cast<size_t>(nclusters), 0);
  for (size_t i = 0; i < rs.roots.size(); ++i) {
    sum[static_cast<size_t>(rs.cluster_id[i])] += rs.roots[i];
    ++size[static_cast<size_t>(rs.cluster_id[i])];
  }
  for (int cid = 0; cid < nclusters; ++cid) {
    mp::BigComplex rep =
        sum[static_cast<size_t>(cid)] /
        mp::BigComplex(static_cast<double>(size[static_cast<size_t>(cid)]), 0.0, opts.precision);
    cs.points.push_back(
        annotate(map, n, ProjPoint::from_affine(rep), size[static_cast<size_t>(cid)], julia));
  }
  if (inf_mult > 0) {
    ProjPoint inf = ProjPoint::infinity(opts.precision);
    if (dyn::sph_dist(map.iterate(inf, n), inf).to_double() > 1e-20)
      throw NumericalError("infinity bookkeeping disagrees with the iterate");
    cs.points.push_back(annotate(map, n, inf, inf_mult, julia));
  }
  cs.counts = tally(cs.points);
  if (cs.counts.with_multiplicity != total)
    throw NumericalError("expand backend found " + std::to_string(cs.counts.with_multiplicity) +
                         " of " + std::to_string(total) + " periodic points");
  return cs;
}

CycleSet newton_backend(const RationalMap& map, int n, double julia_tol) {
  if (!map.is_polynomial())
    throw ValidationError("newton-seeded backend supports polynomial maps only");
  long long finite_target = checked_pow(map.degree(), n);
  if (finite_target > (1 << 20))
    throw ValidationError("newton-seeded backend capacity exceeded");

  unsigned wp = std::max(map.prec(), 256u);
  RationalMap m = map.with_prec(wp);
  mp::Poly dp = m.p().derivative();
  mp::BigFloat conv_eps = mp::BigFloat::pow2(-static_cast<long>(wp / 2), wp);

  // seed schedule: a preimage tree hugs the Julia set where most periodic
  // points live and rings catch interior attractors; later batches refill
  // with denser trees and a second base point, built only if the first
  // pass leaves roots missing
  auto tree_seeds = [&](std::complex<double> base, int depth,
                        std::vector<std::complex<double>>& out) {
    if (checked_pow(map.degree(), depth) > (1 << 21)) return;
    meas::MeasureSample tree =
        meas::preimage_tree(map, ProjPoint::from_double(base, map.prec()), depth, 1 << 21);
    for (const meas::Atom& a : tree.atoms)
      if (!a.inf_chart || a.coord != std::complex<double>(0, 0)) out.push_back(a.affine());
  };
  auto seed_batch = [&](int which) {
    std::vector<std::complex<double>> out;
    switch (which) {
      case 0:
        tree_seeds({10.0, 0.0}, n, out);
        for (double r : {0.55, 1.0, 1.6}) {
          long long ring = finite_target + 1;
          for (long long j = 0; j < ring; ++j)
            out.push_back(std::polar(r, 2 * std::numbers::pi * (j + 0.37 * r) / ring));
        }
        break;
      case 1: tree_seeds({10.0, 0.0}, n + 1, out); break;
      case 2: tree_seeds({10.0, 0.0}, n + 2, out); break;
      case 3: tree_seeds({2.0, 5.0}, n, out); break;
    }
    return out;
  };

  std::vector<ProjPoint> roots;
  std::vector<std::complex<double>> approx;
  auto try_seed = [&](const std::complex<double>& s) {
    mp::BigComplex z(s, wp);
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      mp::BigComplex u = z;
      mp::BigComplex deriv = mp::BigComplex::one(wp);
      bool escaped = false;
      for (int k = 0; k < n; ++k) {
        deriv *= dp.eval(u);
        u = m.p().eval(u);
        if (u.abs().to_double() > 1e8) {
          escaped = true;
          break;
        }
      }
      if (escaped) break;
      mp::BigComplex fval = u - z;
      mp::BigComplex fprime = deriv - mp::BigComplex::one(wp);
      if (fprime.abs() < conv_eps) break;  // parabolic-degenerate direction
      mp::BigComplex step = fval / fprime;
      z -= step;
      if (z.abs().to_double() > 100) break;
      mp::BigFloat scale = max(mp::BigFloat(1.0, wp), z.abs());
      if (step.abs() < conv_eps * scale) {
        ok = true;
        break;
      }
    }
    if (!ok) return;
    std::complex<double> zd = z.to_complex();
    for (const std::complex<double>& r : approx)
      if (std::abs(zd - r) < 1e-10) return;
    approx.push_back(zd);
    roots.push_back(ProjPoint::from_affine(z));
  };
  for (int which = 0; which < 4; ++which) {
    if (static_cast<long long>(roots.size()) == finite_target) break;
    for (const std::complex<double>& s : seed_batch(which)) {
      if (static_cast<long long>(roots.size()) == finite_target) break;
      try_seed(s);
    }
  }

  if (static_cast<long long>(roots.size()) != finite_target)
    throw NumericalError("newton backend found " + std::to_string(roots.size()) + " of " +
                         std::to_string(finite_target) + " finite periodic points");

  meas::JuliaClassifier julia(map, julia_tol);
  CycleSet cs;
  cs.n = n;
  cs.degree = map.degree();
  cs.points.reserve(roots.size() + 1);
  for (const ProjPoint& x : roots) cs.points.push_back(annotate(map, n, x, 1, julia));
  cs.points.push_back(annotate(map, n, ProjPoint::infinity(wp), 1, julia));
  cs.counts = tally(cs.points);
  return cs;
}

}  // namespace

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::repelling: return "repelling";
    case Classification::attracting: return "attracting";
    case Classification::indifferent: return "indifferent";
  }
  return "?";
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::outside: return "outside";
    case Membership::boundary_band: return "boundary-band";
  }
  return "?";
}

CycleSet find_periodic(const RationalMap& map, int n, Backend backend, double julia_tol) {
  if (!map.is_dynamical()) throw ValidationError("periodic points need degree at least 2");
  if (n < 1) throw ValidationError("period must be at least 1");
  long long count = checked_pow(map.degree(), n) + 1;

  switch (backend) {
    case Backend::expand:
      return expand_backend(map, n, julia_tol);
    case Backend::newton_seeded:
      return newton_backend(map, n, julia_tol);
    case Backend::cross_check: {
      CycleSet a = expand_backend(map, n, julia_tol);
      CycleSet b = newton_backend(map, n, julia_tol);
      double dist = cycle_set_distance(a, b);
      if (!(dist <= 1e-15))
        throw NumericalError("periodic solver backends disagree by " + std::to_string(dist));
      return a;
    }
    case Backend::automatic:
      break;
  }
  // expansion is exact but explodes; prefer it while the solve stays small
  if (count <= 1030) return expand_backend(map, n, julia_tol);
  if (map.is_polynomial()) return newton_backend(map, n, julia_tol);
  return expand_backend(map, n, julia_tol);
}

double cycle_set_distance(const CycleSet& a, const CycleSet& b) {
  std::vector<const PeriodicPoint*> fa, fb;
  for (const PeriodicPoint& p : a.points)
    for (int i = 0; i < p.multiplicity; ++i) fa.push_back(&p);
  for (const PeriodicPoint& p : b.points)
    for (int i = 0; i < p.multiplicity; ++i) fb.push_back(&p);
  if (fa.size() != fb.size()) return std::numeric_limits<double>::infinity();
  std::vector<char> used(fb.size(), 0);
  double worst = 0;
  for (const PeriodicPoint* pa : fa) {
    double best = std::numeric_limits<double>::infinity();
    size_t arg = fb.size();
    for (size_t j = 0; j < fb.size(); ++j) {
      if (used[j]) continue;
      double d = dyn::sph_dist_d(pa->location, fb[j]->location);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    used[arg] = 1;
    worst = std::max(worst, best);
  }
  return worst;
}

CycleSet minimal_periods(const CycleSet& cs, const std::map<int, CycleSet>& lower) {
  std::vector<int> divisors;
  for (int p = 1; p < cs.n; ++p)
    if (cs.n % p == 0) {
      if (!lower.count(p))
        throw ValidationError("minimal_periods needs the CycleSet for divisor " +
                              std::to_string(p));
      divisors.push_back(p);
    }
  CycleSet out = cs;
  for (PeriodicPoint& pt : out.points) {
    pt.minimal_period = cs.n;
    for (int p : divisors) {
      bool hit = false;
      for (const PeriodicPoint& q : lower.at(p).points)
        if (dyn::sph_dist_d(pt.location, q.location) <= 1e-12) {
          hit = true;
          break;
        }
      if (hit) {
        pt.minimal_period = p;
        break;
      }
    }
  }
  return out;
}

CycleSet filter_repelling_gamma(const CycleSet& cs, double gamma) {
  if (!(gamma > 0 && gamma < 1)) throw ValidationError("gamma must lie in (0, 1)");
  double threshold = std::pow(cs.degree, (1 - gamma) * cs.n / 2.0);
  CycleSet out;
  out.n = cs.n;
  out.degree = cs.degree;
  for (const PeriodicPoint& p : cs.points)
    if (p.in_small_julia == Membership::boundary_band && p.multiplier_modulus >= threshold)
      out.points.push_back(p);
  out.counts = tally(out.points);
  return out;
}

ExceptionalCounts count_exceptional(const CycleSet& cs) {
  ExceptionalCounts c;
  for (const PeriodicPoint& p : cs.points) {
    if (p.classification != Classification::repelling) c.a_n += p.multiplicity;
    if (p.in_small_julia != Membership::boundary_band) c.b_n += p.multiplicity;
  }
  return c;
}

ProductCycleSet find_periodic_product(const dyn::ProductMap& map, int n, Backend backend,
                                      double julia_tol) {
  ProductCycleSet pcs;
  pcs.first = find_periodic(map.first(), n, backend, julia_tol);
  pcs.second = find_periodic(map.second(), n, backend, julia_tol);
  pcs.n = n;
  pcs.with_multiplicity = pcs.first.counts.with_multiplicity * pcs.second.counts.with_multiplicity;
  return pcs;
}

ExceptionalCounts count_exceptional_product(const ProductCycleSet& pcs) {
  ExceptionalCounts c;
  for (const PeriodicPoint& p : pcs.first.points)
    for (const PeriodicPoint& q : pcs.second.points) {
      long long mult = static_cast<long long>(p.multiplicity) * q.multiplicity;
      bool repelling = p.classification == Classification::repelling &&
                       q.classification == Classification::repelling;
      bool in_julia = p.in_small_julia == Membership::boundary_band &&
                      q.in_small_julia == Membership::boundary_band;
      if (!repelling) c.a_n += mult;
      if (!in_julia) c.b_n += mult;
    }
  return c;
}

long long nonrepelling_cycle_count(const RationalMap& map, int max_n, Backend backend) {
  std::map<int, CycleSet> sets;
  for (int n = 1; n <= max_n; ++n) sets.emplace(n, find_periodic(map, n, backend));
  long long cycles = 0;
  for (int n = 1; n <= max_n; ++n) {
    CycleSet sieved = minimal_periods(sets.at(n), sets);
    long long pts = 0;
    for (const PeriodicPoint& p : sieved.points)
      if (p.minimal_period == n && p.classification != Classification::repelling) ++pts;
    cycles += (pts + n - 1) / n;
  }
  return cycles;
}

std::string cycle_csv(const CycleSet& cs) {
  std::string out =
      "re,im,chart,period,minimal_period,multiplier_modulus,class,julia_flag,multiplicity,"
      "residual\n";
  char line[256];
  for (const PeriodicPoint& p : cs.points) {
    std::complex<double> c = p.location.coord().to_complex();
    std::snprintf(line, sizeof line, "%.17g,%.17g,%s,%d,%d,%.17g,%s,%s,%d,%.17g\n", c.real(),
                  c.imag(), p.location.chart() == dyn::Chart::infinity ? "i" : "f", p.period,
                  p.minimal_period, p.multiplier_modulus,
                  classification_name(p.classification), membership_name(p.in_small_julia),
                  p.multiplicity, p.residual);
    out += line;
  }
  return out;
}

}  // namespace eqlab::per
