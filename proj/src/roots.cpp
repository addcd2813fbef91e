#include "eqlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "eqlab/errors.hpp"
#include "eqlab/rng.hpp"

namespace eqlab::mp {

namespace {

// Sparse term list (descending exponents) with a per-point binary power
// cache.  Dense polynomials degrade to plain Horner cost; iterated maps like
// z^1024 - z evaluate in O(log deg) multiplies instead of O(deg).
struct TermList {
  std::vector<int> exp;
  std::vector<BigComplex> coeff;
  std::vector<BigFloat> coeff_abs;
  int degree = -1;

  static TermList build(const std::vector<BigComplex>& c) {
    TermList t;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      if (c[static_cast<size_t>(i)].is_zero()) continue;
      t.exp.push_back(i);
      t.coeff.push_back(c[static_cast<size_t>(i)]);
      t.coeff_abs.push_back(c[static_cast<size_t>(i)].abs());
    }
    t.degree = t.exp.empty() ? -1 : t.exp.front();
    return t;
  }

  TermList derivative() const {
    TermList d;
    for (size_t k = 0; k < exp.size(); ++k) {
      if (exp[k] == 0) continue;
      d.exp.push_back(exp[k] - 1);
      BigComplex c = coeff[k] * BigFloat(static_cast<long>(exp[k]), coeff[k].prec());
      d.coeff_abs.push_back(c.abs());
      d.coeff.push_back(std::move(c));
    }
    d.degree = d.exp.empty() ? -1 : d.exp.front();
    return d;
  }
};

struct PowerCache {
  std::vector<BigComplex> sq;  // z^(2^k)
  void reset(const BigComplex& z, int max_exp) {
    sq.clear();
    sq.push_back(z);
    while ((1 << sq.size()) <= max_exp) sq.push_back(sq.back() * sq.back());
  }
  void apply(BigComplex& acc, int e) const {  // acc *= z^e
    for (size_t k = 0; e != 0; ++k, e >>= 1)
      if (e & 1) acc *= sq[k];
  }
};

BigComplex eval_terms(const TermList& t, const PowerCache& pc, unsigned prec) {
  if (t.exp.empty()) return BigComplex::zero(prec);
  BigComplex acc = t.coeff[0];
  int cur = t.exp[0];
  for (size_t k = 1; k < t.exp.size(); ++k) {
    pc.apply(acc, cur - t.exp[k]);
    acc += t.coeff[k];
    cur = t.exp[k];
  }
  if (cur > 0) pc.apply(acc, cur);
  return acc;
}

// sum_k |c_k| |z|^k, the residual scale
BigFloat eval_scale(const TermList& t, const BigFloat& az) {
  unsigned prec = az.prec();
  if (t.exp.empty()) return BigFloat(0.0, prec);
  std::vector<BigFloat> sq{az};
  while ((1 << sq.size()) <= t.degree) sq.push_back(sq.back() * sq.back());
  auto mul_pow = [&](BigFloat& acc, int e) {
    for (size_t k = 0; e != 0; ++k, e >>= 1)
      if (e & 1) acc *= sq[k];
  };
  BigFloat acc = t.coeff_abs[0];
  int cur = t.exp[0];
  for (size_t k = 1; k < t.exp.size(); ++k) {
    mul_pow(acc, cur - t.exp[k]);
    acc += t.coeff_abs[k];
    cur = t.exp[k];
  }
  if (cur > 0) mul_pow(acc, cur);
  return acc;
}

double initial_radius(const std::vector<BigComplex>& c) {
  long e0 = 0, en = 0;
  double m0 = mpfr_get_d_2exp(&e0, c.front().abs().raw(), MPFR_RNDN);
  double mn = mpfr_get_d_2exp(&en, c.back().abs().raw(), MPFR_RNDN);
  int n = static_cast<int>(c.size()) - 1;
  double lg = (std::log(m0) + e0 * 0.6931471805599453) -
              (std::log(mn) + en * 0.6931471805599453);
  double r = std::exp(lg / n);
  if (!std::isfinite(r)) return 1.0;
  return std::min(1e6, std::max(1e-6, r));
}

struct Solved {
  std::vector<BigComplex> roots;
  std::vector<double> residuals;
  int sweeps = 0;
};

Solved aberth_at(const std::vector<BigComplex>& c, unsigned prec, int max_sweeps) {
  const int n = static_cast<int>(c.size()) - 1;
  TermList tp = TermList::build(c);
  TermList td = tp.derivative();
  const BigFloat rel_tol = BigFloat::pow2(-static_cast<long>(prec / 2), prec);

  std::vector<BigComplex> z;
  z.reserve(static_cast<size_t>(n));
  const double r0 = initial_radius(c);
  for (int j = 0; j < n; ++j) {
    double jitter = 1.0 + 0.05 * (static_cast<double>(splitmix64(j) >> 11) * 0x1.0p-53);
    double th = 6.283185307179586477 * (j + 0.37) / n;
    z.emplace_back(r0 * jitter * std::cos(th), r0 * jitter * std::sin(th), prec);
  }

  std::vector<bool> done(static_cast<size_t>(n), false);
  PowerCache pc;

  // raw scratch for the O(n^2) repulsion sum
  mpfr_t dx, dy, d2, t1, sre, sim;
  mpfr_inits2(prec, dx, dy, d2, t1, sre, sim, static_cast<mpfr_ptr>(nullptr));

  int sweep = 0;
  bool all_done = false;
  for (; sweep < max_sweeps && !all_done; ++sweep) {
    all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<size_t>(i)]) continue;
      pc.reset(z[static_cast<size_t>(i)], tp.degree);
      BigComplex e = eval_terms(tp, pc, prec);
      BigFloat scale = eval_scale(tp, z[static_cast<size_t>(i)].abs());
      if (e.abs() <= rel_tol * scale) {
        done[static_cast<size_t>(i)] = true;
        continue;
      }
      all_done = false;
      BigComplex pe = eval_terms(td, pc, prec);
      if (pe.is_zero()) {
        // sitting on a critical point: nudge off and retry next sweep
        z[static_cast<size_t>(i)] += BigComplex(1e-3 * r0, 2e-3 * r0, prec);
        continue;
      }
      BigComplex N = e / pe;

      mpfr_set_zero(sre, 1);
      mpfr_set_zero(sim, 1);
      mpfr_srcptr xi = z[static_cast<size_t>(i)].re.raw();
      mpfr_srcptr yi = z[static_cast<size_t>(i)].im.raw();
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        mpfr_sub(dx, xi, z[static_cast<size_t>(j)].re.raw(), MPFR_RNDN);
        mpfr_sub(dy, yi, z[static_cast<size_t>(j)].im.raw(), MPFR_RNDN);
        mpfr_sqr(d2, dx, MPFR_RNDN);
        mpfr_sqr(t1, dy, MPFR_RNDN);
        mpfr_add(d2, d2, t1, MPFR_RNDN);
        if (mpfr_zero_p(d2)) continue;  // exact collision, let the jitter below separate
        mpfr_div(t1, dx, d2, MPFR_RNDN);
        mpfr_add(sre, sre, t1, MPFR_RNDN);
        mpfr_div(t1, dy, d2, MPFR_RNDN);
        mpfr_sub(sim, sim, t1, MPFR_RNDN);
      }
      BigComplex S(0.0, 0.0, prec);
      mpfr_set(S.re.raw(), sre, MPFR_RNDN);
      mpfr_set(S.im.raw(), sim, MPFR_RNDN);

      BigComplex denom = BigComplex::one(prec) - N * S;
      BigComplex step = denom.is_zero() ? N : N / denom;
      z[static_cast<size_t>(i)] -= step;
    }
  }
  mpfr_clears(dx, dy, d2, t1, sre, sim, static_cast<mpfr_ptr>(nullptr));

  if (!all_done)
    throw NumericalError("simultaneous iteration not certified after " +
                         std::to_string(max_sweeps) + " sweeps at " +
                         std::to_string(prec) + " bits");

  // Newton polish where it helps; certification is re-checked afterwards.
  Solved out;
  out.sweeps = sweep;
  out.roots.reserve(static_cast<size_t>(n));
  out.residuals.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    BigComplex zi = z[static_cast<size_t>(i)];
    pc.reset(zi, tp.degree);
    BigComplex e = eval_terms(tp, pc, prec);
    BigFloat best = e.abs();
    for (int it = 0; it < 2; ++it) {
      BigComplex pe = eval_terms(td, pc, prec);
      if (pe.is_zero()) break;
      BigComplex cand = zi - e / pe;
      pc.reset(cand, tp.degree);
      BigComplex ce = eval_terms(tp, pc, prec);
      BigFloat ca = ce.abs();
      if (ca < best) {
        zi = cand;
        e = ce;
        best = ca;
      } else {
        pc.reset(zi, tp.degree);
        break;
      }
    }
    BigFloat scale = eval_scale(tp, zi.abs());
    BigFloat rel = scale.is_zero() ? best : best / scale;
    if (rel > BigFloat::pow2(-static_cast<long>(prec / 2), prec))
      throw NumericalError("residual regressed past certification");
    out.residuals.push_back(rel.to_double());
    out.roots.push_back(std::move(zi));
  }
  return out;
}

void assign_clusters(RootSet& rs, unsigned prec) {
  const size_t n = rs.roots.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  };
  BigFloat radius = BigFloat::pow2(-static_cast<long>(prec / 4), prec);
  double coarse = std::max(radius.to_double() * 4.0, 1e-280);
  std::vector<std::complex<double>> zd(n);
  for (size_t i = 0; i < n; ++i) zd[i] = rs.roots[i].to_complex();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (std::abs(zd[i] - zd[j]) > coarse) continue;
      if (dist(rs.roots[i], rs.roots[j]) <= radius) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<size_t>(b)] = a;
      }
    }
  std::vector<int> id(n, -1), size(n, 0);
  int next = 0;
  rs.cluster_id.resize(n);
  for (size_t i = 0; i < n; ++i) {
    int r = find(static_cast<int>(i));
    if (id[static_cast<size_t>(r)] < 0) id[static_cast<size_t>(r)] = next++;
    rs.cluster_id[i] = id[static_cast<size_t>(r)];
  }
  for (size_t i = 0; i < n; ++i) size[static_cast<size_t>(rs.cluster_id[i])]++;
  rs.multiplicity.resize(n);
  for (size_t i = 0; i < n; ++i) rs.multiplicity[i] = size[static_cast<size_t>(rs.cluster_id[i])];
}

}  // namespace

int RootSet::cluster_count() const {
  int m = 0;
  for (int c : cluster_id) m = std::max(m, c + 1);
  return m;
}

RootSet poly_roots(const Poly& p, const RootOptions& opts) {
  if (p.is_zero())
    throw ValidationError("zero polynomial: root set undefined (every point is a root)");
  if (p.degree() < 1) throw ValidationError("constant polynomial has no roots");

  // exact zero roots come off first
  int zero_mult = 0;
  while (zero_mult <= p.degree() && p.coeff(zero_mult).is_zero()) ++zero_mult;
  std::vector<BigComplex> c(p.coeffs().begin() + zero_mult, p.coeffs().end());

  unsigned prec = clamp_precision(std::max(opts.precision, p.prec()));
  for (;; prec = std::min(prec * 2, opts.max_precision)) {
    std::vector<BigComplex> cw;
    cw.reserve(c.size());
    for (const auto& z : c) cw.push_back(with_prec(z, prec));
    try {
      RootSet rs;
      rs.precision_used = prec;
      if (cw.size() == 1) {
        rs.sweeps = 0;  // p = c * z^k
      } else if (cw.size() == 2) {
        rs.roots.push_back(-(cw[0] / cw[1]));
        rs.residuals.push_back(0.0);
        rs.sweeps = 0;
      } else {
        Solved s = aberth_at(cw, prec, opts.max_sweeps);
        rs.roots = std::move(s.roots);
        rs.residuals = std::move(s.residuals);
        rs.sweeps = s.sweeps;
      }
      for (int k = 0; k < zero_mult; ++k) {
        rs.roots.push_back(BigComplex::zero(prec));
        rs.residuals.push_back(0.0);
      }
      assign_clusters(rs, prec);
      return rs;
    } catch (const NumericalError&) {
      if (prec >= opts.max_precision) throw;
    }
  }
}

}  // namespace eqlab::mp
