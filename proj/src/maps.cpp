#include "eqlab/maps.hpp"

#include <algorithm>
#include <cctype>

#include "eqlab/errors.hpp"
#include "eqlab/hash.hpp"
#include "eqlab/roots.hpp"

namespace eqlab::dyn {

using mp::BigComplex;
using mp::BigFloat;

namespace {

// coefficients of the degree-d homogenization read back at the other chart:
// rev[j] = coeff(d - j), zero above the affine degree
Poly reverse_padded(const Poly& p, int d) {
  std::vector<BigComplex> c(static_cast<size_t>(d) + 1, BigComplex::zero(p.prec()));
  for (int j = 0; j <= d; ++j)
    if (d - j <= p.degree()) c[static_cast<size_t>(j)] = p.coeff(d - j);
  return Poly(std::move(c));
}

Poly wronskian_of(const Poly& p, const Poly& q) {
  return p.derivative() * q - p * q.derivative();
}

// |det Sylvester(p, q)| of the degree-d coefficient rows, relative to the
// Hadamard bound.  Zero relative size means a shared projective root.
double resultant_relative(const Poly& p, const Poly& q, int d, unsigned vp) {
  int n = 2 * d;
  std::vector<std::vector<BigComplex>> m(static_cast<size_t>(n));
  auto row_of = [&](const Poly& f, int shift) {
    std::vector<BigComplex> row(static_cast<size_t>(n), BigComplex::zero(vp));
    for (int j = 0; j <= d; ++j) {
      int col = shift + j;
      BigComplex c = d - j <= f.degree() ? f.coeff(d - j) : BigComplex::zero(vp);
      row[static_cast<size_t>(col)] = mp::with_prec(c, vp);
    }
    return row;
  };
  for (int i = 0; i < d; ++i) m[static_cast<size_t>(i)] = row_of(p, i);
  for (int i = 0; i < d; ++i) m[static_cast<size_t>(d + i)] = row_of(q, i);

  BigFloat hadamard(1.0, vp);
  for (auto& row : m) {
    BigFloat s(0.0, vp);
    for (auto& e : row) s += e.abs2();
    if (s.is_zero()) return 0.0;
    hadamard *= sqrt(s);
  }

  BigFloat det_abs(1.0, vp);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    BigFloat best = m[static_cast<size_t>(k)][static_cast<size_t>(k)].abs2();
    for (int i = k + 1; i < n; ++i) {
      BigFloat cand = m[static_cast<size_t>(i)][static_cast<size_t>(k)].abs2();
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best.is_zero()) return 0.0;
    std::swap(m[static_cast<size_t>(k)], m[static_cast<size_t>(piv)]);
    auto& rk = m[static_cast<size_t>(k)];
    det_abs *= sqrt(best);
    for (int i = k + 1; i < n; ++i) {
      auto& ri = m[static_cast<size_t>(i)];
      BigComplex factor = ri[static_cast<size_t>(k)] / rk[static_cast<size_t>(k)];
      for (int j = k + 1; j < n; ++j)
        ri[static_cast<size_t>(j)] -= factor * rk[static_cast<size_t>(j)];
    }
  }
  return (det_abs / hadamard).to_double();
}

}  // namespace

RationalMap::RationalMap(Poly p, Poly q, bool validate) : p_(std::move(p)), q_(std::move(q)) {
  if (p_.is_zero() || q_.is_zero())
    throw ValidationError("map needs nonzero numerator and denominator");
  d_ = std::max(p_.degree(), q_.degree());
  if (d_ < 1) throw ValidationError("constant map: degree must be at least 1");
  if (validate) {
    unsigned vp = mp::clamp_precision(std::max(prec(), 256u));
    double rel = resultant_relative(p_, q_, d_, vp);
    if (rel <= std::ldexp(1.0, -static_cast<int>(vp / 2)))
      throw ValidationError("degenerate map: numerator and denominator share a root");
  }
  p_rev_ = reverse_padded(p_, d_);
  q_rev_ = reverse_padded(q_, d_);
  w_fin_ = wronskian_of(p_, q_);
  w_rev_ = wronskian_of(p_rev_, q_rev_);
}

RationalMap RationalMap::polynomial(Poly p) {
  unsigned pr = p.prec();
  return RationalMap(std::move(p), Poly::constant(BigComplex::one(pr)));
}

RationalMap RationalMap::power_map(int d, unsigned prec) {
  return polynomial(Poly::monomial(d, BigComplex::one(prec)));
}

RationalMap RationalMap::from_coeff_lists(const std::string& p_list, const std::string& q_list,
                                          unsigned prec) {
  auto parse = [prec](const std::string& text) {
    std::vector<BigComplex> out;
    size_t start = 0;
    while (start <= text.size()) {
      size_t comma = text.find(',', start);
      std::string item =
          comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
      out.push_back(parse_complex_literal(item, prec));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return Poly(std::move(out));
  };
  return RationalMap(parse(p_list), parse(q_list));
}

std::pair<BigComplex, BigComplex> RationalMap::apply_hom(const ProjPoint& x) const {
  if (x.chart() == Chart::finite) return {p_.eval(x.coord()), q_.eval(x.coord())};
  return {p_rev_.eval(x.coord()), q_rev_.eval(x.coord())};
}

ProjPoint RationalMap::apply(const ProjPoint& x) const {
  auto [pz, qz] = apply_hom(x);
  return ProjPoint::from_pair(pz, qz);
}

ProjPoint RationalMap::iterate(const ProjPoint& x, int n) const {
  if (n < 0) throw ValidationError("iterate count must be nonnegative");
  ProjPoint y = x;
  for (int i = 0; i < n; ++i) y = apply(y);
  return y;
}

BigFloat RationalMap::spherical_derivative_big(const ProjPoint& x) const {
  const BigComplex& t = x.coord();
  const Poly& w = x.chart() == Chart::finite ? w_fin_ : w_rev_;
  const Poly& a = x.chart() == Chart::finite ? p_ : p_rev_;
  const Poly& b = x.chart() == Chart::finite ? q_ : q_rev_;
  if (w.is_zero()) throw NumericalError("vanishing Wronskian: map is not reduced");
  unsigned pr = std::max(prec(), x.prec());
  BigFloat one(1.0, pr);
  BigFloat num = (one + t.abs2()) * w.eval(t).abs();
  BigFloat den = a.eval(t).abs2() + b.eval(t).abs2();
  return num / den;
}

double RationalMap::spherical_derivative(const ProjPoint& x) const {
  return spherical_derivative_big(x).to_double();
}

BigFloat RationalMap::spherical_derivative_in_chart(const ProjPoint& x, Chart c) const {
  if (x.chart() == c) return spherical_derivative_big(x);
  if (x.coord().is_zero())
    throw ValidationError(c == Chart::finite ? "point at infinity has no finite-chart form"
                                             : "origin has no infinity-chart form");
  ProjPoint flipped(c, BigComplex::one(x.prec()) / x.coord());
  return spherical_derivative_big(flipped);
}

BigComplex RationalMap::step_derivative(const ProjPoint& x, const ProjPoint& fx) const {
  const BigComplex& t = x.coord();
  bool src_fin = x.chart() == Chart::finite;
  bool tgt_fin = fx.chart() == Chart::finite;
  BigComplex w = src_fin ? w_fin_.eval(t) : w_rev_.eval(t);
  if (tgt_fin) {
    BigComplex den = src_fin ? q_.eval(t) : q_rev_.eval(t);
    return w / (den * den);
  }
  BigComplex den = src_fin ? p_.eval(t) : p_rev_.eval(t);
  return -w / (den * den);
}

RationalMap::CycleMultiplier RationalMap::cycle_multiplier(const std::vector<ProjPoint>& cycle,
                                                           double closure_tol) const {
  if (cycle.empty()) throw ValidationError("empty cycle");
  unsigned pr = prec();
  BigFloat tol(closure_tol, 64);
  BigComplex mult = BigComplex::one(pr);
  for (size_t i = 0; i < cycle.size(); ++i) {
    const ProjPoint& next = cycle[(i + 1) % cycle.size()];
    ProjPoint image = apply(cycle[i]);
    if (sph_dist(image, next) > tol)
      throw ValidationError("not a cycle: image of point " + std::to_string(i) +
                            " misses its successor");
    mult *= step_derivative(cycle[i], next);
  }
  return {mult, mult.abs().to_double()};
}

std::vector<ProjPoint> RationalMap::critical_points() const {
  if (w_fin_.is_zero()) throw NumericalError("vanishing Wronskian: map is not reduced");
  std::vector<ProjPoint> out;
  int total = 2 * d_ - 2;
  int finite = w_fin_.degree();
  if (finite >= 1) {
    mp::RootOptions opts;
    opts.precision = mp::clamp_precision(std::max(prec(), 128u));
    mp::RootSet rs = mp::poly_roots(w_fin_, opts);
    for (const BigComplex& r : rs.roots) out.push_back(ProjPoint::from_affine(r));
  }
  for (int i = finite < 0 ? 0 : finite; i < total; ++i) out.push_back(ProjPoint::infinity(prec()));
  return out;
}

std::vector<ProjPoint> RationalMap::preimages(const ProjPoint& a) const {
  const BigComplex& alpha = a.coord();
  Poly h = a.chart() == Chart::finite ? p_ - q_.scaled(alpha) : p_.scaled(alpha) - q_;
  if (h.is_zero()) throw NumericalError("degenerate preimage equation");
  std::vector<ProjPoint> out;
  if (h.degree() >= 1) {
    mp::RootOptions opts;
    opts.precision = mp::clamp_precision(std::max({prec(), a.prec(), 128u}));
    mp::RootSet rs = mp::poly_roots(h, opts);
    for (const BigComplex& r : rs.roots) out.push_back(ProjPoint::from_affine(r));
  }
  for (int i = h.degree() < 0 ? 0 : h.degree(); i < d_; ++i)
    out.push_back(ProjPoint::infinity(prec()));
  return out;
}

PostcriticalSet RationalMap::postcritical(int m) const {
  if (m < 0) throw ValidationError("postcritical order must be nonnegative");
  PostcriticalSet out;
  out.order = m;
  if (m == 0) return out;
  std::vector<ProjPoint> crit = critical_points();
  std::vector<size_t> keep = dedup_indices(crit, 1e-20);
  std::vector<ProjPoint> orbit;
  orbit.reserve(keep.size());
  for (size_t i : keep) orbit.push_back(crit[i]);
  std::vector<ProjPoint> pts;
  std::vector<int> idx;
  for (int j = 1; j <= m; ++j)
    for (ProjPoint& c : orbit) {
      c = apply(c);
      pts.push_back(c);
      idx.push_back(j);
    }
  for (size_t i : dedup_indices(pts, 1e-20)) {
    out.points.push_back(pts[i]);
    out.iterate_index.push_back(idx[i]);
  }
  return out;
}

RationalMap RationalMap::iterate_map(int n, int cap) const {
  if (n < 0) throw ValidationError("iterate count must be nonnegative");
  unsigned pr = prec();
  if (n == 0)
    return RationalMap(Poly::monomial(1, BigComplex::one(pr)),
                       Poly::constant(BigComplex::one(pr)), false);
  Poly pk = p_, qk = q_;
  long long deg = d_;
  for (int k = 2; k <= n; ++k) {
    deg *= d_;
    if (deg > cap)
      throw CapacityError("iterate degree " + std::to_string(deg) + " exceeds cap " +
                          std::to_string(cap));
    std::vector<Poly> pw(static_cast<size_t>(d_) + 1), qw(static_cast<size_t>(d_) + 1);
    pw[0] = Poly::constant(BigComplex::one(pr));
    qw[0] = pw[0];
    for (int i = 1; i <= d_; ++i) {
      pw[static_cast<size_t>(i)] = pw[static_cast<size_t>(i - 1)] * pk;
      qw[static_cast<size_t>(i)] = qw[static_cast<size_t>(i - 1)] * qk;
    }
    Poly pn, qn;
    for (int i = 0; i <= d_; ++i) {
      Poly cross = pw[static_cast<size_t>(i)] * qw[static_cast<size_t>(d_ - i)];
      if (i <= p_.degree() && !(p_.coeff(i).is_zero())) pn = pn + cross.scaled(p_.coeff(i));
      if (i <= q_.degree() && !(q_.coeff(i).is_zero())) qn = qn + cross.scaled(q_.coeff(i));
    }
    pk = std::move(pn);
    qk = std::move(qn);
  }
  return RationalMap(std::move(pk), std::move(qk), false);
}

RationalMap RationalMap::with_prec(unsigned pr) const {
  return RationalMap(p_.with_prec(pr), q_.with_prec(pr), false);
}

std::string RationalMap::canonical_text() const {
  return "deg=" + std::to_string(d_) + ";P=" + p_.serialize() + ";Q=" + q_.serialize();
}

uint64_t RationalMap::canonical_hash() const { return fnv1a64(canonical_text()); }

ProductMap::ProductMap(RationalMap first, RationalMap second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_.degree() != second_.degree())
    throw ValidationError("product map needs equal component degrees");
}

ProductMap::Point ProductMap::apply(const Point& x) const {
  return {first_.apply(x.first), second_.apply(x.second)};
}

ProductMap::Point ProductMap::iterate(const Point& x, int n) const {
  if (n < 0) throw ValidationError("iterate count must be nonnegative");
  Point y = x;
  for (int i = 0; i < n; ++i) y = apply(y);
  return y;
}

std::pair<double, double> ProductMap::spherical_derivative(const Point& x) const {
  return {first_.spherical_derivative(x.first), second_.spherical_derivative(x.second)};
}

std::string ProductMap::canonical_text() const {
  return "product;first{" + first_.canonical_text() + "};second{" + second_.canonical_text() + "}";
}

uint64_t ProductMap::canonical_hash() const { return fnv1a64(canonical_text()); }

BigComplex parse_complex_literal(const std::string& text, unsigned prec) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ValidationError("empty complex literal");

  size_t split = std::string::npos;
  for (size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }

  auto parse_part = [prec](std::string t) {
    bool imag = !t.empty() && (t.back() == 'i' || t.back() == 'I');
    if (imag) {
      t.pop_back();
      if (t.empty() || t == "+") t = "1";
      else if (t == "-") t = "-1";
    }
    BigFloat v(t, prec);
    if (!v.is_finite()) throw ValidationError("non-finite complex literal: " + t);
    return std::make_pair(v, imag);
  };

  BigFloat re(0.0, prec), im(0.0, prec);
  bool have_re = false, have_im = false;
  auto absorb = [&](const std::pair<BigFloat, bool>& part) {
    if (part.second) {
      if (have_im) throw ValidationError("malformed complex literal: " + text);
      im = part.first;
      have_im = true;
    } else {
      if (have_re) throw ValidationError("malformed complex literal: " + text);
      re = part.first;
      have_re = true;
    }
  };
  if (split == std::string::npos) {
    absorb(parse_part(s));
  } else {
    absorb(parse_part(s.substr(0, split)));
    absorb(parse_part(s.substr(split)));
  }
  return BigComplex(std::move(re), std::move(im));
}

}  // namespace eqlab::dyn
