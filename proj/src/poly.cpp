#include "eqlab/poly.hpp"

#include <sstream>

#include "eqlab/errors.hpp"

namespace eqlab::mp {

Poly::Poly(std::vector<BigComplex> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::from_doubles(const std::vector<std::complex<double>>& c, unsigned prec) {
  std::vector<BigComplex> v;
  v.reserve(c.size());
  for (const auto& z : c) v.emplace_back(z, prec);
  return Poly(std::move(v));
}

Poly Poly::monomial(int degree, const BigComplex& lead) {
  if (degree < 0) throw ValidationError("monomial degree must be >= 0");
  std::vector<BigComplex> v(static_cast<size_t>(degree) + 1, BigComplex::zero(lead.prec()));
  v.back() = lead;
  return Poly(std::move(v));
}

Poly Poly::constant(const BigComplex& c) { return Poly(std::vector<BigComplex>{c}); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

unsigned Poly::prec() const {
  unsigned p = kMinPrecision;
  for (const auto& z : c_)
    if (z.prec() > p) p = z.prec();
  return p;
}

BigComplex Poly::eval(const BigComplex& z) const {
  if (c_.empty()) return BigComplex::zero(z.prec());
  BigComplex acc = c_.back();
  for (size_t i = c_.size() - 1; i-- > 0;) acc = acc * z + c_[i];
  return acc;
}

Poly::Evaluated Poly::eval_with_bound(const BigComplex& z) const {
  unsigned wp = std::max(prec(), z.prec());
  if (c_.empty()) return {BigComplex::zero(wp), BigFloat(0.0, wp)};
  BigFloat t = z.abs();
  BigComplex acc = c_.back();
  BigFloat mag = c_.back().abs();
  for (size_t i = c_.size() - 1; i-- > 0;) {
    acc = acc * z + c_[i];
    mag = mag * t + c_[i].abs();
  }
  // unit roundoff for complex Horner: each step costs one cmul + cadd,
  // classical bound (2n+1) * u * sum |c_i| |z|^i with a factor 4 for the
  // complex multiply
  long n = degree();
  BigFloat u = BigFloat::pow2(-static_cast<long>(wp), wp);
  BigFloat factor(static_cast<long>(8 * n + 4), wp);
  return {acc, factor * u * mag};
}

BigFloat Poly::magnitude_at(const BigFloat& t) const {
  BigFloat mag(0.0, std::max(prec(), t.prec()));
  for (size_t i = c_.size(); i-- > 0;) mag = mag * t + c_[i].abs();
  return mag;
}

Poly Poly::with_prec(unsigned prec) const {
  std::vector<BigComplex> v;
  v.reserve(c_.size());
  for (const BigComplex& c : c_) v.push_back(mp::with_prec(c, prec));
  return Poly(std::move(v));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<BigComplex> v;
  v.reserve(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i)
    v.push_back(c_[i] * BigFloat(static_cast<long>(i), c_[i].prec()));
  return Poly(std::move(v));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<BigComplex> v(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (i < a.c_.size() && i < b.c_.size())
      v[i] = a.c_[i] + b.c_[i];
    else
      v[i] = i < a.c_.size() ? a.c_[i] : b.c_[i];
  }
  return Poly(std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<BigComplex> v(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (i < a.c_.size() && i < b.c_.size())
      v[i] = a.c_[i] - b.c_[i];
    else
      v[i] = i < a.c_.size() ? a.c_[i] : -b.c_[i];
  }
  return Poly(std::move(v));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  unsigned wp = std::max(a.prec(), b.prec());
  std::vector<BigComplex> v(a.c_.size() + b.c_.size() - 1, BigComplex::zero(wp));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      v[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return Poly(std::move(v));
}

Poly Poly::scaled(const BigComplex& s) const {
  std::vector<BigComplex> v;
  v.reserve(c_.size());
  for (const auto& z : c_) v.push_back(z * s);
  return Poly(std::move(v));
}

Poly Poly::compose(const Poly& q, int cap) const {
  if (is_zero()) return Poly();
  if (degree() >= 1 && q.degree() >= 1) {
    long result_deg = static_cast<long>(degree()) * q.degree();
    if (result_deg > cap)
      throw CapacityError("composition degree " + std::to_string(result_deg) +
                          " exceeds cap " + std::to_string(cap));
  }
  Poly acc = Poly::constant(c_.back());
  for (size_t i = c_.size() - 1; i-- > 0;) {
    acc = acc * q;
    acc = acc + Poly::constant(c_[i]);
  }
  return acc;
}

Poly Poly::fixed_point_poly(const Poly& p, const Poly& q) {
  return p - (Poly::monomial(1, BigComplex::one(q.prec())) * q);
}

std::string Poly::serialize() const {
  std::ostringstream os;
  os << c_.size();
  for (const auto& z : c_) os << " ; " << z.re.serialize() << " " << z.im.serialize();
  return os.str();
}

Poly Poly::deserialize(const std::string& line) {
  std::istringstream is(line);
  size_t n = 0;
  is >> n;
  std::vector<BigComplex> v;
  v.reserve(n);
  std::string sep, re, im;
  for (size_t i = 0; i < n; ++i) {
    is >> sep >> re >> im;
    if (sep != ";" || !is) throw ValidationError("corrupt polynomial record");
    v.emplace_back(BigFloat::deserialize(re), BigFloat::deserialize(im));
  }
  return Poly(std::move(v));
}

}  // namespace eqlab::mp
