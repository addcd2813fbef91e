#pragma once
#include <complex>
#include <string>

#include "eqlab/bigfloat.hpp"

namespace eqlab::mp {

// Complex pair over BigFloat.  The naive division formula is safe here:
// MPFR exponents span +-2^62, so the intermediate |b|^2 cannot over- or
// underflow at any precision this library uses.
struct BigComplex {
  BigFloat re, im;

  BigComplex() = default;
  explicit BigComplex(double r, double i = 0.0, unsigned prec = kDefaultPrecision)
      : re(r, prec), im(i, prec) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(const std::complex<double>& z, unsigned prec = kDefaultPrecision)
      : re(z.real(), prec), im(z.imag(), prec) {}

  static BigComplex zero(unsigned prec = kDefaultPrecision) { return BigComplex(0.0, 0.0, prec); }
  static BigComplex one(unsigned prec = kDefaultPrecision) { return BigComplex(1.0, 0.0, prec); }

  unsigned prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  std::string serialize() const { return re.serialize() + " " + im.serialize(); }

  BigComplex conj() const { return BigComplex(re, -im); }
  BigFloat abs2() const { return re * re + im * im; }
  BigFloat abs() const { return hypot(re, im); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re + b.re, a.im + b.im);
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re - b.re, a.im - b.im);
  }
  friend BigComplex operator-(const BigComplex& a) { return BigComplex(-a.re, -a.im); }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend BigComplex operator*(const BigComplex& a, const BigFloat& s) {
    return BigComplex(a.re * s, a.im * s);
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat d = b.abs2();
    return BigComplex((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
  }
  BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
  BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }
  BigComplex& operator*=(const BigComplex& o) { *this = *this * o; return *this; }

  friend bool operator==(const BigComplex& a, const BigComplex& b) {
    return a.re == b.re && a.im == b.im;
  }

  // principal square root
  friend BigComplex csqrt(const BigComplex& z) {
    if (z.is_zero()) return BigComplex(0.0, 0.0, z.prec());
    BigFloat m = z.abs();
    BigFloat half(0.5, z.prec());
    BigFloat are = z.re.sign() >= 0 ? z.re : -z.re;
    BigFloat u = sqrt((m + are) * half);
    if (z.re.sign() >= 0) {
      BigFloat v = z.im / (u + u);
      return BigComplex(u, v);
    }
    BigFloat v = z.im.sign() >= 0 ? u : -u;
    BigFloat w = z.im / (v + v);
    return BigComplex(w, v);
  }

  friend BigFloat dist(const BigComplex& a, const BigComplex& b) { return (a - b).abs(); }
};

inline BigComplex with_prec(const BigComplex& z, unsigned prec) {
  return BigComplex(BigFloat::with_prec(z.re, prec), BigFloat::with_prec(z.im, prec));
}

// e^{i*2*pi*t} at the target precision
inline BigComplex unit_circle_point(double t, unsigned prec = kDefaultPrecision) {
  BigFloat tau(0.0, prec);
  mpfr_const_pi(tau.raw(), MPFR_RNDN);
  BigFloat angle = tau * BigFloat(2.0 * t, prec);
  return BigComplex(cos(angle), sin(angle));
}

}  // namespace eqlab::mp
