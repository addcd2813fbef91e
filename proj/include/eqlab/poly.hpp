#pragma once
#include <vector>

#include "eqlab/bigcomplex.hpp"

namespace eqlab::mp {

inline constexpr int kComposeCap = 4096;  // max result degree of a composition

// Dense polynomial, coefficients ascending, trailing zeros trimmed.
// The zero polynomial has an empty coefficient vector and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<BigComplex> coeffs);
  static Poly from_doubles(const std::vector<std::complex<double>>& c,
                           unsigned prec = kDefaultPrecision);
  static Poly monomial(int degree, const BigComplex& lead);
  static Poly constant(const BigComplex& c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const BigComplex& coeff(int i) const { return c_[static_cast<size_t>(i)]; }
  const std::vector<BigComplex>& coeffs() const { return c_; }
  const BigComplex& leading() const { return c_.back(); }
  unsigned prec() const;

  // same coefficients carried at a different working precision
  Poly with_prec(unsigned prec) const;

  BigComplex eval(const BigComplex& z) const;

  // Horner value plus a rigorous running bound on its rounding error:
  // |computed - exact| <= bound (standard (2n+1)u * sum |c_i||z|^i analysis).
  struct Evaluated {
    BigComplex value;
    BigFloat error_bound;
  };
  Evaluated eval_with_bound(const BigComplex& z) const;

  // sum |c_i| t^i, used for residual scales
  BigFloat magnitude_at(const BigFloat& t) const;

  Poly derivative() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const BigComplex& s) const;

  // p(q(z)); refuses when deg(p)*deg(q) exceeds cap
  Poly compose(const Poly& q, int cap = kComposeCap) const;

  // p(z) - z*q(z) style helper used for fixed-point equations
  static Poly fixed_point_poly(const Poly& p, const Poly& q);

  std::string serialize() const;
  static Poly deserialize(const std::string& line);

 private:
  void trim();
  std::vector<BigComplex> c_;
};

}  // namespace eqlab::mp
