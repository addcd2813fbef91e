#pragma once
#include <complex>
#include <string>
#include <vector>

#include "eqlab/bigcomplex.hpp"

namespace eqlab::dyn {

using mp::BigComplex;
using mp::BigFloat;

enum class Chart { finite, infinity };

// Point of P^1 in canonical form: the larger homogeneous component is divided
// out, so the stored coordinate has modulus <= 1.  finite chart stores z/w,
// infinity chart stores w/z.
class ProjPoint {
 public:
  ProjPoint() : chart_(Chart::finite), coord_(BigComplex::zero()) {}
  ProjPoint(Chart c, BigComplex coord) : chart_(c), coord_(std::move(coord)) {}

  static ProjPoint from_affine(const BigComplex& z);
  static ProjPoint from_pair(const BigComplex& z, const BigComplex& w);
  static ProjPoint from_double(std::complex<double> z, unsigned prec = mp::kDefaultPrecision);
  static ProjPoint infinity(unsigned prec = mp::kDefaultPrecision) {
    return ProjPoint(Chart::infinity, BigComplex::zero(prec));
  }

  Chart chart() const { return chart_; }
  const BigComplex& coord() const { return coord_; }
  unsigned prec() const { return coord_.prec(); }
  bool is_infinity() const { return chart_ == Chart::infinity && coord_.is_zero(); }

  // homogeneous representative (z, w) with max(|z|,|w|) = 1
  BigComplex hom_z() const { return chart_ == Chart::finite ? coord_ : BigComplex::one(prec()); }
  BigComplex hom_w() const { return chart_ == Chart::finite ? BigComplex::one(prec()) : coord_; }

  // affine coordinate z/w; throws at the point at infinity
  BigComplex affine() const;
  std::complex<double> affine_d() const;

  // unit vector in R^3 under the standard sphere identification
  void sphere3(double out[3]) const;

  std::string serialize() const;
  static ProjPoint deserialize(const std::string& text);

 private:
  Chart chart_;
  BigComplex coord_;
};

// Fubini-Study distance, arcsin of the normalized cross term; range [0, pi/2].
BigFloat sph_dist(const ProjPoint& a, const ProjPoint& b);
double sph_dist_d(const ProjPoint& a, const ProjPoint& b);

// Distance between double-precision sphere points (for measure atoms).
double sph_dist_d(const std::complex<double>& a, bool a_inf_chart,
                  const std::complex<double>& b, bool b_inf_chart);

// Tolerance-based dedup preserving first occurrence; returns kept indices.
// Two-stage: coarse double bucketing, exact BigFloat confirmation.
std::vector<size_t> dedup_indices(const std::vector<ProjPoint>& pts, double tol);

}  // namespace eqlab::dyn
