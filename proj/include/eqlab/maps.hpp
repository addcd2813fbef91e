#pragma once
#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eqlab/poly.hpp"
#include "eqlab/projective.hpp"

namespace eqlab::dyn {

using mp::Poly;

struct PostcriticalSet {
  int order = 0;
  std::vector<ProjPoint> points;
  std::vector<int> iterate_index;  // point = f^j(c) for some critical c, 1 <= j <= order
};

// Rational map f = p/q on P^1, kept as the two dehomogenizations of the
// homogeneous degree-d pair (P, Q), d = max(deg p, deg q).  Immutable after
// construction.
class RationalMap {
 public:
  // validate runs the resultant check on the degree-d coefficient rows, which
  // rejects pairs sharing a projective root (including a joint degree drop at
  // infinity).  Compositions of valid maps stay valid and skip it.
  RationalMap(Poly p, Poly q, bool validate = true);

  static RationalMap polynomial(Poly p);
  static RationalMap power_map(int d, unsigned prec = mp::kDefaultPrecision);
  // comma-separated complex coefficient lists, ascending degree
  static RationalMap from_coeff_lists(const std::string& p_list, const std::string& q_list,
                                      unsigned prec = mp::kDefaultPrecision);

  int degree() const { return d_; }
  bool is_polynomial() const { return q_.degree() == 0; }
  // iteration theory needs degree >= 2; degree 1 is allowed as a map object
  bool is_dynamical() const { return d_ >= 2; }
  unsigned prec() const { return std::max(p_.prec(), q_.prec()); }

  const Poly& p() const { return p_; }
  const Poly& q() const { return q_; }
  const Poly& p_rev() const { return p_rev_; }
  const Poly& q_rev() const { return q_rev_; }
  const Poly& wronskian() const { return w_fin_; }      // p'q - pq'
  const Poly& wronskian_rev() const { return w_rev_; }  // same for the reversed pair

  // hom pair (P, Q) on the canonical max-norm-1 representative of x
  std::pair<BigComplex, BigComplex> apply_hom(const ProjPoint& x) const;
  ProjPoint apply(const ProjPoint& x) const;
  ProjPoint iterate(const ProjPoint& x, int n) const;

  // norm of Df at x between round metrics, chart-independent
  BigFloat spherical_derivative_big(const ProjPoint& x) const;
  double spherical_derivative(const ProjPoint& x) const;
  // forced-chart evaluation backing the chart-independence check; throws when
  // x is not representable in chart c
  BigFloat spherical_derivative_in_chart(const ProjPoint& x, Chart c) const;

  // derivative of the transition written from the chart of x to the chart of
  // f(x); the product of these around a cycle is the true complex multiplier
  BigComplex step_derivative(const ProjPoint& x, const ProjPoint& fx) const;

  struct CycleMultiplier {
    BigComplex value;
    double modulus = 0.0;
  };
  // pre: apply maps each listed point to the next, last to first, within
  // closure_tol spherical distance; throws ValidationError otherwise
  CycleMultiplier cycle_multiplier(const std::vector<ProjPoint>& cycle,
                                   double closure_tol = 1e-25) const;

  // the 2d-2 critical points with multiplicity (repeated entries)
  std::vector<ProjPoint> critical_points() const;

  // exactly d points with multiplicity
  std::vector<ProjPoint> preimages(const ProjPoint& a) const;

  PostcriticalSet postcritical(int m) const;

  // f^n as a single degree-d^n map; refuses past the composition cap
  RationalMap iterate_map(int n, int cap = mp::kComposeCap) const;

  // same map with coefficients carried at a different working precision;
  // expanded iterates cancel heavily inside the filled Julia set, so callers
  // lift before composing deep
  RationalMap with_prec(unsigned prec) const;

  // deterministic text form (degree + serialized coefficient lists); its
  // 64-bit hash keys caches
  std::string canonical_text() const;
  uint64_t canonical_hash() const;

 private:
  Poly p_, q_, p_rev_, q_rev_, w_fin_, w_rev_;
  int d_ = 0;
};

// Product endomorphism of P^1 x P^1 with equal component degrees, the
// desk-scale stand-in for higher dimension.
class ProductMap {
 public:
  using Point = std::pair<ProjPoint, ProjPoint>;

  ProductMap(RationalMap first, RationalMap second);

  int degree() const { return first_.degree(); }
  const RationalMap& first() const { return first_; }
  const RationalMap& second() const { return second_; }

  Point apply(const Point& x) const;
  Point iterate(const Point& x, int n) const;
  // the differential is diagonal; both component norms are reported
  std::pair<double, double> spherical_derivative(const Point& x) const;

  std::string canonical_text() const;
  uint64_t canonical_hash() const;

 private:
  RationalMap first_, second_;
};

// Accepts "3", "-2.5", "1e-3", "i", "-i", "2i", "1+2i", "0.5-1.25e2i".
BigComplex parse_complex_literal(const std::string& text, unsigned prec = mp::kDefaultPrecision);

}  // namespace eqlab::dyn
