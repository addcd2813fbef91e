#include <doctest.h>

#include <complex>
#include <vector>

#include "eqlab/errors.hpp"
#include "eqlab/poly.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/roots.hpp"

using namespace eqlab;
using namespace eqlab::mp;

namespace {

Poly from_d(std::initializer_list<std::complex<double>> c, unsigned prec = kDefaultPrecision) {
  return Poly::from_doubles(std::vector<std::complex<double>>(c), prec);
}

double cdist(const BigComplex& a, std::complex<double> b) {
  return std::abs(a.to_complex() - b);
}

}  // namespace

TEST_CASE("horner matches hand-expanded cubic") {
  Poly p = from_d({0.0, -1.0, 0.0, 1.0});  // z^3 - z
  BigComplex v = p.eval(BigComplex(0.0, 1.0));
  CHECK(cdist(v, {0.0, -2.0}) < 1e-25);
}

TEST_CASE("derivative of even quartic") {
  Poly p = from_d({0.0, 0.0, -2.0, 0.0, 1.0});  // z^4 - 2z^2
  Poly d = p.derivative();                      // 4z^3 - 4z
  REQUIRE(d.degree() == 3);
  CHECK(cdist(d.coeff(0), 0.0) == 0.0);
  CHECK(cdist(d.coeff(1), -4.0) < 1e-30);
  CHECK(cdist(d.coeff(2), 0.0) == 0.0);
  CHECK(cdist(d.coeff(3), 4.0) < 1e-30);
}

TEST_CASE("self-composition of a quadratic, hand expansion") {
  Poly f = from_d({-1.0, 0.0, 1.0});  // z^2 - 1
  Poly ff = f.compose(f);             // (z^2-1)^2 - 1 = z^4 - 2z^2
  REQUIRE(ff.degree() == 4);
  CHECK(cdist(ff.coeff(0), 0.0) < 1e-30);
  CHECK(cdist(ff.coeff(1), 0.0) < 1e-30);
  CHECK(cdist(ff.coeff(2), -2.0) < 1e-30);
  CHECK(cdist(ff.coeff(3), 0.0) < 1e-30);
  CHECK(cdist(ff.coeff(4), 1.0) < 1e-30);
}

TEST_CASE("composition degree law and cap refusal") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    int dp = 1 + static_cast<int>(rng.index(6));
    int dq = 1 + static_cast<int>(rng.index(6));
    std::vector<std::complex<double>> cp(static_cast<size_t>(dp) + 1), cq(static_cast<size_t>(dq) + 1);
    for (auto& z : cp) z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (auto& z : cq) z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    cp.back() = 1.0;
    cq.back() = 1.0;
    Poly p = Poly::from_doubles(cp), q = Poly::from_doubles(cq);
    CHECK(p.compose(q).degree() == dp * dq);
  }
  Poly big = Poly::monomial(100, BigComplex::one());
  CHECK_THROWS_AS(big.compose(big), CapacityError);
  CHECK_NOTHROW(big.compose(big, 100 * 100));
}

TEST_CASE("identity composition passes through") {
  Poly id = Poly::monomial(1, BigComplex::one());
  Poly q = from_d({0.25, 0.0, 3.0, 1.0});
  Poly r = id.compose(q);
  REQUIRE(r.degree() == q.degree());
  for (int i = 0; i <= q.degree(); ++i) CHECK(cdist(r.coeff(i), q.coeff(i).to_complex()) == 0.0);
}

TEST_CASE("quadratic roots against the closed form") {
  Poly p = from_d({-1.0, -1.0, 1.0});  // z^2 - z - 1
  RootSet rs = poly_roots(p);
  REQUIRE(rs.roots.size() == 2);
  // oracle: (1 +- sqrt5)/2 at working precision
  BigFloat five(5.0, 256);
  BigFloat s5 = sqrt(five);
  BigFloat half(0.5, 256);
  std::vector<BigFloat> want{(BigFloat(1.0, 256) + s5) * half, (BigFloat(1.0, 256) - s5) * half};
  for (const auto& w : want) {
    double best = 1e9;
    for (const auto& r : rs.roots)
      best = std::min(best, (r - BigComplex(w, BigFloat(0.0, 256))).abs().to_double());
    CHECK(best < 1e-30);
  }
  for (double res : rs.residuals) CHECK(res <= 1e-18);
}

TEST_CASE("triple root at origin reported as one cluster, never merged") {
  Poly p = from_d({0.0, 0.0, 0.0, 2.0});  // 2z^3
  RootSet rs = poly_roots(p);
  REQUIRE(rs.roots.size() == 3);
  CHECK(rs.cluster_count() == 1);
  for (int m : rs.multiplicity) CHECK(m == 3);
  for (const auto& r : rs.roots) CHECK(r.abs().to_double() < 1e-30);
}

TEST_CASE("near-multiple root clusters at certification scale") {
  // (z - 1)^2 (z + 2): double root well below cluster radius after solve
  Poly p = from_d({2.0, -3.0, 0.0, 1.0});
  RootSet rs = poly_roots(p);
  REQUIRE(rs.roots.size() == 3);
  int with_mult2 = 0;
  for (size_t i = 0; i < rs.roots.size(); ++i)
    if (rs.multiplicity[i] == 2) {
      ++with_mult2;
      CHECK(cdist(rs.roots[i], 1.0) < 1e-6);
    }
  CHECK(with_mult2 == 2);
}

TEST_CASE("zero and constant polynomials rejected distinctly") {
  CHECK_THROWS_WITH_AS(poly_roots(Poly()), doctest::Contains("zero polynomial"), ValidationError);
  CHECK_THROWS_AS(poly_roots(Poly::constant(BigComplex(3.0))), ValidationError);
}

TEST_CASE("roots of unity certified on the circle") {
  std::vector<std::complex<double>> c(65, 0.0);
  c[0] = -1.0;
  c[64] = 1.0;
  RootSet rs = poly_roots(Poly::from_doubles(c));
  REQUIRE(rs.roots.size() == 64);
  for (const auto& r : rs.roots) {
    CHECK(std::abs(r.abs().to_double() - 1.0) < 1e-25);
  }
  CHECK(rs.cluster_count() == 64);
  CHECK(rs.sweeps > 0);
}

TEST_CASE("root product reconstructs random monic coefficients") {
  Rng rng(20260822);
  for (int deg : {3, 9, 17, 33, 64}) {
    std::vector<std::complex<double>> c(static_cast<size_t>(deg) + 1);
    for (auto& z : c) {
      double r = std::sqrt(rng.uniform()), th = rng.uniform(0, 6.283185307179586);
      z = {r * std::cos(th), r * std::sin(th)};
    }
    c.back() = 1.0;
    Poly p = Poly::from_doubles(c, 256);
    RootOptions opts;
    opts.precision = 256;
    RootSet rs = poly_roots(p, opts);
    REQUIRE(static_cast<int>(rs.roots.size()) == deg);
    Poly rebuilt = Poly::constant(BigComplex::one(256));
    for (const auto& r : rs.roots) {
      Poly factor(std::vector<BigComplex>{-r, BigComplex::one(256)});
      rebuilt = rebuilt * factor;
    }
    REQUIRE(rebuilt.degree() == deg);
    for (int i = 0; i <= deg; ++i)
      CHECK((rebuilt.coeff(i) - p.coeff(i)).abs().to_double() < 1e-20);
  }
}

TEST_CASE("horner error bound dominates true error") {
  Rng rng(7);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    int deg = 1 + static_cast<int>(rng.index(12));
    std::vector<std::complex<double>> c(static_cast<size_t>(deg) + 1);
    for (auto& z : c) z = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (std::abs(c.back()) < 1e-3) c.back() = 1.0;
    Poly p = Poly::from_doubles(c, 64);
    BigComplex z(rng.uniform(-2, 2), rng.uniform(-2, 2), 64);
    auto got = p.eval_with_bound(z);
    // reference at 4x the precision
    Poly hp = Poly::from_doubles(c, 256);
    BigComplex zh = with_prec(z, 256);
    BigComplex ref = hp.eval(zh);
    BigFloat err = (got.value - ref).abs();
    if (!(err <= got.error_bound)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("precision propagates upward through arithmetic") {
  BigFloat a(1.5, 128), b(2.5, 256);
  CHECK((a + b).prec() == 256);
  CHECK((b * a).prec() == 256);
  BigComplex x(1.0, 2.0, 128), y(0.5, 0.25, 512);
  CHECK((x * y).prec() == 512);
  CHECK((x / y).prec() == 512);
  CHECK(BigFloat(1.0, 16).prec() == kMinPrecision);  // floor at 64
}

TEST_CASE("complex square root squares back") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    BigComplex z(rng.uniform(-4, 4), rng.uniform(-4, 4), 192);
    BigComplex s = csqrt(z);
    CHECK((s * s - z).abs().to_double() < 1e-50);
  }
  CHECK(csqrt(BigComplex(0.0, 0.0)).is_zero());
}

TEST_CASE("decimal serialization round-trips exactly") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    BigFloat x(rng.uniform(-10, 10), 192);
    BigFloat y = BigFloat::deserialize(x.serialize());
    CHECK(x == y);
    CHECK(y.prec() == 192);
  }
  Poly p = from_d({0.125, -3.0, 1.0}, 256);
  Poly q = Poly::deserialize(p.serialize());
  REQUIRE(q.degree() == p.degree());
  for (int i = 0; i <= p.degree(); ++i) CHECK(q.coeff(i) == p.coeff(i));
}

TEST_CASE("solver escalates precision when asked to start low") {
  // Wilkinson-flavored stress: clustered roots force the ladder upward.
  std::vector<std::complex<double>> c{1.0};
  for (int k = 1; k <= 12; ++k) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] += c[i] * (-1.0 - 1e-7 * k);
    }
    c = next;
  }
  RootSet rs = poly_roots(Poly::from_doubles(c, 128));
  CHECK(rs.roots.size() == 12);
  CHECK(rs.precision_used >= 128);
  for (double r : rs.residuals) CHECK(r <= 1e-15);
}
