#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "eqlab/errors.hpp"
#include "eqlab/green.hpp"
#include "eqlab/sampling.hpp"
#include "eqlab/tube.hpp"

using namespace eqlab;
using dyn::Chart;
using dyn::ProjPoint;
using dyn::RationalMap;
using namespace eqlab::meas;

namespace {

RationalMap quadratic(double cre, double cim = 0.0) {
  return RationalMap::polynomial(mp::Poly::from_doubles({{cre, cim}, {0, 0}, {1, 0}}));
}

RationalMap rational_example() {
  // (z^2 - 1) / (z^2 + 1)
  return RationalMap(mp::Poly::from_doubles({{-1, 0}, {0, 0}, {1, 0}}),
                     mp::Poly::from_doubles({{1, 0}, {0, 0}, {1, 0}}));
}

ProjPoint pt(double re, double im = 0.0) { return ProjPoint::from_double({re, im}); }

}  // namespace

TEST_CASE("green function of the squaring map is log+ |z|") {
  RationalMap f = quadratic(0.0);
  GreenEvaluator g(f, 30);
  CHECK(g.log_plus_form());
  CHECK(g.error_constant() > 0);

  CHECK(g.value(pt(0)).value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.value(pt(0.7, 0.1)).value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.value(pt(2)).value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(g.value(pt(-3)).value == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(std::isinf(g.value(ProjPoint::infinity()).value));
  CHECK(g.value(ProjPoint::infinity()).error_bound == 0.0);

  // on the circle the value is 0 and the reported bound covers the truth
  GreenValue circ = g.value(pt(std::cos(1.0), std::sin(1.0)));
  CHECK(std::abs(circ.value) <= circ.error_bound + 1e-15);
}

TEST_CASE("green depth refinement stays within the reported error bound") {
  for (const RationalMap& f : {quadratic(-1.0), rational_example()}) {
    GreenEvaluator coarse(f, 8);
    GreenEvaluator fine(f, 40);
    Rng rng(71);
    for (int i = 0; i < 60; ++i) {
      std::complex<double> c(rng.uniform(-1, 1), rng.uniform(-1, 1));
      bool inf = rng.bits() & 1;
      double a = coarse.value_at(c, inf).value;
      double b = fine.value_at(c, inf).value;
      CHECK(std::abs(a - b) <= coarse.value_at(c, inf).error_bound + 1e-12);
    }
  }
}

TEST_CASE("green functional equation G(f(x)) = d G(x) for polynomials") {
  RationalMap f = quadratic(-1.0);
  GreenEvaluator g(f, 40);
  double bound = 3 * g.error_constant() * std::pow(2.0, -40) + 1e-11;
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    ProjPoint x = ProjPoint::from_double(
        {rng.uniform(-2, 2), rng.uniform(-2, 2)});
    ProjPoint fx = f.apply(x);
    if (fx.is_infinity()) continue;
    CHECK(std::abs(g.value(fx).value - 2 * g.value(x).value) <= bound);
  }
}

TEST_CASE("double lift application matches the exact map") {
  for (const RationalMap& f : {quadratic(-1.0), rational_example()}) {
    DoubleLift lift(f);
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
      std::complex<double> c(rng.uniform(-1, 1), rng.uniform(-1, 1));
      bool inf = rng.bits() & 1;
      auto [ic, iinf] = lift.apply_chart(c, inf);
      ProjPoint exact = f.apply(ProjPoint(inf ? Chart::infinity : Chart::finite,
                                          mp::BigComplex(c, 64)));
      CHECK(dyn::sph_dist_d(ic, iinf, exact.coord().to_complex(),
                            exact.chart() == Chart::infinity) <= 1e-12);
    }
  }
}

TEST_CASE("backward orbit of the squaring map lands on the unit circle") {
  RationalMap f = quadratic(0.0);
  MeasureSample s = sample_backward(f, pt(0.37, 0.11), 50, 4000, 99);
  REQUIRE(s.size() == 4000);
  CHECK(s.provenance == Provenance::backward_orbit);
  CHECK(s.total_mass == 1.0);
  double sw = 0;
  for (const Atom& a : s.atoms) {
    CHECK(std::abs(std::abs(a.affine()) - 1.0) <= 1e-10);
    sw += a.weight;
  }
  CHECK(sw == doctest::Approx(1.0).epsilon(1e-12));
  // equilibrium measure is uniform angle: first moments vanish
  CHECK(std::abs(s.mean([](const Atom& a) { return a.affine().real(); })) < 0.08);
  CHECK(std::abs(s.mean([](const Atom& a) { return (a.affine() * a.affine()).real(); })) < 0.08);
}

TEST_CASE("backward orbit of z^2 - 2 follows the arcsine law on [-2, 2]") {
  RationalMap f = quadratic(-2.0);
  MeasureSample s = sample_backward(f, pt(0.5), 50, 4000, 7);
  for (const Atom& a : s.atoms) {
    std::complex<double> z = a.affine();
    CHECK(std::abs(z.imag()) <= 1e-9);
    CHECK(std::abs(z.real()) <= 2 + 1e-9);
  }
  CHECK(std::abs(s.mean([](const Atom& a) { return a.affine().real(); })) < 0.12);
  double m2 = s.mean([](const Atom& a) { return std::norm(a.affine()); });
  CHECK(m2 == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("backward orbits replay bit-identically per seed") {
  RationalMap f = quadratic(-1.0);
  MeasureSample a = sample_backward(f, pt(0.2), 10, 200, 424242);
  MeasureSample b = sample_backward(f, pt(0.2), 10, 200, 424242);
  MeasureSample c = sample_backward(f, pt(0.2), 10, 200, 424243);
  CHECK(a.serialize() == b.serialize());
  CHECK(a.serialize() != c.serialize());
}

TEST_CASE("preimage tree enumerates all d^n preimages") {
  RationalMap f = quadratic(0.0);
  MeasureSample s = preimage_tree(f, pt(1), 2);
  REQUIRE(s.size() == 4);
  CHECK(s.total_mass == 1.0);
  CHECK(s.provenance == Provenance::preimage_tree);
  // fourth roots of unity, each with weight 1/4
  int found[4] = {0, 0, 0, 0};
  for (const Atom& a : s.atoms) {
    CHECK(a.weight == 0.25);
    std::complex<double> z = a.affine();
    for (int k = 0; k < 4; ++k)
      if (std::abs(z - std::polar(1.0, k * std::numbers::pi / 2)) < 1e-12) ++found[k];
  }
  for (int k = 0; k < 4; ++k) CHECK(found[k] == 1);

  MeasureSample root = preimage_tree(f, pt(0.25), 0);
  REQUIRE(root.size() == 1);
  CHECK(root.atoms[0].affine() == std::complex<double>(0.25, 0));

  CHECK_THROWS_AS(preimage_tree(f, pt(1), 21, 1 << 20), ValidationError);
}

TEST_CASE("exact measure draws have the right moments") {
  MeasureSample circ = exact_measure(ExactKind::circle, 20000, 11);
  CHECK(circ.provenance == Provenance::exact_circle);
  for (const Atom& a : circ.atoms) CHECK(std::abs(std::norm(a.affine()) - 1.0) <= 1e-12);
  CHECK(std::abs(circ.mean([](const Atom& a) { return a.affine().real(); })) < 0.03);

  MeasureSample arc = exact_measure(ExactKind::arcsine, 20000, 12);
  for (const Atom& a : arc.atoms) {
    CHECK(std::abs(a.affine().imag()) <= 1e-15);
    CHECK(std::abs(a.affine().real()) <= 2.0 + 1e-15);
  }
  CHECK(std::abs(arc.mean([](const Atom& a) { return a.affine().real(); })) < 0.06);
  CHECK(arc.mean([](const Atom& a) { return std::norm(a.affine()); }) ==
        doctest::Approx(2.0).epsilon(0.04));
}

TEST_CASE("reference nodes integrate low-degree moments exactly") {
  MeasureSample circ = reference_nodes(ExactKind::circle, 16);
  for (int k = 1; k < 16; ++k) {
    double re = circ.mean([k](const Atom& a) { return std::pow(a.affine(), k).real(); });
    double im = circ.mean([k](const Atom& a) { return std::pow(a.affine(), k).imag(); });
    CHECK(std::abs(re) <= 1e-13);
    CHECK(std::abs(im) <= 1e-13);
  }

  MeasureSample arc = reference_nodes(ExactKind::arcsine, 16);
  CHECK(std::abs(arc.mean([](const Atom& a) { return a.affine().real(); })) <= 1e-13);
  CHECK(arc.mean([](const Atom& a) { return std::norm(a.affine()); }) ==
        doctest::Approx(2.0).epsilon(1e-13));
  double m4 = arc.mean([](const Atom& a) { return std::pow(a.affine().real(), 4); });
  CHECK(m4 == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("julia membership for the squaring map") {
  RationalMap f = quadratic(0.0);
  JuliaClassifier cls(f, 1e-3);
  CHECK(cls.classify(pt(0)) == Membership::inside);
  CHECK(cls.classify(pt(0.3, 0.2)) == Membership::inside);
  CHECK(cls.classify(pt(2)) == Membership::outside);
  CHECK(cls.classify(pt(1.2)) == Membership::outside);
  CHECK(cls.classify(ProjPoint::infinity()) == Membership::outside);
  CHECK(cls.classify(pt(std::cos(0.7), std::sin(0.7))) == Membership::boundary_band);
  CHECK(cls.classify(pt(0.999 * std::cos(2.0), 0.999 * std::sin(2.0))) ==
        Membership::boundary_band);
  CHECK(julia_membership(f, pt(5, 5), 1e-3) == Membership::outside);
}

TEST_CASE("julia membership for the basilica") {
  RationalMap f = quadratic(-1.0);
  JuliaClassifier cls(f, 1e-3);
  // superattracting 2-cycle sits in the Fatou set
  CHECK(cls.classify(pt(0)) == Membership::inside);
  CHECK(cls.classify(pt(-1)) == Membership::inside);
  // both fixed points are repelling, hence on the small Julia set
  double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(cls.classify(pt(phi)) == Membership::boundary_band);
  CHECK(cls.classify(pt(1 - phi)) == Membership::boundary_band);
  CHECK(cls.classify(pt(3)) == Membership::outside);
}

TEST_CASE("julia membership fallback never reports inside") {
  // z -> (z^2 - 1)/(z^2 + 1) is not a polynomial, so classification comes
  // from tree proximity
  RationalMap f = rational_example();
  JuliaClassifier cls(f, 1e-3);
  Rng rng(3);
  for (int i = 0; i < 25; ++i) {
    std::complex<double> c(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(cls.classify_chart(c, rng.bits() & 1) != Membership::inside);
  }
}

TEST_CASE("tube mass around two circle points matches the arc-length value") {
  MeasureSample nodes = reference_nodes(ExactKind::circle, 20000);
  double eps = 0.01;
  TubeQuery q = tube_query_from_points({pt(1), pt(-1)}, eps);
  TubeMass m = tube_mass(nodes, q);
  // distance along the circle to 1 is half the angle, so the tube covers
  // angle 4*eps at each of the two points: mass 4*eps/pi
  double truth = 4 * eps / std::numbers::pi;
  CHECK(std::abs(m.estimate - truth) <= 3e-4);
  CHECK(m.half_width > 0);

  MeasureSample draws = exact_measure(ExactKind::circle, 20000, 31);
  TubeMass mi = tube_mass(draws, q);
  CHECK(std::abs(mi.estimate - truth) <= mi.half_width * 1.5 + 1e-6);
}

TEST_CASE("tube mass refuses degenerate queries") {
  MeasureSample nodes = reference_nodes(ExactKind::circle, 64);
  CHECK_THROWS_AS(tube_mass(nodes, tube_query_from_points({pt(1)}, 0.1)), ValidationError);
  CHECK_THROWS_AS(tube_mass(nodes, tube_query_from_points({pt(1), pt(-1)}, 0.0)),
                  ValidationError);
  MeasureSample empty;
  CHECK_THROWS_AS(tube_mass(empty, tube_query_from_points({pt(1), pt(-1)}, 0.1)),
                  ValidationError);
}

TEST_CASE("pushforward preserves the invariant measures") {
  RationalMap doubling = quadratic(0.0);
  MeasureSample circ = reference_nodes(ExactKind::circle, 1024);
  MeasureSample pushed = pushforward(doubling, circ);
  REQUIRE(pushed.size() == circ.size());
  CHECK(pushed.total_mass == circ.total_mass);
  for (int k = 1; k <= 5; ++k) {
    double re = pushed.mean([k](const Atom& a) { return std::pow(a.affine(), k).real(); });
    CHECK(std::abs(re) <= 1e-12);
  }

  RationalMap cheb = quadratic(-2.0);
  MeasureSample arc = reference_nodes(ExactKind::arcsine, 1024);
  MeasureSample arcp = pushforward(cheb, arc);
  CHECK(std::abs(arcp.mean([](const Atom& a) { return a.affine().real(); })) <= 1e-10);
  CHECK(arcp.mean([](const Atom& a) { return std::norm(a.affine()); }) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("product backward orbit samples both factors") {
  dyn::ProductMap pm(quadratic(0.0), quadratic(-2.0));
  ProductSample ps = product_backward(pm, pt(0.3, 0.1), pt(0.5), 50, 500, 2024);
  REQUIRE(ps.first.size() == 500);
  REQUIRE(ps.second.size() == 500);
  CHECK(ps.first.provenance == Provenance::product);
  for (const Atom& a : ps.first.atoms) CHECK(std::abs(std::abs(a.affine()) - 1) <= 1e-9);
  for (const Atom& a : ps.second.atoms) {
    CHECK(std::abs(a.affine().imag()) <= 1e-9);
    CHECK(std::abs(a.affine().real()) <= 2 + 1e-9);
  }
  // independent substreams: the two component chains differ
  CHECK(ps.first.serialize() != ps.second.serialize());

  TubeMass fm = fiber_tube_mass(ps, FiberAxis::second,
                                {Atom{{0.1, 0}, false, 0}, Atom{{-0.4, 0}, false, 0}}, 0.05);
  CHECK(fm.estimate >= 0);
  CHECK(fm.estimate <= 1);
}

TEST_CASE("moderateness fit recovers the circle growth exponent") {
  MeasureSample nodes = reference_nodes(ExactKind::circle, 4096);
  Atom h{std::polar(1.0, 0.3), false, 0};
  ModerateFit fit = moderateness_fit(nodes, h, {0.4, 0.2, 0.1, 0.05, 0.025});
  CHECK(fit.radii_used == 5);
  // mass(B(h, t)) = 2t/pi on the circle
  CHECK(fit.beta == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.a == doctest::Approx(2 / std::numbers::pi).epsilon(0.2));

  CHECK_THROWS_AS(moderateness_fit(nodes, h, {1e-7, 3e-8, 1e-8}), ValidationError);
}

TEST_CASE("measure samples serialize and round trip") {
  RationalMap f = quadratic(-1.0);
  MeasureSample s = sample_backward(f, pt(0.2, 0.1), 5, 100, 555);
  s.atoms.push_back(Atom{{0, 0}, true, 0.01});  // explicit point at infinity
  s.total_mass += 0.01;
  std::string text = s.serialize();
  MeasureSample back = MeasureSample::deserialize(text);
  REQUIRE(back.size() == s.size());
  CHECK(back.provenance == s.provenance);
  CHECK(back.rng_seed == s.rng_seed);
  CHECK(back.total_mass == s.total_mass);
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(atom_dist(back.atoms[i], s.atoms[i]) <= 1e-15);
    CHECK(back.atoms[i].weight == s.atoms[i].weight);
  }
  CHECK(back.atoms.back().inf_chart);
  CHECK(back.atoms.back().coord == std::complex<double>(0, 0));

  CHECK_THROWS_AS(MeasureSample::deserialize("0.5 0.5 0.1\n"), ValidationError);
  CHECK_THROWS_AS(MeasureSample::deserialize("# measure-sample v1\n# atoms: 2\n0 0 1\n"),
                  ValidationError);
}
