#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "doctest.h"
#include "eqlab/errors.hpp"
#include "eqlab/maps.hpp"
#include "eqlab/periodic.hpp"

using namespace eqlab;
using dyn::ProjPoint;
using dyn::RationalMap;
using namespace eqlab::per;

namespace {

RationalMap quadratic(double cre, double cim = 0.0) {
  return RationalMap::polynomial(mp::Poly::from_doubles({{cre, cim}, {0, 0}, {1, 0}}));
}

RationalMap rational_example() {
  // (z^2 - 1) / (z^2 + 1)
  return RationalMap(mp::Poly::from_doubles({{-1, 0}, {0, 0}, {1, 0}}),
                     mp::Poly::from_doubles({{1, 0}, {0, 0}, {1, 0}}));
}

const PeriodicPoint* nearest(const CycleSet& cs, std::complex<double> z) {
  const PeriodicPoint* best = nullptr;
  double bd = 1e18;
  for (const PeriodicPoint& p : cs.points) {
    if (p.location.is_infinity()) continue;
    double d = std::abs(p.location.affine_d() - z);
    if (d < bd) {
      bd = d;
      best = &p;
    }
  }
  REQUIRE(best != nullptr);
  REQUIRE(bd < 1e-9);
  return best;
}

const PeriodicPoint* at_infinity(const CycleSet& cs) {
  for (const PeriodicPoint& p : cs.points)
    if (p.location.is_infinity()) return &p;
  return nullptr;
}

double worst_residual(const CycleSet& cs) {
  double w = 0;
  for (const PeriodicPoint& p : cs.points) w = std::max(w, p.residual);
  return w;
}

}  // namespace

TEST_CASE("fixed points of the squaring map") {
  CycleSet cs = find_periodic(quadratic(0.0), 1);
  CHECK(cs.counts.with_multiplicity == 3);
  CHECK(cs.counts.distinct == 3);

  const PeriodicPoint* zero = nearest(cs, {0, 0});
  CHECK(zero->multiplier_modulus == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zero->classification == Classification::attracting);
  CHECK(zero->in_small_julia == Membership::inside);

  const PeriodicPoint* one = nearest(cs, {1, 0});
  CHECK(one->multiplier_modulus == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(one->classification == Classification::repelling);
  CHECK(one->in_small_julia == Membership::boundary_band);

  const PeriodicPoint* inf = at_infinity(cs);
  REQUIRE(inf != nullptr);
  CHECK(inf->classification == Classification::attracting);
  CHECK(inf->in_small_julia == Membership::outside);

  CHECK(worst_residual(cs) <= 1e-20);

  ExceptionalCounts e = count_exceptional(cs);
  CHECK(e.a_n == 2);
  CHECK(e.b_n == 2);
}

TEST_CASE("period three of the squaring map is the seventh roots of unity") {
  CycleSet cs = find_periodic(quadratic(0.0), 3);
  CHECK(cs.counts.with_multiplicity == 9);
  CHECK(cs.counts.distinct == 9);
  CHECK(cs.counts.repelling == 7);
  CHECK(cs.counts.attracting == 2);
  CHECK(cs.counts.indifferent == 0);

  int on_circle = 0;
  for (const PeriodicPoint& p : cs.points) {
    if (p.location.is_infinity()) continue;
    std::complex<double> z = p.location.affine_d();
    if (std::abs(z) < 0.5) continue;  // the origin
    ++on_circle;
    CHECK(std::abs(std::pow(z, 7) - 1.0) < 1e-12);
    CHECK(p.multiplier_modulus == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(p.in_small_julia == Membership::boundary_band);
  }
  CHECK(on_circle == 7);
  CHECK(worst_residual(cs) <= 1e-20);
}

TEST_CASE("basilica fixed points carry the golden-ratio multipliers") {
  double phi = (1 + std::sqrt(5.0)) / 2;
  CycleSet cs = find_periodic(quadratic(-1.0), 1);
  CHECK(cs.counts.with_multiplicity == 3);

  const PeriodicPoint* a = nearest(cs, {phi, 0});
  CHECK(a->multiplier_modulus == doctest::Approx(1 + std::sqrt(5.0)).epsilon(1e-12));
  CHECK(a->classification == Classification::repelling);
  CHECK(a->in_small_julia == Membership::boundary_band);

  const PeriodicPoint* b = nearest(cs, {1 - phi, 0});
  CHECK(b->multiplier_modulus == doctest::Approx(std::sqrt(5.0) - 1).epsilon(1e-12));
  CHECK(b->classification == Classification::repelling);

  ExceptionalCounts e = count_exceptional(cs);
  CHECK(e.a_n == 1);  // only infinity
  CHECK(e.b_n == 1);
}

TEST_CASE("superattracting two-cycle of the basilica") {
  RationalMap f = quadratic(-1.0);
  CycleSet p1 = find_periodic(f, 1);
  CycleSet p2 = find_periodic(f, 2);
  CHECK(p2.counts.with_multiplicity == 5);

  const PeriodicPoint* zero = nearest(p2, {0, 0});
  CHECK(zero->multiplier_modulus == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zero->in_small_julia == Membership::inside);
  const PeriodicPoint* minus = nearest(p2, {-1, 0});
  CHECK(minus->multiplier_modulus == doctest::Approx(0.0).epsilon(1e-12));

  ExceptionalCounts e = count_exceptional(p2);
  CHECK(e.a_n == 3);
  CHECK(e.b_n == 3);

  // every fixed point persists as a period-two point
  for (const PeriodicPoint& p : p1.points) {
    double best = 1e18;
    for (const PeriodicPoint& q : p2.points)
      best = std::min(best, dyn::sph_dist_d(p.location, q.location));
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("minimal period sieve separates the two-cycle from fixed points") {
  RationalMap f = quadratic(0.0);
  std::map<int, CycleSet> lower;
  lower.emplace(1, find_periodic(f, 1));
  CycleSet p2 = minimal_periods(find_periodic(f, 2), lower);

  int min2 = 0, min1 = 0;
  for (const PeriodicPoint& p : p2.points) {
    if (p.minimal_period == 2) {
      ++min2;
      std::complex<double> z = p.location.affine_d();
      CHECK(std::abs(z * z + z + 1.0) < 1e-12);  // primitive cube roots of unity
    } else {
      CHECK(p.minimal_period == 1);
      ++min1;
    }
  }
  CHECK(min2 == 2);
  CHECK(min1 == 3);

  std::map<int, CycleSet> empty;
  CHECK_THROWS_AS(minimal_periods(p2, empty), ValidationError);
}

TEST_CASE("repelling filter keeps the circle and drops the attractors") {
  CycleSet p4 = find_periodic(quadratic(0.0), 4);
  CHECK(p4.counts.with_multiplicity == 17);

  CycleSet kept = filter_repelling_gamma(p4, 0.5);
  CHECK(kept.counts.distinct == 15);
  for (const PeriodicPoint& p : kept.points) {
    CHECK(p.classification == Classification::repelling);
    CHECK(p.in_small_julia == Membership::boundary_band);
    CHECK(p.multiplier_modulus == doctest::Approx(16.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(filter_repelling_gamma(p4, 0.0), ValidationError);
  CHECK_THROWS_AS(filter_repelling_gamma(p4, 1.0), ValidationError);
}

TEST_CASE("parabolic fixed point comes back as a double root") {
  CycleSet cs = find_periodic(quadratic(0.25), 1);
  CHECK(cs.counts.with_multiplicity == 3);
  CHECK(cs.counts.distinct == 2);

  const PeriodicPoint* half = nearest(cs, {0.5, 0});
  CHECK(half->multiplicity == 2);
  CHECK(half->multiplier_modulus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(half->classification == Classification::indifferent);
  CHECK(half->residual <= 1e-20);

  ExceptionalCounts e = count_exceptional(cs);
  CHECK(e.a_n == 3);
}

TEST_CASE("rational map fixed points avoid infinity") {
  RationalMap f = rational_example();
  CycleSet p1 = find_periodic(f, 1);
  CHECK(p1.counts.with_multiplicity == 3);
  for (const PeriodicPoint& p : p1.points) {
    CHECK_FALSE(p.location.is_infinity());
    CHECK(p.residual <= 1e-20);
  }

  CycleSet p2 = find_periodic(f, 2);
  CHECK(p2.counts.with_multiplicity == 5);
  CHECK(worst_residual(p2) <= 1e-20);

  CHECK_THROWS_AS(find_periodic(f, 2, Backend::newton_seeded), ValidationError);
}

TEST_CASE("solver backends agree to cross-check tolerance") {
  for (double c : {0.0, -1.0, 0.3}) {
    RationalMap f = quadratic(c, c == 0.3 ? 0.1 : 0.0);
    CycleSet a = find_periodic(f, 5, Backend::expand);
    CycleSet b = find_periodic(f, 5, Backend::newton_seeded);
    CHECK(cycle_set_distance(a, b) <= 1e-15);
    CHECK_NOTHROW(find_periodic(f, 4, Backend::cross_check));
  }
}

TEST_CASE("cycle set distance flags count mismatches") {
  RationalMap f = quadratic(0.0);
  CycleSet p1 = find_periodic(f, 1);
  CHECK(cycle_set_distance(p1, p1) == 0.0);
  CHECK(std::isinf(cycle_set_distance(p1, find_periodic(f, 2))));
}

TEST_CASE("cardinality matches the degree count") {
  RationalMap f = quadratic(0.3, 0.2);
  long long expect = 2;
  for (int n = 1; n <= 6; ++n) {
    expect *= 2;
    CycleSet cs = find_periodic(f, n);
    CHECK(cs.counts.with_multiplicity == expect / 2 + 1);
    CHECK(worst_residual(cs) <= 1e-20);
  }
}

TEST_CASE("product counts multiply and exceptional pairs add up") {
  dyn::ProductMap f(quadratic(0.0), quadratic(-1.0));
  ProductCycleSet pcs = find_periodic_product(f, 2);
  CHECK(pcs.with_multiplicity == 25);

  // first factor: 3 repelling on circle; second: 2 repelling on the basilica
  ExceptionalCounts e = count_exceptional_product(pcs);
  CHECK(e.a_n == 25 - 3 * 2);
  CHECK(e.b_n == 25 - 3 * 2);
}

TEST_CASE("nonrepelling cycle count stays within the critical-point budget") {
  CHECK(nonrepelling_cycle_count(quadratic(0.0), 4) == 2);   // origin and infinity
  CHECK(nonrepelling_cycle_count(quadratic(-1.0), 4) == 2);  // two-cycle and infinity
  CHECK(nonrepelling_cycle_count(quadratic(0.3, 0.2), 4) <= 2);
}

TEST_CASE("csv report shape") {
  CycleSet cs = find_periodic(quadratic(0.0), 2);
  std::string csv = cycle_csv(cs);
  CHECK(csv.rfind("re,im,chart,period,minimal_period,multiplier_modulus,class,julia_flag,"
                  "multiplicity,residual\n",
                  0) == 0);
  size_t rows = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(rows == cs.points.size() + 1);
  size_t first_row = csv.find('\n') + 1;
  size_t second_row = csv.find('\n', first_row);
  std::string row = csv.substr(first_row, second_row - first_row);
  CHECK(std::count(row.begin(), row.end(), ',') == 9);
}

TEST_CASE("periodic solver refusals") {
  CHECK_THROWS_AS(find_periodic(quadratic(0.0), 0), ValidationError);
  CHECK_THROWS_AS(find_periodic(quadratic(0.0), 13, Backend::expand), ValidationError);
  RationalMap moebius(mp::Poly::from_doubles({{1, 0}, {1, 0}}),
                      mp::Poly::from_doubles({{1, 0}}));
  CHECK_THROWS_AS(find_periodic(moebius, 1), ValidationError);
}
