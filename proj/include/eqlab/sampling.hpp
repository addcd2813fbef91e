#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "eqlab/maps.hpp"
#include "eqlab/rng.hpp"

namespace eqlab::meas {

using dyn::ProductMap;
using dyn::ProjPoint;
using dyn::RationalMap;

// Measure atom in canonical chart form: |coord| <= 1, inf_chart selects w/z.
// Double precision; exact points come from the solvers, atoms are where the
// integration happens.
struct Atom {
  std::complex<double> coord;
  bool inf_chart = false;
  double weight = 0;

  static Atom from_point(const ProjPoint& x, double weight);
  std::complex<double> affine() const;  // +inf re at the point at infinity
  ProjPoint point(unsigned prec = mp::kDefaultPrecision) const;
};

double atom_dist(const Atom& a, const Atom& b);

enum class Provenance {
  backward_orbit,
  preimage_tree,
  periodic_points,
  exact_circle,
  exact_arcsine,
  product,
};

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct MeasureSample {
  std::vector<Atom> atoms;
  double total_mass = 0;
  Provenance provenance = Provenance::backward_orbit;
  std::uint64_t rng_seed = 0;

  size_t size() const { return atoms.size(); }

  // weighted average of fn over the atoms, divided by total_mass
  template <typename F>
  double mean(F&& fn) const {
    double acc = 0, comp = 0;  // Kahan
    for (const Atom& a : atoms) {
      double term = fn(a) * a.weight - comp;
      double next = acc + term;
      comp = (next - acc) - term;
      acc = next;
    }
    return acc / total_mass;
  }

  // header lines then one atom per line "re im weight" in affine coordinates
  std::string serialize() const;
  static MeasureSample deserialize(const std::string& text);
};

// Random backward orbit: repeatedly pick one of the d preimages uniformly
// with multiplicity, discard burn_in steps, emit count atoms of weight
// 1/count.  Deterministic in rng_seed.
MeasureSample sample_backward(const RationalMap& map, const ProjPoint& seed, int burn_in,
                              int count, std::uint64_t rng_seed);

// All d^n preimages of a with multiplicity, uniform weight d^(-n);
// total_mass is 1 by construction.  Refuses when d^n exceeds atom_cap.
MeasureSample preimage_tree(const RationalMap& map, const ProjPoint& a, int n,
                            long long atom_cap = 1 << 20);

// i.i.d. draws: uniform on the unit circle, or arcsine on [-2, 2]
enum class ExactKind { circle, arcsine };
MeasureSample exact_measure(ExactKind kind, int count, std::uint64_t rng_seed);

// deterministic quadrature nodes for the same two measures: M-point trapezoid
// on the circle (exact for trigonometric degree < M), Chebyshev nodes with
// equal weights for arcsine (exact for polynomial degree < 2M)
MeasureSample reference_nodes(ExactKind kind, int count);

// image sample under one application of the map, same weights
MeasureSample pushforward(const RationalMap& map, const MeasureSample& sample);

// product-measure sample on P^1 x P^1 as a pair of component samples
struct ProductSample {
  MeasureSample first, second;
};

ProductSample product_backward(const ProductMap& map, const ProjPoint& seed_first,
                               const ProjPoint& seed_second, int burn_in, int count,
                               std::uint64_t rng_seed);

}  // namespace eqlab::meas
