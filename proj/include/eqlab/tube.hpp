#pragma once
#include <vector>

#include "eqlab/sampling.hpp"

namespace eqlab::meas {

// Tube around a finite target set: the spherical epsilon-neighborhood of V.
// A degree-delta hypersurface at k=1 is delta points, so |V| >= 2.
struct TubeQuery {
  std::vector<Atom> targets;
  double radius = 0;
  double kappa = 0;  // reporting exponent, radius = delta^(-kappa) in the bound tests
};

TubeQuery tube_query_from_points(const std::vector<ProjPoint>& v, double radius,
                                 double kappa = 0);

struct TubeMass {
  double estimate = 0;   // weighted fraction of atoms within radius of V
  double half_width = 0; // 95% binomial confidence half-width
};

TubeMass tube_mass(const MeasureSample& sample, const TubeQuery& q);

// Product-map tubes around unions of horizontal/vertical fibers: the distance
// of (u, v) to the fiber through (x, .) is the component distance, so the
// mass factors through one component sample.
enum class FiberAxis { first, second };
TubeMass fiber_tube_mass(const ProductSample& sample, FiberAxis axis,
                         const std::vector<Atom>& through, double radius);

// Moderateness diagnostic: fit mass(B(h, t)) ~ A * t^beta over a radius
// ladder; a moderate measure gives finite A and beta > 0.  Radii with empty
// mass are skipped; fewer than 3 usable radii is a refusal.
struct ModerateFit {
  double a = 0;
  double beta = 0;
  int radii_used = 0;
};

ModerateFit moderateness_fit(const MeasureSample& sample, const Atom& h,
                             const std::vector<double>& radii);

}  // namespace eqlab::meas
