#pragma once
#include <vector>

#include "eqlab/poly.hpp"

namespace eqlab::mp {

// Result of a certified simultaneous root solve.  Multiple roots come back as
// clusters (cluster_id shared, multiplicity = cluster size); members are
// reported individually, never merged.
struct RootSet {
  std::vector<BigComplex> roots;
  std::vector<double> residuals;      // |p(root)| / scale, post-certification
  std::vector<int> cluster_id;        // dense ids, 0-based
  std::vector<int> multiplicity;      // cluster size, repeated per member
  unsigned precision_used = 0;
  int sweeps = 0;

  int cluster_count() const;
};

struct RootOptions {
  unsigned precision = kDefaultPrecision;  // starting precision, doubled on failure
  unsigned max_precision = kMaxPrecision;
  int max_sweeps = 400;
};

// All roots of p by Aberth-Ehrlich simultaneous iteration from a circular
// initial configuration.  Exact zero roots (vanishing low-order coefficients)
// are stripped before iterating and re-attached.  Residual certification:
// |p(z_i)| <= 2^(-prec/2) * sum_j |c_j| |z_i|^j for every root; on failure the
// working precision doubles, up to max_precision, then NumericalError.
// The zero polynomial and constants are rejected (ValidationError), the zero
// polynomial with a distinct message.
RootSet poly_roots(const Poly& p, const RootOptions& opts = {});

}  // namespace eqlab::mp
