#include "eqlab/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>

#include "eqlab/errors.hpp"
#include "eqlab/green.hpp"

namespace eqlab::meas {

Atom Atom::from_point(const ProjPoint& x, double weight) {
  std::complex<double> c = x.coord().to_complex();
  return {c, x.chart() == dyn::Chart::infinity, weight};
}

std::complex<double> Atom::affine() const {
  if (!inf_chart) return coord;
  if (coord == std::complex<double>(0, 0))
    return {std::numeric_limits<double>::infinity(), 0};
  return std::complex<double>(1, 0) / coord;
}

ProjPoint Atom::point(unsigned prec) const {
  return ProjPoint(inf_chart ? dyn::Chart::infinity : dyn::Chart::finite,
                   mp::BigComplex(coord, prec));
}

double atom_dist(const Atom& a, const Atom& b) {
  return dyn::sph_dist_d(a.coord, a.inf_chart, b.coord, b.inf_chart);
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::backward_orbit: return "backward-orbit";
    case Provenance::preimage_tree: return "preimage-tree";
    case Provenance::periodic_points: return "periodic-points";
    case Provenance::exact_circle: return "exact-circle";
    case Provenance::exact_arcsine: return "exact-arcsine";
    case Provenance::product: return "product";
  }
  throw ValidationError("unknown provenance");
}

Provenance provenance_from_name(const std::string& name) {
  for (Provenance p : {Provenance::backward_orbit, Provenance::preimage_tree,
                       Provenance::periodic_points, Provenance::exact_circle,
                       Provenance::exact_arcsine, Provenance::product})
    if (provenance_name(p) == name) return p;
  throw ValidationError("unknown provenance name: " + name);
}

std::string MeasureSample::serialize() const {
  std::string out;
  out.reserve(64 * atoms.size() + 160);
  char line[160];
  std::snprintf(line, sizeof line,
                "# measure-sample v1\n# provenance: %s\n# rng-seed: %llu\n"
                "# total-mass: %.17g\n# atoms: %zu\n",
                provenance_name(provenance).c_str(),
                static_cast<unsigned long long>(rng_seed), total_mass, atoms.size());
  out += line;
  for (const Atom& a : atoms) {
    std::complex<double> z = a.affine();
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", z.real(), z.imag(), a.weight);
    out += line;
  }
  return out;
}

MeasureSample MeasureSample::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MeasureSample s;
  size_t expected = 0;
  bool versioned = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("measure-sample v1") != std::string::npos) versioned = true;
      auto kv = [&](const char* key) -> const char* {
        size_t p = line.find(key);
        return p == std::string::npos ? nullptr : line.c_str() + p + std::strlen(key);
      };
      if (const char* v = kv("provenance: ")) s.provenance = provenance_from_name(v);
      if (const char* v = kv("rng-seed: ")) s.rng_seed = std::strtoull(v, nullptr, 10);
      if (const char* v = kv("total-mass: ")) s.total_mass = std::strtod(v, nullptr);
      if (const char* v = kv("atoms: ")) expected = std::strtoull(v, nullptr, 10);
      continue;
    }
    const char* c = line.c_str();
    char* end = nullptr;
    double re = std::strtod(c, &end);
    double im = std::strtod(end, &end);
    double w = std::strtod(end, &end);
    if (end == c || !std::isfinite(w))
      throw ValidationError("bad atom line in measure sample: " + line);
    Atom a;
    if (!std::isfinite(re) || !std::isfinite(im)) {
      a = {{0, 0}, true, w};
    } else {
      std::complex<double> z(re, im);
      a = std::norm(z) <= 1.0 ? Atom{z, false, w}
                              : Atom{std::complex<double>(1, 0) / z, true, w};
    }
    s.atoms.push_back(a);
  }
  if (!versioned) throw ValidationError("measure sample text lacks the v1 header");
  if (expected != s.atoms.size())
    throw ValidationError("measure sample atom count mismatch");
  return s;
}

MeasureSample sample_backward(const RationalMap& map, const ProjPoint& seed, int burn_in,
                              int count, std::uint64_t rng_seed) {
  if (!map.is_dynamical()) throw ValidationError("backward orbit needs degree at least 2");
  if (burn_in < 0 || count < 1) throw ValidationError("backward orbit needs burn_in >= 0, count >= 1");
  Rng rng(rng_seed);
  MeasureSample s;
  s.provenance = Provenance::backward_orbit;
  s.rng_seed = rng_seed;
  s.atoms.reserve(static_cast<size_t>(count));
  double w = 1.0 / count;
  ProjPoint cur = seed;
  for (int step = 0; step < burn_in + count; ++step) {
    std::vector<ProjPoint> pre = map.preimages(cur);
    cur = pre[rng.index(pre.size())];
    if (step >= burn_in) s.atoms.push_back(Atom::from_point(cur, w));
  }
  s.total_mass = 1.0;
  return s;
}

MeasureSample preimage_tree(const RationalMap& map, const ProjPoint& a, int n,
                            long long atom_cap) {
  if (!map.is_dynamical()) throw ValidationError("preimage tree needs degree at least 2");
  if (n < 0) throw ValidationError("preimage tree depth must be nonnegative");
  long long atoms_needed = 1;
  for (int j = 0; j < n; ++j) {
    if (atoms_needed > atom_cap / map.degree())
      throw ValidationError("preimage tree of depth " + std::to_string(n) +
                            " exceeds the atom cap " + std::to_string(atom_cap));
    atoms_needed *= map.degree();
  }
  MeasureSample s;
  s.provenance = Provenance::preimage_tree;
  s.rng_seed = 0;
  s.atoms.reserve(static_cast<size_t>(atoms_needed));
  double w = 1.0 / static_cast<double>(atoms_needed);
  // depth-first, so memory stays at n*d points instead of d^n
  std::vector<std::pair<ProjPoint, int>> stack;
  stack.emplace_back(a, 0);
  while (!stack.empty()) {
    auto [x, dep] = stack.back();
    stack.pop_back();
    if (dep == n) {
      s.atoms.push_back(Atom::from_point(x, w));
      continue;
    }
    for (ProjPoint& p : map.preimages(x)) stack.emplace_back(std::move(p), dep + 1);
  }
  s.total_mass = 1.0;
  return s;
}

MeasureSample exact_measure(ExactKind kind, int count, std::uint64_t rng_seed) {
  if (count < 1) throw ValidationError("exact measure needs count >= 1");
  Rng rng(rng_seed);
  MeasureSample s;
  s.provenance = kind == ExactKind::circle ? Provenance::exact_circle : Provenance::exact_arcsine;
  s.rng_seed = rng_seed;
  s.atoms.reserve(static_cast<size_t>(count));
  double w = 1.0 / count;
  for (int i = 0; i < count; ++i) {
    double u = rng.uniform();
    if (kind == ExactKind::circle) {
      s.atoms.push_back({std::polar(1.0, 2 * std::numbers::pi * u), false, w});
    } else {
      double x = 2 * std::cos(2 * std::numbers::pi * u);
      bool inf = std::abs(x) > 1;
      s.atoms.push_back({{inf ? 1 / x : x, 0.0}, inf, w});
    }
  }
  s.total_mass = 1.0;
  return s;
}

MeasureSample reference_nodes(ExactKind kind, int count) {
  if (count < 1) throw ValidationError("reference nodes need count >= 1");
  MeasureSample s;
  s.provenance = kind == ExactKind::circle ? Provenance::exact_circle : Provenance::exact_arcsine;
  s.rng_seed = 0;
  s.atoms.reserve(static_cast<size_t>(count));
  double w = 1.0 / count;
  for (int j = 0; j < count; ++j) {
    if (kind == ExactKind::circle) {
      s.atoms.push_back({std::polar(1.0, 2 * std::numbers::pi * j / count), false, w});
    } else {
      double x = 2 * std::cos(std::numbers::pi * (2 * j + 1) / (2 * count));
      bool inf = std::abs(x) > 1;
      s.atoms.push_back({{inf ? 1 / x : x, 0.0}, inf, w});
    }
  }
  s.total_mass = 1.0;
  return s;
}

MeasureSample pushforward(const RationalMap& map, const MeasureSample& sample) {
  DoubleLift lift(map);
  MeasureSample out;
  out.provenance = sample.provenance;
  out.rng_seed = sample.rng_seed;
  out.total_mass = sample.total_mass;
  out.atoms.reserve(sample.atoms.size());
  for (const Atom& a : sample.atoms) {
    auto [c, inf] = lift.apply_chart(a.coord, a.inf_chart);
    out.atoms.push_back({c, inf, a.weight});
  }
  return out;
}

ProductSample product_backward(const ProductMap& map, const ProjPoint& seed_first,
                               const ProjPoint& seed_second, int burn_in, int count,
                               std::uint64_t rng_seed) {
  ProductSample ps;
  ps.first = sample_backward(map.first(), seed_first, burn_in, count,
                             derive_seed(rng_seed, "product-first"));
  ps.second = sample_backward(map.second(), seed_second, burn_in, count,
                              derive_seed(rng_seed, "product-second"));
  ps.first.provenance = Provenance::product;
  ps.second.provenance = Provenance::product;
  ps.first.rng_seed = rng_seed;
  ps.second.rng_seed = rng_seed;
  return ps;
}

}  // namespace eqlab::meas
