#include "eqlab/projective.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "eqlab/errors.hpp"

namespace eqlab::dyn {

ProjPoint ProjPoint::from_affine(const BigComplex& z) {
  if (!z.is_finite()) return infinity(z.prec());
  if (z.abs2() <= BigFloat(1.0, z.prec()))
    return ProjPoint(Chart::finite, z);
  return ProjPoint(Chart::infinity, BigComplex::one(z.prec()) / z);
}

ProjPoint ProjPoint::from_pair(const BigComplex& z, const BigComplex& w) {
  if (z.is_zero() && w.is_zero())
    throw NumericalError("indeterminate homogeneous pair (0, 0)");
  if (z.abs2() <= w.abs2()) return ProjPoint(Chart::finite, z / w);
  return ProjPoint(Chart::infinity, w / z);
}

ProjPoint ProjPoint::from_double(std::complex<double> z, unsigned prec) {
  return from_affine(BigComplex(z, prec));
}

BigComplex ProjPoint::affine() const {
  if (chart_ == Chart::finite) return coord_;
  if (coord_.is_zero()) throw ValidationError("affine coordinate undefined at infinity");
  return BigComplex::one(prec()) / coord_;
}

std::complex<double> ProjPoint::affine_d() const {
  if (chart_ == Chart::finite) return coord_.to_complex();
  std::complex<double> c = coord_.to_complex();
  if (c == std::complex<double>(0.0, 0.0))
    return {std::numeric_limits<double>::infinity(), 0.0};
  return 1.0 / c;
}

void ProjPoint::sphere3(double out[3]) const {
  std::complex<double> z = coord_.to_complex();
  double n2 = std::norm(z);
  double denom = 1.0 + n2;
  double u1 = 2.0 * z.real() / denom, u2 = 2.0 * z.imag() / denom;
  double u3 = (n2 - 1.0) / denom;
  if (chart_ == Chart::finite) {
    out[0] = u1; out[1] = u2; out[2] = u3;
  } else {
    // swap roles of z and w: conjugate flip on the sphere
    out[0] = u1; out[1] = -u2; out[2] = -u3;
  }
}

std::string ProjPoint::serialize() const {
  return std::string(chart_ == Chart::finite ? "f " : "i ") + coord_.re.serialize() + " " +
         coord_.im.serialize();
}

ProjPoint ProjPoint::deserialize(const std::string& text) {
  if (text.size() < 2) throw ValidationError("corrupt point record");
  Chart c = text[0] == 'f' ? Chart::finite : Chart::infinity;
  auto sp = text.find(' ', 2);
  if (sp == std::string::npos) throw ValidationError("corrupt point record");
  return ProjPoint(c, BigComplex(BigFloat::deserialize(text.substr(2, sp - 2)),
                                 BigFloat::deserialize(text.substr(sp + 1))));
}

BigFloat sph_dist(const ProjPoint& a, const ProjPoint& b) {
  unsigned prec = std::max(a.prec(), b.prec());
  BigComplex az = mp::with_prec(a.hom_z(), prec), aw = mp::with_prec(a.hom_w(), prec);
  BigComplex bz = mp::with_prec(b.hom_z(), prec), bw = mp::with_prec(b.hom_w(), prec);
  BigComplex cross = az * bw - aw * bz;
  BigFloat n2 = (az.abs2() + aw.abs2()) * (bz.abs2() + bw.abs2());
  BigFloat ratio = cross.abs() / sqrt(n2);
  if (ratio > BigFloat(1.0, prec)) ratio = BigFloat(1.0, prec);
  BigFloat out(0.0, prec);
  mpfr_asin(out.raw(), ratio.raw(), MPFR_RNDN);
  return out;
}

double sph_dist_d(const ProjPoint& a, const ProjPoint& b) {
  return sph_dist(a, b).to_double();
}

double sph_dist_d(const std::complex<double>& a, bool a_inf, const std::complex<double>& b,
                  bool b_inf) {
  std::complex<double> az = a, aw = 1.0, bz = b, bw = 1.0;
  if (a_inf) std::swap(az, aw);
  if (b_inf) std::swap(bz, bw);
  double cross = std::abs(az * bw - aw * bz);
  double n = std::sqrt((std::norm(az) + std::norm(aw)) * (std::norm(bz) + std::norm(bw)));
  double r = cross / n;
  return std::asin(r > 1.0 ? 1.0 : r);
}

std::vector<size_t> dedup_indices(const std::vector<ProjPoint>& pts, double tol) {
  // coarse grid in R^3 at max(tol, 1e-12); exact confirmation below that
  double cell = std::max(tol, 1e-12) * 2.0;
  auto key = [cell](const double u[3], int dx, int dy, int dz) {
    auto q = [cell](double v, int d) {
      return static_cast<long long>(std::floor(v / cell)) + d;
    };
    long long a = q(u[0], dx), b = q(u[1], dy), c = q(u[2], dz);
    return (a * 73856093LL) ^ (b * 19349663LL) ^ (c * 83492791LL);
  };
  std::unordered_map<long long, std::vector<size_t>> grid;
  std::vector<size_t> kept;
  BigFloat big_tol(tol, 96);
  for (size_t i = 0; i < pts.size(); ++i) {
    double u[3];
    pts[i].sphere3(u);
    bool dup = false;
    for (int dx = -1; dx <= 1 && !dup; ++dx)
      for (int dy = -1; dy <= 1 && !dup; ++dy)
        for (int dz = -1; dz <= 1 && !dup; ++dz) {
          auto it = grid.find(key(u, dx, dy, dz));
          if (it == grid.end()) continue;
          for (size_t j : it->second) {
            // sphere3 is double, so anything below ~1e-12 needs the exact check
            double uj[3];
            pts[j].sphere3(uj);
            double coarse = std::sqrt((u[0] - uj[0]) * (u[0] - uj[0]) +
                                      (u[1] - uj[1]) * (u[1] - uj[1]) +
                                      (u[2] - uj[2]) * (u[2] - uj[2]));
            if (coarse > 4.0 * cell) continue;
            if (sph_dist(pts[i], pts[j]) <= big_tol) {
              dup = true;
              break;
            }
          }
        }
    if (!dup) {
      kept.push_back(i);
      grid[key(u, 0, 0, 0)].push_back(i);
    }
  }
  return kept;
}

}  // namespace eqlab::dyn
