#include "gabor/lattice.hpp"

#include <cmath>
#include <vector>

namespace gabor {

void Lattice::validate() const {
  if (generator.rows() != generator.cols() || generator.rows() == 0 ||
      generator.rows() % 2 != 0) {
    throw DimensionError("lattice: generator must be 2n x 2n");
  }
  if (shift.size() != 0 && shift.size() != generator.rows()) {
    throw DimensionError("lattice: shift length must match generator");
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("lattice: truncation radius must be finite and non-negative");
  }
  if (std::abs(generator.determinant()) < 1e-300) {
    throw DomainError("lattice: generator must be invertible");
  }
}

Lattice separable_lattice(const Vec& alpha, const Vec& beta, double radius) {
  if (alpha.size() != beta.size() || alpha.size() == 0) {
    throw DimensionError("separable_lattice: alpha and beta must share a positive length");
  }
  if ((alpha.array() <= 0).any() || (beta.array() <= 0).any()) {
    throw DomainError("separable_lattice: spacings must be positive");
  }
  const Index n = alpha.size();
  Vec diag(2 * n);
  diag << alpha, beta;
  Lattice lat{diag.asDiagonal(), radius, Vec::Zero(2 * n), SeparableSpacing{alpha, beta}};
  lat.validate();
  return lat;
}

PointSet lattice_points(const Lattice& lat, const EnumerationLimits& limits) {
  lat.validate();
  const Index d = lat.generator.rows();
  const Vec off = lat.offset();
  const Mat ginv = lat.generator.inverse();
  // k = G^{-1}(z - shift) with |z| <= R, so |k_i| <= |row_i(G^{-1})| (R + |shift|) bounds
  // box i; the tighter bound uses the center G^{-1}(-shift).
  const Vec center = -ginv * off;
  std::vector<long> lo(d), hi(d);
  double box = 1.0;
  for (Index i = 0; i < d; ++i) {
    const double reach = ginv.row(i).norm() * lat.radius;
    lo[i] = static_cast<long>(std::floor(center(i) - reach - 1e-9));
    hi[i] = static_cast<long>(std::ceil(center(i) + reach + 1e-9));
    box *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (box > limits.max_box) {
    throw ResourceError("lattice_points: enumeration box of " + std::to_string(box) +
                        " candidates exceeds cap; reduce the truncation radius");
  }
  const double r2 = lat.radius * lat.radius * (1 + 1e-12) + 1e-24;
  std::vector<long> k(lo);
  std::vector<Vec> found;
  Vec kv(d);
  while (true) {
    for (Index i = 0; i < d; ++i) kv(i) = static_cast<double>(k[i]);
    Vec z = lat.generator * kv + off;
    if (z.squaredNorm() <= r2) {
      found.push_back(std::move(z));
      if (static_cast<Index>(found.size()) > limits.max_points) {
        throw ResourceError("lattice_points: point count exceeds cap");
      }
    }
    // odometer with the last index fastest: lexicographic order in k
    Index i = d - 1;
    while (i >= 0 && k[i] == hi[i]) {
      k[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  PointSet out(d, static_cast<Index>(found.size()));
  for (Index c = 0; c < out.cols(); ++c) out.col(c) = found[c];
  return out;
}

Lattice lattice_map(const Lattice& lat, const AffineSymplectic& g) {
  lat.validate();
  if (g.linear.rows() != lat.generator.rows()) {
    throw DimensionError("lattice_map: dimension mismatch");
  }
  Lattice out{g.linear * lat.generator, lat.radius, g.linear * lat.offset() + g.shift,
              std::nullopt};
  const bool diagonal = (g.linear - Mat(g.linear.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (lat.separable && diagonal && g.shift.isZero(0.0)) {
    const Index n = lat.dim();
    const Vec dg = g.linear.diagonal().cwiseAbs();
    out.separable = SeparableSpacing{lat.separable->alpha.cwiseProduct(dg.head(n)),
                                     lat.separable->beta.cwiseProduct(dg.tail(n))};
  }
  return out;
}

Lattice lattice_scale(const Lattice& lat, double factor) {
  if (!(factor > 0)) throw DomainError("lattice_scale: factor must be positive");
  Lattice out{factor * lat.generator, factor * lat.radius, factor * lat.offset(), std::nullopt};
  if (lat.separable) {
    out.separable = SeparableSpacing{factor * lat.separable->alpha, factor * lat.separable->beta};
  }
  return out;
}

PointSet map_points(const PointSet& points,
                    const std::function<PhasePoint(const PhasePoint&)>& f) {
  PointSet out(points.rows(), points.cols());
  parallel_for(static_cast<std::size_t>(points.cols()), [&](std::size_t c) {
    PhasePoint image = f(points.col(static_cast<Index>(c)));
    if (image.size() != points.rows()) throw DimensionError("map_points: map changed dimension");
    out.col(static_cast<Index>(c)) = image;
  });
  return out;
}

PointSet map_points(const PointSet& points, const AffineSymplectic& g) {
  return (g.linear * points).colwise() + g.shift;
}

Mat planck_dilation(Index n, double hbar) {
  Vec d(2 * n);
  d << Vec::Ones(n), Vec::Constant(n, 2 * kPi * hbar);
  return d.asDiagonal();
}

}  // namespace gabor
