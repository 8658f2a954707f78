#pragma once

#include <functional>
#include <optional>

#include "gabor/core.hpp"
#include "gabor/symplectic.hpp"

namespace gabor {

/// Separable lattice alpha Z^n x beta Z^n.
struct SeparableSpacing {
  Vec alpha;
  Vec beta;
};

/// The set {shift + G k : k in Z^{2n}} truncated to the Euclidean ball |z| <= radius.
struct Lattice {
  Mat generator;
  double radius = 0.0;
  Vec shift;  ///< empty means zero
  std::optional<SeparableSpacing> separable;

  Index dim() const { return generator.rows() / 2; }
  Vec offset() const { return shift.size() ? shift : Vec::Zero(generator.rows()); }
  void validate() const;
};

/// Lambda_{alpha beta} = alpha Z^n x beta Z^n.
Lattice separable_lattice(const Vec& alpha, const Vec& beta, double radius);

/// Caps on enumeration, guarding against accidental huge radii.
struct EnumerationLimits {
  double max_box = 5e7;     ///< index candidates inspected
  Index max_points = 2000000;
};

/// All lattice points with |z| <= R, once each, in lexicographic order of k.
PointSet lattice_points(const Lattice& lat, const EnumerationLimits& limits = {});

/// Image of the lattice under z -> S z + z0: generator S L, shift S shift + z0, same radius.
Lattice lattice_map(const Lattice& lat, const AffineSymplectic& g);

/// Lattice scaled by a positive factor (generator and shift), radius scaled alike.
Lattice lattice_scale(const Lattice& lat, double factor);

/// Explicit image of a point list under an arbitrary map; the result is no longer a lattice.
PointSet map_points(const PointSet& points, const std::function<PhasePoint(const PhasePoint&)>& f);
PointSet map_points(const PointSet& points, const AffineSymplectic& g);

/// D^hbar = diag(I, 2 pi hbar I).
Mat planck_dilation(Index n, double hbar);

}  // namespace gabor
