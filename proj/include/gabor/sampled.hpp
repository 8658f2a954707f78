#pragma once

#include "gabor/core.hpp"
#include "gabor/gaussian.hpp"
#include "gabor/symplectic.hpp"

namespace gabor {

/// Tensor grid over [-L, L)^n with N points per axis, x_j = -L + j h, h = 2L/N.
/// Flattened with the last axis fastest.
struct Grid {
  Index n = 1;
  Index points = 1024;
  double half_width = 10.0;

  double spacing() const { return 2.0 * half_width / static_cast<double>(points); }
  Index size() const;
  double weight() const;  ///< quadrature weight h^n
  Vec point(Index flat) const;
  /// Coordinate matrix, n x size().
  Mat coordinates() const;
  void validate() const;

  bool operator==(const Grid&) const = default;
};

/// Window values on a grid, for quadrature-based oracles.
struct SampledWindow {
  Grid grid;
  CVec values;
  double hbar = kHbarTF;
  /// Largest distance between requested and applied shifts (shifts snap to the grid).
  double shift_residual = 0.0;

  double norm() const;
  SampledWindow normalized() const;
};

SampledWindow sample(const GaussianState& g, const Grid& grid);
SampledWindow sample(const GaussianMixture& g, const Grid& grid);

/// h^n sum a conj(b); grids must match.
cplx inner_product(const SampledWindow& a, const SampledWindow& b);

/// T^hbar(z0) by the pointwise formula with the translation snapped to the nearest
/// grid multiple (periodic wrap); the discrepancy is accumulated in shift_residual.
SampledWindow heisenberg_weyl_apply(const PhasePoint& z0, const SampledWindow& w);

/// Max-abs entry of (P, L, Q); enters the oscillation-resolution bound.
double generating_function_scale(const GeneratingFunctionData& data);

/// Direct O(N^2) quadrature of
///   (2 pi i hbar)^{-1/2} i^m sqrt|det L| int exp(i W(x,x')/hbar) psi(x') dx'   (n = 1).
/// Requires N >= 4 L^2 scale / (pi hbar).
SampledWindow quadratic_fourier_apply(const GeneratingFunctionData& data,
                                      const SampledWindow& w, double hbar);

/// V_phi psi(z) = int e^{-2 pi i p.x'} psi(x') conj(phi(x' - x)) dx' by quadrature, with
/// x snapped to the grid. In terms of Heisenberg-Weyl operators at hbar = 1/2pi,
/// V_phi psi(z) = e^{-i pi p.x} (psi | T(z) phi).
cplx stft(const SampledWindow& psi, const SampledWindow& window, const PhasePoint& z);

/// Orthonormal Hermite functions of the oscillator at hbar, tensor products in graded
/// order of total degree for n > 1. Column k holds the k-th function on the grid.
Mat hermite_functions(const Grid& grid, double hbar, Index count);

}  // namespace gabor
