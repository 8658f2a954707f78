#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "gabor/core.hpp"
#include "gabor/gaussian.hpp"
#include "gabor/lattice.hpp"
#include "gabor/sampled.hpp"

namespace gabor {

using Window = std::variant<GaussianState, SampledWindow>;

/// The hbar-Gabor system {T^hbar(z) window : z in points}.
struct GaborSystem {
  Window window;
  PointSet points;  ///< 2n x count
  double hbar = kHbarTF;
  double radius = 0.0;  ///< truncation radius the points came from

  Index dim() const;
  Index size() const { return points.cols(); }
  bool gaussian() const { return std::holds_alternative<GaussianState>(window); }
  const GaussianState& gaussian_window() const;
};

GaborSystem make_system(const Window& window, const Lattice& lattice);
GaborSystem make_system(const Window& window, const PointSet& points, double radius = -1.0);

/// |(psi | T^hbar(z) phi)|^2 for every z, in the order of sys.points.
Vec frame_terms(const GaborSystem& sys, const GaussianMixture& psi);
Vec frame_terms(const GaborSystem& sys, const SampledWindow& psi);

/// sum_z |(psi | T^hbar(z) phi)|^2. Closed form when window and psi are Gaussian,
/// quadrature on psi's grid otherwise.
double frame_sum(const GaborSystem& sys, const GaussianMixture& psi);
double frame_sum(const GaborSystem& sys, const SampledWindow& psi);

enum class BoundMethod { eig, test_vectors };
std::string to_string(BoundMethod m);
BoundMethod parse_bound_method(const std::string& s);

struct FrameConfig {
  double half_width = 10.0;   ///< L: sampling grid is [-L, L)^n
  Index grid_points = 1024;   ///< N per axis
  Index hermite_count = 128;  ///< oscillator eigenfunctions in the test family
  Index mixture_count = 32;   ///< random Gaussian mixtures in the test family
  std::uint64_t seed = 0;
  double frame_floor = 1e-3;
  BoundMethod method = BoundMethod::eig;
  double max_work = 4e9;  ///< cap on grid x lattice x family work

  /// Defaults with lengths scaled by sqrt(2 pi hbar).
  static FrameConfig defaults(double hbar);
  Grid grid(Index n) const { return Grid{n, grid_points, half_width}; }
};

/// Default lattice truncation radius 8 sqrt(2 pi hbar).
double default_radius(double hbar);

struct FrameReport {
  double a_est = 0.0;
  double b_est = 0.0;
  double ratio = std::numeric_limits<double>::infinity();  ///< b_est / a_est
  bool is_frame = false;
  BoundMethod method = BoundMethod::eig;
  double radius = 0.0;
  double half_width = 0.0;
  Index grid_points = 0;
  double residual_estimate = 0.0;
  Index lattice_size = 0;
  Index family_size = 0;
  Index family_rank = 0;
};

/// Test states for the lower bound: oscillator eigenfunctions at hbar followed by
/// seeded random Gaussian mixtures centred in [-L/4, L/4]^{2n} with M near iI.
CMat test_family(Index n, double hbar, const FrameConfig& cfg);

/// Frame-bound estimates. b_est is lambda_max of the Gram matrix over the truncated
/// lattice (eig) or the largest normalized frame sum over the family (test_vectors);
/// a_est is the minimum of frame_sum(psi)/|psi|^2 over the span of the test family
/// (eig) or over its members (test_vectors).
FrameReport frame_bounds(const GaborSystem& sys, const FrameConfig& cfg);

/// Per axis, alpha_j beta_j < 2 pi hbar.
std::vector<bool> gaussian_frame_criterion(const Vec& alpha, const Vec& beta, double hbar);

/// Two frame sums that must coincide.
struct SumPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation() const;  ///< |lhs - rhs| / max(1, |rhs|)
};

/// lhs: system (S^ phi, S Lambda) at psi. rhs: system (phi, Lambda) at S^{-1} psi.
SumPair covariance_check(const GaborSystem& sys, const Mat& S, const GaussianMixture& psi);

/// lhs: system (T(z0) phi, Lambda + z1) at psi. rhs: (phi, Lambda) at T(-(z0 + z1)) psi.
SumPair translation_check(const GaborSystem& sys, const PhasePoint& z0, const PhasePoint& z1,
                          const GaussianMixture& psi);

/// Change of Planck's constant: lhs is (phi^h, sqrt(h/h0) Lambda) at psi^h under hbar = h,
/// rhs is the original system (at h0 = sys.hbar) at psi.
SumPair rescaling_check(const GaborSystem& sys, double hbar, const GaussianMixture& psi);

/// Same window function read at hbar = h with lattice diag(I, (h/h0) I) Lambda, against
/// the original system.
SumPair planck_dilation_check(const GaborSystem& sys, double hbar, const GaussianMixture& psi);

}  // namespace gabor
