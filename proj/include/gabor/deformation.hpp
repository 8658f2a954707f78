#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gabor/frames.hpp"
#include "gabor/hamiltonian.hpp"
#include "gabor/integrators.hpp"

namespace gabor {

enum class LatticeMode { affine, exact_nonlinear };
std::string to_string(LatticeMode m);
LatticeMode parse_lattice_mode(const std::string& s);

struct DeformConfig {
  std::optional<Method> method;  ///< default_method(H) when empty
  Index steps = 1000;            ///< integration steps on [0, t]
  LatticeMode mode = LatticeMode::affine;
};

struct DeformationResult {
  GaussianState window;  ///< e^{i gamma/hbar} T(z_t) S_t^ phi
  PointSet lattice;
  Mat S;
  PhasePoint z;
  double gamma = 0.0;
  LatticeMode mode = LatticeMode::affine;
  double radius = 0.0;  ///< truncation radius of the source system
  double hbar = kHbarTF;

  GaborSystem system() const;
};

/// Transports the window along the trajectory of its center z_c: M -> alpha(S_t) M,
/// center -> z_t, phase += gamma(t, z_c). The lattice follows z -> z_t + S_t (z - z_c)
/// (affine) or the integrated flow (exact_nonlinear).
DeformationResult weak_deform(const GaborSystem& sys, const Hamiltonian& H, double t,
                              const DeformConfig& cfg = {});

/// lhs: frame sum of the deformed system (affine lattice) at psi. rhs: frame sum of the
/// original system at T(2 z_c) S_t^{-1} T(-2 z_t) psi, which matches it term by term.
SumPair invariance_check(const GaborSystem& sys, const Hamiltonian& H, double t,
                         const GaussianMixture& psi, const DeformConfig& cfg = {});

/// Same, reusing a computed deformation.
SumPair invariance_check(const GaborSystem& sys, const DeformationResult& def,
                         const GaussianMixture& psi);

/// Frame bounds of the deformed system along a monotone time grid.
std::vector<std::pair<double, FrameReport>> deform_sweep(const GaborSystem& sys,
                                                         const Hamiltonian& H,
                                                         const std::vector<double>& t_grid,
                                                         const DeformConfig& cfg,
                                                         const FrameConfig& frame_cfg);

/// Builds the window phi_M = S_M^ phi_0 (shifted to the template's window center) with
/// S_M from siegel_to_symplectic, then runs invariance_check on it.
SumPair gaussian_corollary_check(const SiegelMatrix& M, const GaborSystem& templ,
                                 const Hamiltonian& H, double t, const GaussianMixture& psi,
                                 const DeformConfig& cfg = {});

}  // namespace gabor
