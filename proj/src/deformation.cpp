#include "gabor/deformation.hpp"

#include <cmath>

namespace gabor {

std::string to_string(LatticeMode m) {
  return m == LatticeMode::affine ? "affine" : "exact-nonlinear";
}

LatticeMode parse_lattice_mode(const std::string& s) {
  if (s == "affine") return LatticeMode::affine;
  if (s == "exact-nonlinear" || s == "exact_nonlinear" || s == "exact") {
    return LatticeMode::exact_nonlinear;
  }
  throw DomainError("unknown lattice mode '" + s + "'");
}

GaborSystem DeformationResult::system() const {
  return make_system(window, lattice, radius);
}

DeformationResult weak_deform(const GaborSystem& sys, const Hamiltonian& H, double t,
                              const DeformConfig& cfg) {
  const GaussianState& phi = sys.gaussian_window();
  if (H.dim() != sys.dim()) throw DimensionError("weak_deform: Hamiltonian dimension differs");
  const Method method = cfg.method.value_or(default_method(H));
  const PhasePoint zc = phi.center;

  DeformationResult out{phi, sys.points, Mat::Identity(zc.size(), zc.size()), zc, 0.0,
                        cfg.mode, sys.radius, sys.hbar};
  if (t == 0.0) return out;

  const Trajectory tr = integrate(H, zc, t, cfg.steps, method);
  out.S = tr.final_linear();
  out.z = tr.final_point();
  out.gamma = tr.final_gamma();

  GaussianState base{phi.M, PhasePoint::Zero(zc.size()), phi.phase, phi.hbar};
  GaussianState moved = heisenberg_weyl_apply(out.z, metaplectic_apply(out.S, base));
  moved.phase += out.gamma;
  out.window = std::move(moved);

  if (cfg.mode == LatticeMode::affine) {
    out.lattice = (out.S * (sys.points.colwise() - zc)).colwise() + out.z;
  } else {
    out.lattice.resize(sys.points.rows(), sys.points.cols());
    parallel_for(static_cast<std::size_t>(sys.size()), [&](std::size_t j) {
      const auto jj = static_cast<Index>(j);
      out.lattice.col(jj) = flow(H, sys.points.col(jj), 0.0, t, cfg.steps, method);
    });
  }
  return out;
}

SumPair invariance_check(const GaborSystem& sys, const DeformationResult& def,
                         const GaussianMixture& psi) {
  if (def.mode != LatticeMode::affine) {
    throw DomainError("invariance_check: the identity holds for the affine lattice mode only");
  }
  const PhasePoint zc = sys.gaussian_window().center;
  const GaussianMixture matched = heisenberg_weyl_apply(
      PhasePoint(2 * zc),
      metaplectic_apply(symplectic_inverse(def.S), heisenberg_weyl_apply(PhasePoint(-2 * def.z), psi)));
  return {frame_sum(def.system(), psi), frame_sum(sys, matched)};
}

SumPair invariance_check(const GaborSystem& sys, const Hamiltonian& H, double t,
                         const GaussianMixture& psi, const DeformConfig& cfg) {
  DeformConfig affine = cfg;
  affine.mode = LatticeMode::affine;
  return invariance_check(sys, weak_deform(sys, H, t, affine), psi);
}

std::vector<std::pair<double, FrameReport>> deform_sweep(const GaborSystem& sys,
                                                         const Hamiltonian& H,
                                                         const std::vector<double>& t_grid,
                                                         const DeformConfig& cfg,
                                                         const FrameConfig& frame_cfg) {
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("deform_sweep: time grid must increase");
  }
  DeformConfig affine = cfg;
  affine.mode = LatticeMode::affine;
  std::vector<std::pair<double, FrameReport>> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    out.emplace_back(t, frame_bounds(weak_deform(sys, H, t, affine).system(), frame_cfg));
  }
  return out;
}

SumPair gaussian_corollary_check(const SiegelMatrix& M, const GaborSystem& templ,
                                 const Hamiltonian& H, double t, const GaussianMixture& psi,
                                 const DeformConfig& cfg) {
  const GaussianState& tw = templ.gaussian_window();
  if (M.dim() != tw.dim()) throw DimensionError("gaussian_corollary_check: dimension mismatch");
  const Mat sm = siegel_to_symplectic(M);
  const GaussianState phi =
      heisenberg_weyl_apply(tw.center, metaplectic_apply(sm, standard_gaussian(M.dim(), tw.hbar)));
  if ((phi.M.matrix() - M.matrix()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, M.matrix().cwiseAbs().maxCoeff())) {
    throw NumericalDegeneracy("gaussian_corollary_check: reduction to iI failed");
  }
  return invariance_check(make_system(phi, templ.points, templ.radius), H, t, psi, cfg);
}

}  // namespace gabor
