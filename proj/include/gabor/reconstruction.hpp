#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gabor/core.hpp"
#include "gabor/hamiltonian.hpp"
#include "gabor/integrators.hpp"

namespace gabor {

using LinearPath = std::function<Mat(double)>;

/// H(z) = 1/2 z^T K z generating a linear symplectic path at time t.
struct PathHamiltonian {
  Mat matrix;        ///< K = -J S'(t) S(t)^{-1}, symmetrized
  Mat block_matrix;  ///< K assembled blockwise from (A, B, C, D) and their derivatives
  Mat xx, xp, pp;    ///< blocks: 1/2 x.xx x + x.xp p + 1/2 p.pp p
  double asymmetry = 0.0;  ///< |K - K^T| before symmetrization
};

/// Derivatives of S by central differences with step h. Throws DomainError when
/// S(t) is not symplectic.
PathHamiltonian hamiltonian_from_linear_path(const LinearPath& S, double t, double h = 1e-5);

/// Same, with S'(t) supplied.
PathHamiltonian hamiltonian_from_linear_path(const Mat& S, const Mat& S_dot);

/// rotation, identity, shear (V_{tP}, P = param I), dilation (diag(e^{-t}, e^{t})^param).
LinearPath builtin_path(const std::string& name, Index n = 1, double param = 1.0);
std::vector<std::string> builtin_path_names();

/// (t, z) -> f_t(z) with f_0 the identity.
using Isotopy = std::function<PhasePoint(double, const PhasePoint&)>;

struct IsotopyOptions {
  Index nodes = 65;        ///< Simpson nodes on [0, 1] (odd)
  double h = 1e-5;         ///< time step for the derivative of f_t
  double tol = 1e-12;      ///< inverse residual target
  Index max_iter = 50;
};

/// Local inverse of f_t at y by damped Newton with finite-difference Jacobians.
/// Throws ConvergenceError carrying the residual.
PhasePoint isotopy_inverse(const Isotopy& f, double t, const PhasePoint& y,
                           const IsotopyOptions& opts = {});

/// H(z, t) = -int_0^1 z^T J X_t(lambda z) d lambda, X_t = (d/dt f_t) o f_t^{-1}.
double hamiltonian_from_isotopy(const Isotopy& f, double t, const PhasePoint& z,
                                const IsotopyOptions& opts = {});

/// How flows of H and K are computed when composing.
struct FlowOptions {
  Method method = Method::rk4;
  double steps_per_unit = 400.0;
  Index min_steps = 16;

  Index steps(double span) const;
};

/// H#K(z, t) = H(z, t) + K((f_t^H)^{-1} z, t).
double compose_hamiltonians(const Hamiltonian& H, const Hamiltonian& K, double t,
                            const PhasePoint& z, const FlowOptions& opts = {});
/// Hbar(z, t) = -H(f_t^H z, t).
double invert_hamiltonian(const Hamiltonian& H, double t, const PhasePoint& z,
                          const FlowOptions& opts = {});

/// The same as Hamiltonians (derivatives by finite differences), for integration.
Hamiltonian composed_hamiltonian(const Hamiltonian& H, const Hamiltonian& K,
                                 const FlowOptions& opts = {});
Hamiltonian inverted_hamiltonian(const Hamiltonian& H, const FlowOptions& opts = {});

/// K = U(p) + V(x - grad U(p) t), whose time-dt flow is one symplectic Euler step.
double modified_hamiltonian_K(const Field& U, const Field& V, const Vec& x, const Vec& p, double t);
Hamiltonian modified_hamiltonian(const Hamiltonian& separable);

}  // namespace gabor
