#pragma once

#include <string>
#include <vector>

#include "gabor/core.hpp"
#include "gabor/hamiltonian.hpp"
#include "gabor/symplectic.hpp"

namespace gabor {

/// Exact affine flow of H = 1/2 z^T M z + m.z from the exponential of the augmented
/// matrix (JM, Jm; 0, 0) t. Works for singular M.
AffineSymplectic quadratic_flow(const Mat& M, const Vec& m, double t);

/// p1 = p - grad V(x) dt, x1 = x + grad U(p1) dt.
PhasePoint symplectic_euler_step(const Hamiltonian& H, const PhasePoint& z, double dt);

/// Position Verlet. With `literal` set, the half steps carry no dt factor:
/// x' = x + 1/2 grad U(p), p1 = p - dt grad V(x'), x1 = x' + 1/2 grad U(p1).
/// The literal scheme is kept for comparison only.
PhasePoint verlet_step(const Hamiltonian& H, const PhasePoint& z, double dt, bool literal = false);

/// Classical fourth-order Runge-Kutta step of z' = J grad H(z, t).
PhasePoint rk4_step(const Hamiltonian& H, const PhasePoint& z, double t, double dt);

enum class Method { euler, verlet, verlet_literal, rk4, exact };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<Mat> linear;     ///< S_t, the linearized flow about the trajectory
  std::vector<double> gamma;   ///< integral of 1/2 sigma(z, z') - H along the path
  Method method = Method::rk4;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
  const PhasePoint& final_point() const { return points.back(); }
  const Mat& final_linear() const { return linear.back(); }
  double final_gamma() const { return gamma.back(); }
};

/// Points with non-finite entries or norm above this raise DivergenceError.
inline constexpr double kDivergenceGuard = 1e100;

/// Integrates from t0 to t_final in `steps` equal steps (dt may be negative).
/// euler/verlet need a separable H; exact needs an autonomous quadratic H.
/// S_t is integrated by RK4 on dS/dt = J D^2H(z_t, t) S without re-symplectification;
/// gamma uses Simpson's rule on each step.
Trajectory integrate(const Hamiltonian& H, const PhasePoint& z0, double t_final, Index steps,
                     Method method, double t0 = 0.0);

/// Fastest method with a correctness contract for H: exact, then verlet, then rk4.
Method default_method(const Hamiltonian& H);

/// Endpoint of the flow f_{t1, t0}(z).
PhasePoint flow(const Hamiltonian& H, const PhasePoint& z, double t0, double t1, Index steps,
                Method method);

/// |f_{t,t'} f_{t',t''}(z) - f_{t,t''}(z)| with each leg taking `steps` steps.
double groupoid_check(const Hamiltonian& H, double t, double t1, double t2, const PhasePoint& z,
                      Index steps, Method method);

struct SuspendedState {
  PhasePoint z;
  double t = 0.0;
};

/// (z', t') -> (f_{t+t', t'}(z'), t + t').
SuspendedState suspended_flow(const Hamiltonian& H, double t, const SuspendedState& s, Index steps,
                              Method method);

}  // namespace gabor
