#include "gabor/integrators.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace gabor {

namespace {

const Hamiltonian::Separable& require_separable(const Hamiltonian& H, const char* who) {
  if (!H.separable_data()) {
    throw DomainError(std::string(who) + ": Hamiltonian is not separable");
  }
  return *H.separable_data();
}

void guard(const PhasePoint& z, double t) {
  if (!z.allFinite() || z.norm() > kDivergenceGuard) {
    throw DivergenceError("trajectory diverged near t = " + std::to_string(t));
  }
}

// J v for v = (a, b): (b, -a).
Vec apply_J(const Vec& v) {
  const Index n = v.size() / 2;
  Vec out(v.size());
  out << v.tail(n), -v.head(n);
  return out;
}

Mat apply_J(const Mat& m) {
  const Index n = m.rows() / 2;
  Mat out(m.rows(), m.cols());
  out.topRows(n) = m.bottomRows(n);
  out.bottomRows(n) = -m.topRows(n);
  return out;
}

double action_density(const Hamiltonian& H, const PhasePoint& z, double t) {
  return 0.5 * symplectic_form(z, H.vector_field(z, t)) - H.value(z, t);
}

// One z-only step for the symplectic and reference methods.
PhasePoint step_point(const Hamiltonian& H, const PhasePoint& z, double t, double dt, Method m) {
  switch (m) {
    case Method::euler: return symplectic_euler_step(H, z, dt);
    case Method::verlet: return verlet_step(H, z, dt, false);
    case Method::verlet_literal: return verlet_step(H, z, dt, true);
    case Method::rk4: return rk4_step(H, z, t, dt);
    case Method::exact: break;
  }
  throw DomainError("step_point: exact flow is not stepped");
}

void check_method(const Hamiltonian& H, Method method) {
  switch (method) {
    case Method::euler:
    case Method::verlet:
    case Method::verlet_literal:
      require_separable(H, "integrate");
      return;
    case Method::exact:
      if (!H.quadratic_data() || !H.quadratic_data()->autonomous) {
        throw DomainError("integrate: exact flow needs an autonomous quadratic Hamiltonian");
      }
      return;
    case Method::rk4: return;
  }
}

}  // namespace

AffineSymplectic quadratic_flow(const Mat& M, const Vec& m, double t) {
  const Index d = M.rows();
  if (M.cols() != d || d % 2 != 0 || d == 0 || m.size() != d) {
    throw DimensionError("quadratic_flow: M must be 2n x 2n and m of length 2n");
  }
  Mat aug = Mat::Zero(d + 1, d + 1);
  aug.topLeftCorner(d, d) = apply_J(Mat(0.5 * (M + M.transpose())));
  aug.topRightCorner(d, 1) = apply_J(m);
  const Mat e = (t * aug).exp();
  return {e.topLeftCorner(d, d), e.topRightCorner(d, 1)};
}

PhasePoint symplectic_euler_step(const Hamiltonian& H, const PhasePoint& z, double dt) {
  const auto& s = require_separable(H, "symplectic_euler_step");
  const Index n = H.dim();
  const Vec p1 = z.tail(n) - s.V.gradient(z.head(n)) * dt;
  const Vec x1 = z.head(n) + s.U.gradient(p1) * dt;
  return phase_point(x1, p1);
}

PhasePoint verlet_step(const Hamiltonian& H, const PhasePoint& z, double dt, bool literal) {
  const auto& s = require_separable(H, "verlet_step");
  const Index n = H.dim();
  const double half = literal ? 0.5 : 0.5 * dt;
  const Vec xh = z.head(n) + half * s.U.gradient(z.tail(n));
  const Vec p1 = z.tail(n) - dt * s.V.gradient(xh);
  const Vec x1 = xh + half * s.U.gradient(p1);
  return phase_point(x1, p1);
}

PhasePoint rk4_step(const Hamiltonian& H, const PhasePoint& z, double t, double dt) {
  const Vec k1 = H.vector_field(z, t);
  const Vec k2 = H.vector_field(z + 0.5 * dt * k1, t + 0.5 * dt);
  const Vec k3 = H.vector_field(z + 0.5 * dt * k2, t + 0.5 * dt);
  const Vec k4 = H.vector_field(z + dt * k3, t + dt);
  return z + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::euler: return "euler";
    case Method::verlet: return "verlet";
    case Method::verlet_literal: return "verlet-literal";
    case Method::rk4: return "rk4-ref";
    case Method::exact: return "exact";
  }
  return "rk4-ref";
}

Method parse_method(const std::string& s) {
  if (s == "euler") return Method::euler;
  if (s == "verlet") return Method::verlet;
  if (s == "verlet-literal") return Method::verlet_literal;
  if (s == "rk4-ref" || s == "rk4") return Method::rk4;
  if (s == "exact") return Method::exact;
  throw DomainError("unknown integration method '" + s + "'");
}

Method default_method(const Hamiltonian& H) {
  if (H.quadratic_data() && H.quadratic_data()->autonomous) return Method::exact;
  if (H.separable_data()) return Method::verlet;
  return Method::rk4;
}

Trajectory integrate(const Hamiltonian& H, const PhasePoint& z0, double t_final, Index steps,
                     Method method, double t0) {
  if (steps < 1) throw DomainError("integrate: steps must be >= 1");
  if (z0.size() != 2 * H.dim()) throw DimensionError("integrate: z0 has wrong dimension");
  check_method(H, method);
  const Index d = z0.size();
  const double dt = (t_final - t0) / static_cast<double>(steps);

  Trajectory tr;
  tr.method = method;
  tr.dt = dt;
  tr.times.reserve(steps + 1);
  tr.times.push_back(t0);
  tr.points.push_back(z0);
  tr.linear.push_back(Mat::Identity(d, d));
  tr.gamma.push_back(0.0);

  AffineSymplectic full, half;
  if (method == Method::exact) {
    const Mat M = H.quadratic_data()->M(t0);
    const Vec m = H.quadratic_data()->m(t0);
    full = quadratic_flow(M, m, dt);
    half = quadratic_flow(M, m, 0.5 * dt);
  }
  auto variational = [&](const PhasePoint& z, double t, const Mat& S) {
    return apply_J(Mat(H.hessian(z, t) * S));
  };

  PhasePoint z = z0;
  Mat S = Mat::Identity(d, d);
  double gamma = 0.0;
  for (Index k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    PhasePoint z1, zmid;
    Mat S1;
    if (method == Method::exact) {
      z1 = full(z);
      zmid = half(z);
      S1 = full.linear * S;
    } else if (method == Method::rk4) {
      const Vec k1 = H.vector_field(z, t);
      const Mat l1 = variational(z, t, S);
      const PhasePoint za = z + 0.5 * dt * k1;
      const Vec k2 = H.vector_field(za, t + 0.5 * dt);
      const Mat l2 = variational(za, t + 0.5 * dt, S + 0.5 * dt * l1);
      const PhasePoint zb = z + 0.5 * dt * k2;
      const Vec k3 = H.vector_field(zb, t + 0.5 * dt);
      const Mat l3 = variational(zb, t + 0.5 * dt, S + 0.5 * dt * l2);
      const PhasePoint zc = z + dt * k3;
      const Vec k4 = H.vector_field(zc, t + dt);
      const Mat l4 = variational(zc, t + dt, S + dt * l3);
      z1 = z + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      S1 = S + dt / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
      zmid = 0.5 * (z + z1) + dt / 8 * (k1 - H.vector_field(z1, t + dt));
    } else {
      z1 = step_point(H, z, t, dt, method);
      // Cubic Hermite midpoint from the end values and slopes.
      zmid = 0.5 * (z + z1) + dt / 8 * (H.vector_field(z, t) - H.vector_field(z1, t + dt));
      const Mat l1 = variational(z, t, S);
      const Mat l2 = variational(zmid, t + 0.5 * dt, S + 0.5 * dt * l1);
      const Mat l3 = variational(zmid, t + 0.5 * dt, S + 0.5 * dt * l2);
      const Mat l4 = variational(z1, t + dt, S + dt * l3);
      S1 = S + dt / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
    }
    guard(z1, t + dt);
    gamma += dt / 6 *
             (action_density(H, z, t) + 4 * action_density(H, zmid, t + 0.5 * dt) +
              action_density(H, z1, t + dt));
    z = z1;
    S = S1;
    tr.times.push_back(t0 + static_cast<double>(k + 1) * dt);
    tr.points.push_back(z);
    tr.linear.push_back(S);
    tr.gamma.push_back(gamma);
  }
  return tr;
}

PhasePoint flow(const Hamiltonian& H, const PhasePoint& z, double t0, double t1, Index steps,
                Method method) {
  if (steps < 1) throw DomainError("flow: steps must be >= 1");
  if (z.size() != 2 * H.dim()) throw DimensionError("flow: point has wrong dimension");
  check_method(H, method);
  if (t0 == t1) return z;
  if (method == Method::exact) {
    return quadratic_flow(H.quadratic_data()->M(t0), H.quadratic_data()->m(t0), t1 - t0)(z);
  }
  const double dt = (t1 - t0) / static_cast<double>(steps);
  PhasePoint w = z;
  for (Index k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    w = step_point(H, w, t, dt, method);
    guard(w, t + dt);
  }
  return w;
}

double groupoid_check(const Hamiltonian& H, double t, double t1, double t2, const PhasePoint& z,
                      Index steps, Method method) {
  const PhasePoint two_legs = flow(H, flow(H, z, t2, t1, steps, method), t1, t, steps, method);
  const PhasePoint one_leg = flow(H, z, t2, t, steps, method);
  return (two_legs - one_leg).norm();
}

SuspendedState suspended_flow(const Hamiltonian& H, double t, const SuspendedState& s, Index steps,
                              Method method) {
  return {flow(H, s.z, s.t, s.t + t, steps, method), s.t + t};
}

}  // namespace gabor
