#include "gabor/reconstruction.hpp"

#include <cmath>

#include "gabor/symplectic.hpp"

namespace gabor {

namespace {

Mat skew_J_left(const Mat& m) {
  // -J m
  const Index n = m.rows() / 2;
  Mat out(m.rows(), m.cols());
  out.topRows(n) = -m.bottomRows(n);
  out.bottomRows(n) = m.topRows(n);
  return out;
}

}  // namespace

PathHamiltonian hamiltonian_from_linear_path(const Mat& S, const Mat& S_dot) {
  if (S.rows() != S.cols() || S.rows() % 2 != 0 || S_dot.rows() != S.rows() ||
      S_dot.cols() != S.cols()) {
    throw DimensionError("hamiltonian_from_linear_path: S and S' must be 2n x 2n");
  }
  if (!is_symplectic(S, 1e-8)) {
    throw DomainError("hamiltonian_from_linear_path: S(t) is not symplectic (defect " +
                      std::to_string(symplectic_defect(S)) + ")");
  }
  PathHamiltonian out;
  const Mat k = skew_J_left(Mat(S_dot * symplectic_inverse(S)));
  out.asymmetry = (k - k.transpose()).cwiseAbs().maxCoeff();
  out.matrix = 0.5 * (k + k.transpose());

  const Blocks b = blocks(S), db = blocks(S_dot);
  out.xx = db.D * b.C.transpose() - db.C * b.D.transpose();
  out.xp = db.C * b.B.transpose() - db.D * b.A.transpose();
  out.pp = db.B * b.A.transpose() - db.A * b.B.transpose();
  const Mat kb = from_blocks(out.xx, out.xp, out.xp.transpose(), out.pp);
  out.block_matrix = 0.5 * (kb + kb.transpose());
  return out;
}

PathHamiltonian hamiltonian_from_linear_path(const LinearPath& S, double t, double h) {
  if (!(h > 0)) throw DomainError("hamiltonian_from_linear_path: step must be positive");
  const Mat s = S(t);
  const Mat s_dot = (S(t + h) - S(t - h)) / (2 * h);
  return hamiltonian_from_linear_path(s, s_dot);
}

std::vector<std::string> builtin_path_names() {
  return {"rotation", "identity", "shear", "dilation"};
}

LinearPath builtin_path(const std::string& name, Index n, double param) {
  if (n < 1) throw DimensionError("builtin_path: dimension must be >= 1");
  if (name == "rotation") return [n, param](double t) { return rotation(n, param * t); };
  if (name == "identity") return [n](double) { return Mat(Mat::Identity(2 * n, 2 * n)); };
  if (name == "shear") {
    return [n, param](double t) { return shear(Mat(t * param * Mat::Identity(n, n))); };
  }
  if (name == "dilation") {
    return [n, param](double t) {
      return dilation(Mat(std::exp(param * t) * Mat::Identity(n, n)));
    };
  }
  throw DomainError("unknown builtin path '" + name + "'");
}

PhasePoint isotopy_inverse(const Isotopy& f, double t, const PhasePoint& y,
                           const IsotopyOptions& opts) {
  PhasePoint w = y;
  Vec r = f(t, w) - y;
  double res = r.norm();
  const double target = opts.tol * std::max(1.0, y.norm());
  for (Index it = 0; it < opts.max_iter && res > target; ++it) {
    const Mat jac = fd_jacobian([&](const Vec& v) { return f(t, v); }, w);
    const Vec step = jac.partialPivLu().solve(r);
    double lambda = 1.0;
    PhasePoint trial = w - step;
    Vec rt = f(t, trial) - y;
    while (rt.norm() >= res && lambda > 1e-4) {
      lambda *= 0.5;
      trial = w - lambda * step;
      rt = f(t, trial) - y;
    }
    if (!(rt.norm() < res)) break;
    w = trial;
    r = rt;
    res = rt.norm();
  }
  // Finite-difference Jacobians limit the attainable residual; accept a small floor.
  if (!(res <= std::max(target, 1e-10 * std::max(1.0, y.norm())))) {
    throw ConvergenceError("isotopy_inverse: Newton iteration did not converge", res);
  }
  return w;
}

double hamiltonian_from_isotopy(const Isotopy& f, double t, const PhasePoint& z,
                                const IsotopyOptions& opts) {
  if (opts.nodes < 3 || opts.nodes % 2 == 0) {
    throw DomainError("hamiltonian_from_isotopy: Simpson needs an odd node count >= 3");
  }
  phase_dim(z);
  const Index intervals = opts.nodes - 1;
  const double dl = 1.0 / static_cast<double>(intervals);
  double acc = 0.0;
  for (Index k = 0; k <= intervals; ++k) {
    const double lambda = static_cast<double>(k) * dl;
    const PhasePoint y = lambda * z;
    const PhasePoint w = isotopy_inverse(f, t, y, opts);
    const Vec x_field = (f(t + opts.h, w) - f(t - opts.h, w)) / (2 * opts.h);
    const double integrand = symplectic_form(x_field, z);  // z^T J X
    const double weight = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += weight * integrand;
  }
  return -acc * dl / 3.0;
}

Index FlowOptions::steps(double span) const {
  return std::max(min_steps, static_cast<Index>(std::ceil(std::abs(span) * steps_per_unit)));
}

double compose_hamiltonians(const Hamiltonian& H, const Hamiltonian& K, double t,
                            const PhasePoint& z, const FlowOptions& opts) {
  const PhasePoint back = flow(H, z, t, 0.0, opts.steps(t), opts.method);
  return H.value(z, t) + K.value(back, t);
}

double invert_hamiltonian(const Hamiltonian& H, double t, const PhasePoint& z,
                          const FlowOptions& opts) {
  return -H.value(flow(H, z, 0.0, t, opts.steps(t), opts.method), t);
}

Hamiltonian composed_hamiltonian(const Hamiltonian& H, const Hamiltonian& K,
                                 const FlowOptions& opts) {
  if (H.dim() != K.dim()) throw DimensionError("composed_hamiltonian: dimension mismatch");
  return Hamiltonian(H.dim(), [H, K, opts](const PhasePoint& z, double t) {
    return compose_hamiltonians(H, K, t, z, opts);
  });
}

Hamiltonian inverted_hamiltonian(const Hamiltonian& H, const FlowOptions& opts) {
  return Hamiltonian(H.dim(), [H, opts](const PhasePoint& z, double t) {
    return invert_hamiltonian(H, t, z, opts);
  });
}

double modified_hamiltonian_K(const Field& U, const Field& V, const Vec& x, const Vec& p,
                              double t) {
  return U.value(p) + V.value(x - U.gradient(p) * t);
}

Hamiltonian modified_hamiltonian(const Hamiltonian& separable) {
  if (!separable.separable_data()) {
    throw DomainError("modified_hamiltonian: Hamiltonian is not separable");
  }
  const auto s = *separable.separable_data();
  const Index n = separable.dim();
  auto value = [s, n](const PhasePoint& z, double t) {
    return modified_hamiltonian_K(s.U, s.V, z.head(n), z.tail(n), t);
  };
  auto grad = [s, n](const PhasePoint& z, double t) {
    const Vec p = z.tail(n);
    const Vec gv = s.V.gradient(z.head(n) - s.U.gradient(p) * t);
    Vec g(2 * n);
    g << gv, s.U.gradient(p) - t * (s.U.hessian(p) * gv);
    return g;
  };
  return Hamiltonian(n, value, grad);
}

}  // namespace gabor
