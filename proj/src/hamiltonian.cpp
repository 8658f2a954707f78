#include "gabor/hamiltonian.hpp"

#include <cmath>

#include "gabor/symplectic.hpp"

namespace gabor {

double fd_step(const Vec& z, double rel) {
  return rel * std::max(1.0, z.norm());
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& z, double rel) {
  const double h = fd_step(z, rel);
  Vec g(z.size());
  Vec w = z;
  for (Index i = 0; i < z.size(); ++i) {
    w(i) = z(i) + h;
    const double fp = f(w);
    w(i) = z(i) - h;
    const double fm = f(w);
    w(i) = z(i);
    g(i) = (fp - fm) / (2 * h);
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& z, double rel) {
  const double h = fd_step(z, rel);
  Vec w = z;
  Mat jac;
  for (Index i = 0; i < z.size(); ++i) {
    w(i) = z(i) + h;
    const Vec fp = f(w);
    w(i) = z(i) - h;
    const Vec fm = f(w);
    w(i) = z(i);
    if (i == 0) jac.resize(fp.size(), z.size());
    jac.col(i) = (fp - fm) / (2 * h);
  }
  return jac;
}

Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& z, double rel) {
  const double h = fd_step(z, rel);
  const Index d = z.size();
  Mat hess(d, d);
  Vec w = z;
  const double f0 = f(z);
  for (Index i = 0; i < d; ++i) {
    w(i) = z(i) + h;
    const double fp = f(w);
    w(i) = z(i) - h;
    const double fm = f(w);
    w(i) = z(i);
    hess(i, i) = (fp - 2 * f0 + fm) / (h * h);
    for (Index j = 0; j < i; ++j) {
      double acc = 0.0;
      for (int si = -1; si <= 1; si += 2) {
        for (int sj = -1; sj <= 1; sj += 2) {
          w(i) = z(i) + si * h;
          w(j) = z(j) + sj * h;
          acc += si * sj * f(w);
        }
      }
      w(i) = z(i);
      w(j) = z(j);
      hess(i, j) = hess(j, i) = acc / (4 * h * h);
    }
  }
  return hess;
}

Field complete(Field f) {
  if (!f.value) throw DomainError("field needs a value function");
  if (!f.gradient) {
    f.gradient = [v = f.value](const Vec& y) { return fd_gradient(v, y); };
  }
  if (!f.hessian) {
    f.hessian = [g = f.gradient](const Vec& y) {
      Mat h = fd_jacobian(g, y, 1e-5);
      return Mat(0.5 * (h + h.transpose()));
    };
  }
  return f;
}

Field axis_polynomial(const Vec& coeffs) {
  Field f;
  f.value = [coeffs](const Vec& y) {
    double acc = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      double pw = 1.0;
      for (Index k = 0; k < coeffs.size(); ++k) {
        acc += coeffs(k) * pw;
        pw *= y(i);
      }
    }
    return acc;
  };
  f.gradient = [coeffs](const Vec& y) {
    Vec g = Vec::Zero(y.size());
    for (Index i = 0; i < y.size(); ++i) {
      double pw = 1.0;
      for (Index k = 1; k < coeffs.size(); ++k) {
        g(i) += static_cast<double>(k) * coeffs(k) * pw;
        pw *= y(i);
      }
    }
    return g;
  };
  f.hessian = [coeffs](const Vec& y) {
    Mat h = Mat::Zero(y.size(), y.size());
    for (Index i = 0; i < y.size(); ++i) {
      double pw = 1.0;
      for (Index k = 2; k < coeffs.size(); ++k) {
        h(i, i) += static_cast<double>(k * (k - 1)) * coeffs(k) * pw;
        pw *= y(i);
      }
    }
    return h;
  };
  return f;
}

Field quadratic_field(const Mat& A, const Vec& b) {
  const Mat a = 0.5 * (A + A.transpose());
  return {[a, b](const Vec& y) { return 0.5 * y.dot(a * y) + b.dot(y); },
          [a, b](const Vec& y) { return Vec(a * y + b); },
          [a](const Vec&) { return a; }};
}

Field zero_field() {
  return {[](const Vec&) { return 0.0; }, [](const Vec& y) { return Vec(Vec::Zero(y.size())); },
          [](const Vec& y) { return Mat(Mat::Zero(y.size(), y.size())); }};
}

Hamiltonian::Hamiltonian(Index n, ValueFn value, GradientFn gradient, HessianFn hessian, Kind kind,
                         bool autonomous)
    : n_(n),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      kind_(kind),
      autonomous_(autonomous) {
  if (n_ < 1) throw DimensionError("Hamiltonian: dimension must be >= 1");
  if (!value_) throw DomainError("Hamiltonian: value function required");
  if (!gradient_) {
    gradient_ = [v = value_](const PhasePoint& z, double t) {
      return fd_gradient([&](const Vec& w) { return v(w, t); }, z);
    };
  }
  if (!hessian_) {
    hessian_ = [g = gradient_](const PhasePoint& z, double t) {
      Mat h = fd_jacobian([&](const Vec& w) { return g(w, t); }, z, 1e-5);
      return Mat(0.5 * (h + h.transpose()));
    };
  }
}

Hamiltonian Hamiltonian::quadratic(const Mat& M, const Vec& m) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() == 0) {
    throw DimensionError("quadratic Hamiltonian: M must be 2n x 2n");
  }
  if (m.size() != M.rows()) throw DimensionError("quadratic Hamiltonian: m must have length 2n");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff())) {
    throw DomainError("quadratic Hamiltonian: M must be symmetric");
  }
  const Mat ms = 0.5 * (M + M.transpose());
  Hamiltonian h = quadratic(
      M.rows() / 2, [ms](double) { return ms; }, [m](double) { return m; });
  h.autonomous_ = true;
  h.quadratic_->autonomous = true;
  return h;
}

Hamiltonian Hamiltonian::quadratic(Index n, std::function<Mat(double)> M,
                                   std::function<Vec(double)> m) {
  auto value = [M, m](const PhasePoint& z, double t) {
    return 0.5 * z.dot(M(t) * z) + m(t).dot(z);
  };
  auto grad = [M, m](const PhasePoint& z, double t) { return Vec(M(t) * z + m(t)); };
  auto hess = [M](const PhasePoint&, double t) { return M(t); };
  Hamiltonian h(n, value, grad, hess, Kind::quadratic, false);
  h.quadratic_ = Quadratic{std::move(M), std::move(m), false};
  return h;
}

Hamiltonian Hamiltonian::separable(Index n, Field U, Field V) {
  U = complete(std::move(U));
  V = complete(std::move(V));
  auto value = [U, V, n](const PhasePoint& z, double) {
    return U.value(z.tail(n)) + V.value(z.head(n));
  };
  auto grad = [U, V, n](const PhasePoint& z, double) {
    Vec g(2 * n);
    g << V.gradient(z.head(n)), U.gradient(z.tail(n));
    return g;
  };
  auto hess = [U, V, n](const PhasePoint& z, double) {
    Mat h = Mat::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n) = V.hessian(z.head(n));
    h.bottomRightCorner(n, n) = U.hessian(z.tail(n));
    return h;
  };
  Hamiltonian h(n, value, grad, hess, Kind::separable, true);
  h.separable_ = Separable{std::move(U), std::move(V)};
  return h;
}

Hamiltonian Hamiltonian::zero(Index n) {
  Hamiltonian h = quadratic(Mat::Zero(2 * n, 2 * n), Vec::Zero(2 * n));
  h.separable_ = Separable{zero_field(), zero_field()};
  return h;
}

double Hamiltonian::value(const PhasePoint& z, double t) const {
  if (z.size() != 2 * n_) throw DimensionError("Hamiltonian: point has wrong dimension");
  return value_(z, t);
}

Vec Hamiltonian::gradient(const PhasePoint& z, double t) const {
  if (z.size() != 2 * n_) throw DimensionError("Hamiltonian: point has wrong dimension");
  return gradient_(z, t);
}

Mat Hamiltonian::hessian(const PhasePoint& z, double t) const {
  if (z.size() != 2 * n_) throw DimensionError("Hamiltonian: point has wrong dimension");
  return hessian_(z, t);
}

Vec Hamiltonian::vector_field(const PhasePoint& z, double t) const {
  const Vec g = gradient(z, t);
  Vec out(2 * n_);
  out << g.tail(n_), -g.head(n_);
  return out;
}

void Hamiltonian::set_separable(Separable s) {
  s.U = complete(std::move(s.U));
  s.V = complete(std::move(s.V));
  separable_ = std::move(s);
  autonomous_ = true;
}

void Hamiltonian::set_quadratic(Quadratic q) { quadratic_ = std::move(q); }

std::string to_string(Hamiltonian::Kind k) {
  switch (k) {
    case Hamiltonian::Kind::quadratic: return "quadratic";
    case Hamiltonian::Kind::separable: return "separable";
    case Hamiltonian::Kind::expression: return "expression";
    case Hamiltonian::Kind::generic: return "generic";
  }
  return "generic";
}

std::vector<std::string> builtin_hamiltonian_names() {
  return {"harmonic", "shear", "free", "anharmonic", "driven", "zero"};
}

Hamiltonian builtin_hamiltonian(const std::string& name, Index n, double param) {
  if (n < 1) throw DimensionError("builtin Hamiltonian: dimension must be >= 1");
  const Mat I = Mat::Identity(n, n);
  const Mat O = Mat::Zero(n, n);
  const Vec zero = Vec::Zero(2 * n);
  if (name == "harmonic") {
    Hamiltonian h = Hamiltonian::quadratic(Mat::Identity(2 * n, 2 * n), zero);
    h.set_separable({quadratic_field(I, Vec::Zero(n)), quadratic_field(I, Vec::Zero(n))});
    return h;
  }
  if (name == "shear") {
    Hamiltonian h = Hamiltonian::quadratic(from_blocks(param * I, O, O, O), zero);
    h.set_separable({zero_field(), quadratic_field(param * I, Vec::Zero(n))});
    return h;
  }
  if (name == "free") {
    Hamiltonian h = Hamiltonian::quadratic(from_blocks(O, O, O, I), zero);
    h.set_separable({quadratic_field(I, Vec::Zero(n)), zero_field()});
    return h;
  }
  if (name == "anharmonic") {
    Vec quartic = Vec::Zero(5);
    quartic(4) = 0.25;
    return Hamiltonian::separable(n, quadratic_field(I, Vec::Zero(n)), axis_polynomial(quartic));
  }
  if (name == "driven") {
    return Hamiltonian::quadratic(
        n, [n](double) { return Mat(Mat::Identity(2 * n, 2 * n)); },
        [n](double t) {
          Vec m = Vec::Zero(2 * n);
          m.head(n).setConstant(0.3 * std::sin(t));
          return m;
        });
  }
  if (name == "zero") return Hamiltonian::zero(n);
  throw DomainError("unknown builtin Hamiltonian '" + name + "'");
}

}  // namespace gabor
