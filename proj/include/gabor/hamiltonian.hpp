#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gabor/core.hpp"

namespace gabor {

/// A smooth function on R^n with its first two derivatives.
struct Field {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// Fills in missing derivatives of a field by central differences.
Field complete(Field f);

/// sum_i sum_k c_k y_i^k with the same coefficients on every axis.
Field axis_polynomial(const Vec& coeffs);

/// 1/2 y^T A y + b.y for symmetric A.
Field quadratic_field(const Mat& A, const Vec& b);

Field zero_field();

/// Central-difference step (1e-6) max(1, |z|).
double fd_step(const Vec& z, double rel = 1e-6);
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& z, double rel = 1e-6);
/// Jacobian of f at z, columns by central differences.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& z, double rel = 1e-6);
/// Second differences of f, symmetrized.
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& z, double rel = 1e-4);

/// H(z, t) on R^{2n} x R with gradient and Hessian in z. Evaluation is reentrant.
class Hamiltonian {
 public:
  using ValueFn = std::function<double(const PhasePoint&, double)>;
  using GradientFn = std::function<Vec(const PhasePoint&, double)>;
  using HessianFn = std::function<Mat(const PhasePoint&, double)>;

  enum class Kind { quadratic, separable, expression, generic };

  /// H = 1/2 z^T M(t) z + m(t).z
  struct Quadratic {
    std::function<Mat(double)> M;
    std::function<Vec(double)> m;
    bool autonomous = true;
  };

  /// H = U(p) + V(x)
  struct Separable {
    Field U;
    Field V;
  };

  /// Missing derivatives are taken by central differences.
  Hamiltonian(Index n, ValueFn value, GradientFn gradient = {}, HessianFn hessian = {},
              Kind kind = Kind::generic, bool autonomous = false);

  static Hamiltonian quadratic(const Mat& M, const Vec& m);
  static Hamiltonian quadratic(Index n, std::function<Mat(double)> M,
                               std::function<Vec(double)> m);
  static Hamiltonian separable(Index n, Field U, Field V);
  static Hamiltonian zero(Index n);

  Index dim() const { return n_; }
  Kind kind() const { return kind_; }
  bool autonomous() const { return autonomous_; }

  double value(const PhasePoint& z, double t = 0.0) const;
  Vec gradient(const PhasePoint& z, double t = 0.0) const;
  Mat hessian(const PhasePoint& z, double t = 0.0) const;
  /// J grad H.
  Vec vector_field(const PhasePoint& z, double t = 0.0) const;

  const std::optional<Quadratic>& quadratic_data() const { return quadratic_; }
  const std::optional<Separable>& separable_data() const { return separable_; }

  /// Attach structure known to the caller (used when an expression turns out separable).
  void set_separable(Separable s);
  void set_quadratic(Quadratic q);

 private:
  Index n_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  Kind kind_;
  bool autonomous_;
  std::optional<Quadratic> quadratic_;
  std::optional<Separable> separable_;
};

std::string to_string(Hamiltonian::Kind k);

/// harmonic 1/2(|x|^2+|p|^2), shear 1/2 P|x|^2, free |p|^2/2, anharmonic |p|^2/2 + sum x^4/4,
/// driven 1/2|z|^2 + 0.3 sin(t) sum x.
Hamiltonian builtin_hamiltonian(const std::string& name, Index n = 1, double param = 1.0);
std::vector<std::string> builtin_hamiltonian_names();

}  // namespace gabor
