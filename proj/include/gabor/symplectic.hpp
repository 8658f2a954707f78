#pragma once

#include <algorithm>
#include <cmath>
#include <variant>

#include "gabor/core.hpp"

namespace gabor {

/// Standard symplectic matrix J = (0 I; -I 0) in dimension 2n.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> standard_J(Index n) {
  if (n < 1) throw DimensionError("standard_J: n must be >= 1");
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  M j = M::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -M::Identity(n, n);
  return j;
}

/// sigma(z, w) = p.x' - p'.x for z = (x, p), w = (x', p').
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar symplectic_form(const Eigen::MatrixBase<DerivedA>& z,
                                          const Eigen::MatrixBase<DerivedB>& w) {
  if (z.size() != w.size() || z.size() == 0 || z.size() % 2 != 0) {
    throw DimensionError("symplectic_form: operands must share an even length");
  }
  const Index n = z.size() / 2;
  return z.tail(n).dot(w.head(n)) - w.tail(n).dot(z.head(n));
}

/// True when ||S^T J S - J||_max <= tol * max(1, ||S||_2^2).
template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& s, double tol = 1e-10) {
  if (s.rows() != s.cols()) throw DimensionError("is_symplectic: matrix must be square");
  if (s.rows() == 0 || s.rows() % 2 != 0) {
    throw DimensionError("is_symplectic: dimension must be even");
  }
  using Scalar = typename Derived::Scalar;
  const auto j = standard_J<Scalar>(s.rows() / 2);
  const auto defect = (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
  const double norm2 = std::max(1.0, std::pow(static_cast<double>(s.operatorNorm()), 2));
  return static_cast<double>(defect) <= tol * norm2;
}

/// ||S^T J S - J||_max, unscaled.
template <typename Derived>
double symplectic_defect(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  const auto j = standard_J<Scalar>(s.rows() / 2);
  return static_cast<double>((s.transpose() * j * s - j).cwiseAbs().maxCoeff());
}

/// Inverse of a symplectic matrix, S^{-1} = -J S^T J.
template <typename Derived>
auto symplectic_inverse(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  const auto j = standard_J<Scalar>(s.rows() / 2);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> inv = -j * s.transpose() * j;
  return inv;
}

struct Blocks {
  Mat A, B, C, D;
};

/// Splits a 2n x 2n matrix into its n x n blocks (A B; C D).
Blocks blocks(const Mat& s);
Mat from_blocks(const Mat& a, const Mat& b, const Mat& c, const Mat& d);

// Generators of Sp(n).
struct FourierGenerator {};
struct DilationGenerator {
  Mat L;
};
struct ShearGenerator {
  Mat P;
};
using Generator = std::variant<FourierGenerator, DilationGenerator, ShearGenerator>;

/// J, M_L = (L^{-1} 0; 0 L^T) or V_P = (I 0; -P I). `n` is only used for J.
Mat make_generator(const Generator& kind, Index n = 1);

inline Mat dilation(const Mat& L) { return make_generator(DilationGenerator{L}); }
inline Mat shear(const Mat& P) { return make_generator(ShearGenerator{P}); }

/// The rotation (cos t, sin t; -sin t, cos t) acting diagonally on each (x_j, p_j) pair.
Mat rotation(Index n, double t);

/// Element (S, z0) of ISp(n), acting as z -> S z + z0.
struct AffineSymplectic {
  Mat linear;
  Vec shift;

  static AffineSymplectic identity(Index n);
  static AffineSymplectic translation(const Vec& z0);

  Index dim() const { return linear.rows() / 2; }
  PhasePoint operator()(const PhasePoint& z) const { return linear * z + shift; }
};

/// Group law (S, z)(S', z') = (S S', z + S z').
AffineSymplectic affine_compose(const AffineSymplectic& g1, const AffineSymplectic& g2);
/// (S, z)^{-1} = (S^{-1}, -S^{-1} z).
AffineSymplectic affine_inverse(const AffineSymplectic& g);

/// Quadratic generating function W(x, x') = 1/2 P x.x - L x.x' + 1/2 Q x'.x'.
struct GeneratingFunctionData {
  Mat P;
  Mat L;
  Mat Q;
  int maslov = 0;  ///< integer m mod 4 choosing arg det L

  void validate() const;
};

/// S_W = (L^{-1}Q, L^{-1}; P L^{-1} Q - L^T, P L^{-1}).
Mat from_generating_function(const GeneratingFunctionData& data);

/// Generating function of the rotation by t (t not a multiple of pi), n = 1.
GeneratingFunctionData rotation_generating_function(double t);

}  // namespace gabor
