#include "gabor/symplectic.hpp"

#include <cmath>

namespace gabor {

namespace {

constexpr double kSymmetryTol = 1e-12;

bool symmetric(const Mat& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol * scale;
}

bool invertible(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > 1e-14 * std::max(1.0, sv(0));
}

}  // namespace

Blocks blocks(const Mat& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    throw DimensionError("blocks: expected a square matrix of even size");
  }
  const Index n = s.rows() / 2;
  return {s.topLeftCorner(n, n), s.topRightCorner(n, n), s.bottomLeftCorner(n, n),
          s.bottomRightCorner(n, n)};
}

Mat from_blocks(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  const Index n = a.rows();
  Mat s(2 * n, 2 * n);
  s << a, b, c, d;
  return s;
}

Mat make_generator(const Generator& kind, Index n) {
  return std::visit(
      [n](const auto& g) -> Mat {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, FourierGenerator>) {
          return standard_J(n);
        } else if constexpr (std::is_same_v<G, DilationGenerator>) {
          if (!invertible(g.L)) throw DomainError("dilation: L must be invertible");
          const Index m = g.L.rows();
          return from_blocks(g.L.inverse(), Mat::Zero(m, m), Mat::Zero(m, m),
                             g.L.transpose());
        } else {
          if (!symmetric(g.P)) throw DomainError("shear: P must be symmetric");
          const Index m = g.P.rows();
          return from_blocks(Mat::Identity(m, m), Mat::Zero(m, m), -g.P, Mat::Identity(m, m));
        }
      },
      kind);
}

Mat rotation(Index n, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return from_blocks(c * Mat::Identity(n, n), s * Mat::Identity(n, n),
                     -s * Mat::Identity(n, n), c * Mat::Identity(n, n));
}

AffineSymplectic AffineSymplectic::identity(Index n) {
  return {Mat::Identity(2 * n, 2 * n), Vec::Zero(2 * n)};
}

AffineSymplectic AffineSymplectic::translation(const Vec& z0) {
  const Index n = phase_dim(z0);
  return {Mat::Identity(2 * n, 2 * n), z0};
}

AffineSymplectic affine_compose(const AffineSymplectic& g1, const AffineSymplectic& g2) {
  if (g1.linear.rows() != g2.linear.rows()) {
    throw DimensionError("affine_compose: dimension mismatch");
  }
  return {g1.linear * g2.linear, g1.shift + g1.linear * g2.shift};
}

AffineSymplectic affine_inverse(const AffineSymplectic& g) {
  Mat inv = symplectic_inverse(g.linear);
  Vec shift = -inv * g.shift;
  return {std::move(inv), std::move(shift)};
}

void GeneratingFunctionData::validate() const {
  const Index n = L.rows();
  if (P.rows() != n || Q.rows() != n || L.cols() != n) {
    throw DimensionError("generating function: P, L, Q must be n x n");
  }
  if (!symmetric(P) || !symmetric(Q)) {
    throw DomainError("generating function: P and Q must be symmetric");
  }
  if (!invertible(L)) throw DomainError("generating function: L must be invertible");
}

Mat from_generating_function(const GeneratingFunctionData& data) {
  data.validate();
  const Mat linv = data.L.inverse();
  return from_blocks(linv * data.Q, linv, data.P * linv * data.Q - data.L.transpose(),
                     data.P * linv);
}

GeneratingFunctionData rotation_generating_function(double t) {
  const double s = std::sin(t);
  if (std::abs(s) < 1e-12) throw DomainError("rotation generating function: sin t = 0");
  const double cot = std::cos(t) / s;
  // arg det L follows the sign of sin t
  return {Mat::Constant(1, 1, cot), Mat::Constant(1, 1, 1.0 / s), Mat::Constant(1, 1, cot),
          s > 0 ? 0 : 1};
}

}  // namespace gabor
