#include "gabor/gaussian.hpp"

#include <cmath>

namespace gabor {

namespace {

const cplx kI{0.0, 1.0};

// Sum of principal logs of the eigenvalues; for complex symmetric Q with Re Q > 0
// this is the branch of log det Q continuous from the real part.
cplx log_det_right_half_plane(const CMat& q) {
  if (q.rows() == 1) return std::log(q(0, 0));
  Eigen::ComplexEigenSolver<CMat> es(q, false);
  cplx acc = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) acc += std::log(es.eigenvalues()(i));
  return acc;
}

double log_det_spd(const Mat& m) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw DomainError("expected a positive-definite matrix");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double condition_number(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

void check_same_space(const GaussianState& a, const GaussianState& b) {
  if (a.dim() != b.dim()) throw DimensionError("Gaussian states of different dimension");
  if (std::abs(a.hbar - b.hbar) > 1e-14 * std::max(a.hbar, b.hbar)) {
    throw DomainError("Gaussian states with different hbar");
  }
}

// arg det(A + B M) continued from M = iI along the straight segment in the Siegel space.
double continuous_arg_det(const Blocks& b, const CMat& m) {
  const Index n = m.rows();
  const CMat start = kI * CMat::Identity(n, n);
  auto det_at = [&](double s) {
    const CMat ms = start + s * (m - start);
    return (b.A.cast<cplx>() + b.B.cast<cplx>() * ms).determinant();
  };
  double arg = std::arg(det_at(0.0));
  double s = 0.0, step = 0.125;
  cplx prev = det_at(0.0);
  while (s < 1.0) {
    const double next_s = std::min(1.0, s + step);
    const cplx next = det_at(next_s);
    const double delta = std::arg(next / prev);
    if (std::abs(delta) > 0.5 && step > 1e-6) {
      step *= 0.5;
      continue;
    }
    arg += delta;
    prev = next;
    s = next_s;
    step = std::min(0.125, step * 2);
  }
  return arg;
}

}  // namespace

SiegelMatrix::SiegelMatrix(CMat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionError("Siegel matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("Siegel matrix must be symmetric");
  }
  m_ = 0.5 * (m_ + m_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(m_.imag(), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0)) {
    throw DomainError("Siegel matrix must have positive-definite imaginary part");
  }
}

SiegelMatrix SiegelMatrix::identity(Index n) {
  return SiegelMatrix(kI * CMat::Identity(n, n));
}

cplx GaussianState::operator()(const Vec& x) const {
  const Index n = dim();
  if (x.size() != n) throw DimensionError("GaussianState: evaluation point has wrong dimension");
  const Vec x0 = position(), p0 = momentum();
  const CVec d = (x - x0).cast<cplx>();
  const cplx quad = d.transpose() * M.matrix() * d;
  const double lognorm = 0.25 * (log_det_spd(M.imag()) - n * std::log(kPi * hbar));
  const cplx expo = kI / (2 * hbar) * quad + kI / hbar * (p0.dot(x) - 0.5 * p0.dot(x0) + phase);
  return std::exp(lognorm + expo);
}

GaussianState make_gaussian(const CMat& M, const PhasePoint& center, double hbar, double phase) {
  if (!(hbar > 0)) throw DomainError("hbar must be positive");
  SiegelMatrix sm(M);
  if (center.size() != 2 * sm.dim()) throw DimensionError("center must have length 2n");
  return {std::move(sm), center, phase, hbar};
}

GaussianState standard_gaussian(Index n, double hbar) {
  if (!(hbar > 0)) throw DomainError("standard_gaussian: hbar must be positive");
  return {SiegelMatrix::identity(n), PhasePoint::Zero(2 * n), 0.0, hbar};
}

double GaussianMixture::norm() const { return std::sqrt(std::abs(inner_product(*this, *this))); }

GaussianMixture GaussianMixture::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0)) throw DomainError("cannot normalize a zero mixture");
  GaussianMixture out = *this;
  for (auto& c : out.coeffs) c /= nrm;
  return out;
}

cplx GaussianMixture::operator()(const Vec& x) const {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) acc += coeffs[k] * terms[k](x);
  return acc;
}

SiegelMatrix siegel_action(const Mat& S, const SiegelMatrix& M) {
  if (S.rows() != 2 * M.dim() || S.cols() != S.rows()) {
    throw DimensionError("siegel_action: S must be 2n x 2n");
  }
  const Blocks b = blocks(S);
  const CMat denom = b.A.cast<cplx>() + b.B.cast<cplx>() * M.matrix();
  const double cond = condition_number(denom);
  if (!(cond <= kSiegelConditionCap)) {
    throw NumericalDegeneracy("siegel_action: A + B M has condition number " +
                              std::to_string(cond));
  }
  const CMat numer = b.C.cast<cplx>() + b.D.cast<cplx>() * M.matrix();
  // X = numer * denom^{-1}  <=>  denom^T X^T = numer^T
  CMat out = denom.transpose().partialPivLu().solve(numer.transpose()).transpose();
  return SiegelMatrix(0.5 * (out + out.transpose()));
}

Mat siegel_to_symplectic(const SiegelMatrix& M) {
  const Index n = M.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(M.imag());
  const Mat y_half = es.operatorSqrt();
  const Mat y_mhalf = es.operatorInverseSqrt();
  return from_blocks(y_mhalf, Mat::Zero(n, n), M.real() * y_mhalf, y_half);
}

GaussianState metaplectic_apply(const Mat& S, const GaussianState& g) {
  if (S.rows() != 2 * g.dim()) throw DimensionError("metaplectic_apply: dimension mismatch");
  SiegelMatrix m_new = siegel_action(S, g.M);
  const double arg = continuous_arg_det(blocks(S), g.M.matrix());
  return {std::move(m_new), S * g.center, g.phase - 0.5 * g.hbar * arg, g.hbar};
}

GaussianMixture metaplectic_apply(const Mat& S, const GaussianMixture& g) {
  GaussianMixture out;
  out.coeffs = g.coeffs;
  out.terms.reserve(g.terms.size());
  for (const auto& t : g.terms) out.terms.push_back(metaplectic_apply(S, t));
  return out;
}

GaussianState heisenberg_weyl_apply(const PhasePoint& z0, const GaussianState& g) {
  if (z0.size() != g.center.size()) {
    throw DimensionError("heisenberg_weyl_apply: dimension mismatch");
  }
  return {g.M, g.center + z0, g.phase + 0.5 * symplectic_form(z0, g.center), g.hbar};
}

GaussianMixture heisenberg_weyl_apply(const PhasePoint& z0, const GaussianMixture& g) {
  GaussianMixture out;
  out.coeffs = g.coeffs;
  out.terms.reserve(g.terms.size());
  for (const auto& t : g.terms) out.terms.push_back(heisenberg_weyl_apply(z0, t));
  return out;
}

OverlapKernel::OverlapKernel(const SiegelMatrix& m_psi, const SiegelMatrix& m_phi, double hbar)
    : n_(m_psi.dim()), hbar_(hbar), m1_(m_psi.matrix()), m2c_(m_phi.matrix().conjugate()) {
  if (m_phi.dim() != n_) throw DimensionError("OverlapKernel: dimension mismatch");
  // Integrand exp(-1/2 x^T Q x + r^T x + s) with Q = (-i/hbar)(M1 - conj M2).
  const CMat q = (-kI / hbar) * (m1_ - m2c_);
  qinv_ = q.inverse();
  const double n = static_cast<double>(n_);
  log_prefactor_ = 0.5 * n * std::log(2 * kPi) - 0.5 * log_det_right_half_plane(q) +
                   0.25 * (log_det_spd(m_psi.imag()) + log_det_spd(m_phi.imag())) -
                   0.5 * n * std::log(kPi * hbar);
}

cplx OverlapKernel::operator()(const PhasePoint& c_psi, double phase_psi,
                               const PhasePoint& c_phi, double phase_phi) const {
  const Index n = n_;
  const CVec x1 = c_psi.head(n).cast<cplx>(), p1 = c_psi.tail(n).cast<cplx>();
  const CVec x2 = c_phi.head(n).cast<cplx>(), p2 = c_phi.tail(n).cast<cplx>();
  const cplx ih = kI / hbar_;
  const CVec r = ih * (p1 - m1_ * x1) - ih * (p2 - m2c_ * x2);
  const cplx quad1 = x1.transpose() * m1_ * x1;
  const cplx quad2 = x2.transpose() * m2c_ * x2;
  const cplx s = 0.5 * ih * quad1 + ih * (phase_psi - 0.5 * p1.dot(x1).real()) -
                 0.5 * ih * quad2 - ih * (phase_phi - 0.5 * p2.dot(x2).real());
  const cplx gauss = 0.5 * (r.transpose() * qinv_ * r)(0, 0);
  return std::exp(log_prefactor_ + gauss + s);
}

cplx inner_product(const GaussianState& psi, const GaussianState& phi) {
  check_same_space(psi, phi);
  OverlapKernel k(psi.M, phi.M, psi.hbar);
  return k(psi.center, psi.phase, phi.center, phi.phase);
}

cplx inner_product(const GaussianMixture& psi, const GaussianMixture& phi) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < psi.terms.size(); ++i) {
    for (std::size_t j = 0; j < phi.terms.size(); ++j) {
      acc += psi.coeffs[i] * std::conj(phi.coeffs[j]) * inner_product(psi.terms[i], phi.terms[j]);
    }
  }
  return acc;
}

GaussianState rescale_window(const GaussianState& g, double hbar_new) {
  if (!(hbar_new > 0)) throw DomainError("rescale_window: hbar must be positive");
  const double ratio = hbar_new / g.hbar;
  return {g.M, std::sqrt(ratio) * g.center, ratio * g.phase, hbar_new};
}

GaussianState reinterpret_hbar(const GaussianState& g, double hbar_new) {
  if (!(hbar_new > 0)) throw DomainError("reinterpret_hbar: hbar must be positive");
  const double ratio = hbar_new / g.hbar;
  PhasePoint c = g.center;
  c.tail(g.dim()) *= ratio;
  return {SiegelMatrix(ratio * g.M.matrix()), c, ratio * g.phase, hbar_new};
}

}  // namespace gabor
