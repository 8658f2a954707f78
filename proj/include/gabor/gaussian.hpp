#pragma once

#include <vector>

#include "gabor/core.hpp"
#include "gabor/symplectic.hpp"

namespace gabor {

/// Complex symmetric n x n matrix with positive-definite imaginary part.
class SiegelMatrix {
 public:
  explicit SiegelMatrix(CMat m);

  /// i I, the parameter of the standard Gaussian.
  static SiegelMatrix identity(Index n);

  const CMat& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  Mat real() const { return m_.real(); }
  Mat imag() const { return m_.imag(); }

 private:
  CMat m_;
};

/// The normalized Gaussian e^{i phase/hbar} T^hbar(center) phi_M^hbar with
/// phi_M^hbar(x) = (det Im M / (pi hbar)^n)^{1/4} exp(i/(2 hbar) M x.x).
struct GaussianState {
  SiegelMatrix M;
  PhasePoint center;
  double phase = 0.0;
  double hbar = kHbarTF;

  Index dim() const { return M.dim(); }
  Vec position() const { return center.head(dim()); }
  Vec momentum() const { return center.tail(dim()); }

  /// Pointwise value at x in R^n.
  cplx operator()(const Vec& x) const;
};

GaussianState make_gaussian(const CMat& M, const PhasePoint& center, double hbar,
                            double phase = 0.0);

/// phi_0^hbar(x) = (pi hbar)^{-n/4} e^{-|x|^2 / 2 hbar}.
GaussianState standard_gaussian(Index n, double hbar);

/// A finite linear combination sum_k c_k g_k of Gaussian states sharing n and hbar.
struct GaussianMixture {
  std::vector<cplx> coeffs;
  std::vector<GaussianState> terms;

  GaussianMixture() = default;
  GaussianMixture(const GaussianState& g) : coeffs{1.0}, terms{g} {}  // NOLINT

  Index dim() const { return terms.front().dim(); }
  double hbar() const { return terms.front().hbar; }
  double norm() const;
  GaussianMixture normalized() const;
  cplx operator()(const Vec& x) const;
};

/// Largest condition number of A + B M accepted by siegel_action.
inline constexpr double kSiegelConditionCap = 1e12;

/// alpha(S) M = (C + D M)(A + B M)^{-1}.
SiegelMatrix siegel_action(const Mat& S, const SiegelMatrix& M);

/// A symplectic S with alpha(S)(i I) = M, namely V_{-X} M_{Y^{1/2}} for M = X + i Y.
Mat siegel_to_symplectic(const SiegelMatrix& M);

/// Lift of S to Gaussians: M -> alpha(S)M, center -> S center. The phase picks up
/// -(hbar/2) arg det(A + B M), taken continuously from M = iI; the overall sign of
/// the metaplectic lift is left unresolved.
GaussianState metaplectic_apply(const Mat& S, const GaussianState& g);
GaussianMixture metaplectic_apply(const Mat& S, const GaussianMixture& g);

/// T^hbar(z0) applied to a Gaussian: center -> center + z0 and
/// phase -> phase + sigma(z0, center)/2, from T(z)T(z') = e^{i sigma(z,z')/2hbar} T(z+z').
GaussianState heisenberg_weyl_apply(const PhasePoint& z0, const GaussianState& g);
GaussianMixture heisenberg_weyl_apply(const PhasePoint& z0, const GaussianMixture& g);

/// (psi|phi) = integral psi(x) conj(phi(x)) dx, in closed form.
cplx inner_product(const GaussianState& psi, const GaussianState& phi);
cplx inner_product(const GaussianMixture& psi, const GaussianMixture& phi);

/// Closed-form overlaps (psi|phi) for fixed Siegel parameters of psi and phi,
/// reusable across centers and phases.
class OverlapKernel {
 public:
  OverlapKernel(const SiegelMatrix& m_psi, const SiegelMatrix& m_phi, double hbar);

  cplx operator()(const PhasePoint& c_psi, double phase_psi, const PhasePoint& c_phi,
                  double phase_phi) const;

 private:
  Index n_;
  double hbar_;
  CMat m1_, m2c_, qinv_;
  cplx log_prefactor_;
};

/// Unitary dilation taking the window from its hbar to hbar_new while carrying
/// centers by sqrt(hbar_new / hbar); M is unchanged.
GaussianState rescale_window(const GaussianState& g, double hbar_new);

/// The same function of x described relative to another Planck constant:
/// M -> (h'/h) M, p0 -> (h'/h) p0, phase -> (h'/h) phase.
GaussianState reinterpret_hbar(const GaussianState& g, double hbar_new);

}  // namespace gabor
