#include "gabor/frames.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

namespace gabor {

namespace {

const cplx kI{0.0, 1.0};

double max_point_norm(const PointSet& pts) {
  double r = 0.0;
  for (Index j = 0; j < pts.cols(); ++j) r = std::max(r, pts.col(j).norm());
  return r;
}

// T(z) phi for a Gaussian window.
GaussianState shifted_window(const GaussianState& phi, const PhasePoint& z) {
  return heisenberg_weyl_apply(z, phi);
}

// Window T(z) phi sampled on a grid, one column per lattice point.
CMat window_columns(const GaborSystem& sys, const Grid& grid) {
  const Index pts = sys.size();
  CMat w(grid.size(), pts);
  if (sys.gaussian()) {
    const Mat xs = grid.coordinates();
    const GaussianState& phi = sys.gaussian_window();
    parallel_for(static_cast<std::size_t>(pts), [&](std::size_t j) {
      const GaussianState g = shifted_window(phi, sys.points.col(static_cast<Index>(j)));
      for (Index f = 0; f < grid.size(); ++f) w(f, static_cast<Index>(j)) = g(xs.col(f));
    });
  } else {
    const auto& sw = std::get<SampledWindow>(sys.window);
    if (!(sw.grid == grid)) throw DomainError("sampled window and test grid differ");
    parallel_for(static_cast<std::size_t>(pts), [&](std::size_t j) {
      w.col(static_cast<Index>(j)) =
          heisenberg_weyl_apply(sys.points.col(static_cast<Index>(j)), sw).values;
    });
  }
  return w;
}

CMat gram_matrix(const GaborSystem& sys, const Grid& grid) {
  const Index pts = sys.size();
  CMat gram(pts, pts);
  if (sys.gaussian()) {
    const GaussianState& phi = sys.gaussian_window();
    const OverlapKernel kernel(phi.M, phi.M, phi.hbar);
    std::vector<GaussianState> shifted;
    shifted.reserve(static_cast<std::size_t>(pts));
    for (Index j = 0; j < pts; ++j) shifted.push_back(shifted_window(phi, sys.points.col(j)));
    parallel_for(static_cast<std::size_t>(pts), [&](std::size_t jj) {
      const auto j = static_cast<Index>(jj);
      for (Index i = j; i < pts; ++i) {
        const cplx v = kernel(shifted[j].center, shifted[j].phase, shifted[i].center,
                              shifted[i].phase);
        gram(i, j) = v;
        gram(j, i) = std::conj(v);
      }
    });
  } else {
    const CMat w = window_columns(sys, grid);
    gram = grid.weight() * (w.adjoint() * w);
  }
  return gram;
}

}  // namespace

Index GaborSystem::dim() const {
  return std::visit([](const auto& w) -> Index {
    if constexpr (std::is_same_v<std::decay_t<decltype(w)>, GaussianState>) {
      return w.dim();
    } else {
      return w.grid.n;
    }
  }, window);
}

const GaussianState& GaborSystem::gaussian_window() const {
  if (!gaussian()) throw DomainError("Gabor system has a sampled window");
  return std::get<GaussianState>(window);
}

GaborSystem make_system(const Window& window, const Lattice& lattice) {
  lattice.validate();
  GaborSystem sys{window, lattice_points(lattice), kHbarTF, lattice.radius};
  std::visit([&](const auto& w) { sys.hbar = w.hbar; }, window);
  if (sys.dim() != lattice.dim()) throw DimensionError("window and lattice dimensions differ");
  return sys;
}

GaborSystem make_system(const Window& window, const PointSet& points, double radius) {
  GaborSystem sys{window, points, kHbarTF, radius >= 0 ? radius : max_point_norm(points)};
  std::visit([&](const auto& w) { sys.hbar = w.hbar; }, window);
  if (points.rows() != 2 * sys.dim()) throw DimensionError("window and points dimensions differ");
  return sys;
}

Vec frame_terms(const GaborSystem& sys, const GaussianMixture& psi) {
  if (psi.terms.empty()) return Vec::Zero(sys.size());
  if (psi.dim() != sys.dim()) throw DimensionError("frame_terms: dimension mismatch");
  if (!sys.gaussian()) {
    const auto& sw = std::get<SampledWindow>(sys.window);
    return frame_terms(sys, sample(psi, sw.grid));
  }
  if (std::abs(psi.hbar() - sys.hbar) > 1e-14 * sys.hbar) {
    throw DomainError("frame_terms: state and system use different hbar");
  }
  const GaussianState& phi = sys.gaussian_window();
  std::vector<OverlapKernel> kernels;
  kernels.reserve(psi.terms.size());
  for (const auto& t : psi.terms) kernels.emplace_back(t.M, phi.M, sys.hbar);
  Vec out(sys.size());
  parallel_for(static_cast<std::size_t>(sys.size()), [&](std::size_t jj) {
    const auto j = static_cast<Index>(jj);
    const GaussianState g = shifted_window(phi, sys.points.col(j));
    cplx acc = 0.0;
    for (std::size_t k = 0; k < psi.terms.size(); ++k) {
      const auto& t = psi.terms[k];
      acc += psi.coeffs[k] * kernels[k](t.center, t.phase, g.center, g.phase);
    }
    out(j) = std::norm(acc);
  });
  return out;
}

Vec frame_terms(const GaborSystem& sys, const SampledWindow& psi) {
  if (psi.grid.n != sys.dim()) throw DimensionError("frame_terms: dimension mismatch");
  const CMat w = window_columns(sys, psi.grid);
  const CVec c = psi.grid.weight() * (w.adjoint() * psi.values);
  return c.cwiseAbs2();
}

double frame_sum(const GaborSystem& sys, const GaussianMixture& psi) {
  return frame_terms(sys, psi).sum();
}

double frame_sum(const GaborSystem& sys, const SampledWindow& psi) {
  return frame_terms(sys, psi).sum();
}

std::string to_string(BoundMethod m) {
  return m == BoundMethod::eig ? "eig" : "test-vectors";
}

BoundMethod parse_bound_method(const std::string& s) {
  if (s == "eig") return BoundMethod::eig;
  if (s == "test-vectors" || s == "test_vectors") return BoundMethod::test_vectors;
  throw DomainError("unknown frame-bound method '" + s + "'");
}

FrameConfig FrameConfig::defaults(double hbar) {
  if (!(hbar > 0)) throw DomainError("hbar must be positive");
  FrameConfig c;
  c.half_width = 10.0 * std::sqrt(2 * kPi * hbar);
  return c;
}

double default_radius(double hbar) {
  if (!(hbar > 0)) throw DomainError("hbar must be positive");
  return 8.0 * std::sqrt(2 * kPi * hbar);
}

CMat test_family(Index n, double hbar, const FrameConfig& cfg) {
  const Grid grid = cfg.grid(n);
  grid.validate();
  if (cfg.hermite_count < 0 || cfg.mixture_count < 0 ||
      cfg.hermite_count + cfg.mixture_count == 0) {
    throw DomainError("test family must contain at least one state");
  }
  CMat fam(grid.size(), cfg.hermite_count + cfg.mixture_count);
  if (cfg.hermite_count > 0) {
    fam.leftCols(cfg.hermite_count) = hermite_functions(grid, hbar, cfg.hermite_count).cast<cplx>();
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> centre(-cfg.half_width / 4, cfg.half_width / 4);
  std::uniform_real_distribution<double> wiggle(-0.3, 0.3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Index m = 0; m < cfg.mixture_count; ++m) {
    GaussianMixture mix;
    for (int k = 0; k < 3; ++k) {
      Mat a(n, n), b(n, n);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          a(i, j) = wiggle(rng);
          b(i, j) = wiggle(rng);
        }
      }
      const Mat re = 0.5 * (a + a.transpose());
      const Mat im = Mat::Identity(n, n) + 0.5 * b * b.transpose();
      CMat mm(n, n);
      mm.real() = re;
      mm.imag() = im;
      PhasePoint c(2 * n);
      for (Index i = 0; i < 2 * n; ++i) c(i) = centre(rng);
      mix.terms.push_back(make_gaussian(mm, c, hbar));
      mix.coeffs.emplace_back(gauss(rng), gauss(rng));
    }
    fam.col(cfg.hermite_count + m) = sample(mix, grid).normalized().values;
  }
  return fam;
}

FrameReport frame_bounds(const GaborSystem& sys, const FrameConfig& cfg) {
  const Index n = sys.dim();
  const Grid grid = sys.gaussian() ? cfg.grid(n) : std::get<SampledWindow>(sys.window).grid;
  grid.validate();
  if (sys.size() == 0) throw DomainError("frame_bounds: empty lattice");
  const double family = static_cast<double>(cfg.hermite_count + cfg.mixture_count);
  const double work = static_cast<double>(grid.size()) * static_cast<double>(sys.size()) * family;
  if (work > cfg.max_work) {
    throw ResourceError("frame_bounds: grid x lattice x family work " + std::to_string(work) +
                        " exceeds the cap");
  }
  FrameConfig used = cfg;
  used.half_width = grid.half_width;
  used.grid_points = grid.points;

  FrameReport rep;
  rep.method = cfg.method;
  rep.radius = sys.radius;
  rep.half_width = grid.half_width;
  rep.grid_points = grid.points;
  rep.lattice_size = sys.size();

  const CMat fam = test_family(n, sys.hbar, used);
  rep.family_size = fam.cols();
  const double hw = grid.weight();
  const CMat w = window_columns(sys, grid);
  const CMat coeff = hw * (w.adjoint() * fam);  // lattice x family
  const CMat frame_op = coeff.adjoint() * coeff;
  const CMat fam_gram = hw * (fam.adjoint() * fam);

  if (cfg.method == BoundMethod::test_vectors) {
    rep.a_est = std::numeric_limits<double>::infinity();
    rep.b_est = 0.0;
    for (Index k = 0; k < fam.cols(); ++k) {
      const double r = frame_op(k, k).real() / fam_gram(k, k).real();
      rep.a_est = std::min(rep.a_est, r);
      rep.b_est = std::max(rep.b_est, r);
    }
    rep.family_rank = fam.cols();
  } else {
    // Rayleigh-Ritz on an orthonormalized basis of the family span.
    Eigen::SelfAdjointEigenSolver<CMat> es(fam_gram);
    const Vec& lam = es.eigenvalues();
    const double cut = 1e-10 * lam.maxCoeff();
    std::vector<Index> keep;
    for (Index i = 0; i < lam.size(); ++i) {
      if (lam(i) > cut) keep.push_back(i);
    }
    CMat basis(fam.cols(), static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      basis.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(lam(keep[c]));
    }
    const CMat reduced = basis.adjoint() * frame_op * basis;
    Eigen::SelfAdjointEigenSolver<CMat> rr(0.5 * (reduced + reduced.adjoint()),
                                           Eigen::EigenvaluesOnly);
    rep.a_est = std::max(0.0, rr.eigenvalues()(0));
    rep.family_rank = basis.cols();

    Eigen::SelfAdjointEigenSolver<CMat> gs(gram_matrix(sys, grid), Eigen::EigenvaluesOnly);
    rep.b_est = gs.eigenvalues().maxCoeff();
  }
  rep.ratio = rep.a_est > 0 ? rep.b_est / rep.a_est : std::numeric_limits<double>::infinity();
  rep.is_frame = rep.a_est > cfg.frame_floor * rep.b_est;

  // Overlaps decay like exp(-d^2 / 2 hbar) with phase-space distance d; the family
  // reaches out to roughly the outermost oscillator turning point.
  const double reach = std::sqrt((2.0 * static_cast<double>(cfg.hermite_count) + 1.0) * sys.hbar);
  const double gap = std::max(0.0, sys.radius - std::max(reach, grid.half_width / 4));
  rep.residual_estimate = std::exp(-gap * gap / (2 * sys.hbar));
  return rep;
}

std::vector<bool> gaussian_frame_criterion(const Vec& alpha, const Vec& beta, double hbar) {
  if (alpha.size() != beta.size() || alpha.size() == 0) {
    throw DimensionError("gaussian_frame_criterion: alpha and beta must have equal length");
  }
  if (!(hbar > 0)) throw DomainError("gaussian_frame_criterion: hbar must be positive");
  std::vector<bool> out(static_cast<std::size_t>(alpha.size()));
  for (Index j = 0; j < alpha.size(); ++j) {
    if (!(alpha(j) > 0) || !(beta(j) > 0)) {
      throw DomainError("gaussian_frame_criterion: spacings must be positive");
    }
    out[static_cast<std::size_t>(j)] = alpha(j) * beta(j) < 2 * kPi * hbar;
  }
  return out;
}

double SumPair::deviation() const { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

SumPair covariance_check(const GaborSystem& sys, const Mat& S, const GaussianMixture& psi) {
  const GaussianState& phi = sys.gaussian_window();
  if (S.rows() != 2 * sys.dim() || S.cols() != S.rows()) {
    throw DimensionError("covariance_check: S has the wrong shape");
  }
  if (!is_symplectic(S)) throw DomainError("covariance_check: S is not symplectic");
  const GaborSystem moved =
      make_system(metaplectic_apply(S, phi), PointSet(S * sys.points), sys.radius);
  const Mat s_inv = symplectic_inverse(S);
  return {frame_sum(moved, psi), frame_sum(sys, metaplectic_apply(s_inv, psi))};
}

SumPair translation_check(const GaborSystem& sys, const PhasePoint& z0, const PhasePoint& z1,
                          const GaussianMixture& psi) {
  const GaussianState& phi = sys.gaussian_window();
  const PointSet moved_pts = sys.points.colwise() + z1;
  const GaborSystem moved = make_system(heisenberg_weyl_apply(z0, phi), moved_pts, sys.radius);
  return {frame_sum(moved, psi), frame_sum(sys, heisenberg_weyl_apply(PhasePoint(-(z0 + z1)), psi))};
}

SumPair rescaling_check(const GaborSystem& sys, double hbar, const GaussianMixture& psi) {
  const GaussianState& phi = sys.gaussian_window();
  const double s = std::sqrt(hbar / sys.hbar);
  GaussianMixture psi_h;
  psi_h.coeffs = psi.coeffs;
  for (const auto& t : psi.terms) psi_h.terms.push_back(rescale_window(t, hbar));
  const GaborSystem moved =
      make_system(rescale_window(phi, hbar), PointSet(s * sys.points), s * sys.radius);
  return {frame_sum(moved, psi_h), frame_sum(sys, psi)};
}

SumPair planck_dilation_check(const GaborSystem& sys, double hbar, const GaussianMixture& psi) {
  const GaussianState& phi = sys.gaussian_window();
  const Index n = sys.dim();
  Mat d = Mat::Identity(2 * n, 2 * n);
  d.bottomRightCorner(n, n) *= hbar / sys.hbar;
  GaussianMixture psi_h;
  psi_h.coeffs = psi.coeffs;
  for (const auto& t : psi.terms) psi_h.terms.push_back(reinterpret_hbar(t, hbar));
  const GaborSystem moved = make_system(reinterpret_hbar(phi, hbar), PointSet(d * sys.points));
  return {frame_sum(moved, psi_h), frame_sum(sys, psi)};
}

}  // namespace gabor
