#include <doctest.h>

#include <random>

#include "gabor/frames.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {

constexpr double kH = 1.0 / (2 * kPi);

GaborSystem square_system(double alpha, double beta, double radius, double hbar = kH) {
  return make_system(standard_gaussian(1, hbar),
                     separable_lattice(Vec::Constant(1, alpha), Vec::Constant(1, beta), radius));
}

// Exact bounds of the Gaussian frame for alpha beta = 1/N at hbar = 1/2pi. Walnut's
// representation makes S a multiplication by (1/beta) sum_n G_n(x) e^{2 pi i n theta}
// on each fibre, with G_n(x) = sum_k g(x - k alpha) g(x - n/beta - k alpha).
std::pair<double, double> walnut_bounds(double alpha, double beta) {
  auto g = [](double x) { return std::pow(2.0, 0.25) * std::exp(-kPi * x * x); };
  double lo = INFINITY, hi = 0.0;
  for (int ix = 0; ix < 200; ++ix) {
    const double x = alpha * ix / 200.0;
    std::vector<double> G;
    for (int n = 0; n <= 12; ++n) {
      double s = 0.0;
      for (int k = -60; k <= 60; ++k) s += g(x - k * alpha) * g(x - n / beta - k * alpha);
      G.push_back(s);
    }
    for (int it = 0; it <= 400; ++it) {
      const double th = it / 400.0;
      double v = G[0];
      for (int n = 1; n <= 12; ++n) v += 2.0 * G[n] * std::cos(2 * kPi * n * th);
      v /= beta;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

// sum over lattice points of |(psi | T(z) phi)|^2 with every overlap by quadrature
double brute_frame_sum(const GaborSystem& sys, const GaussianMixture& psi) {
  const auto f = oracle::mixture_fn(psi);
  const auto phi = oracle::gaussian_fn(sys.gaussian_window());
  double acc = 0.0;
  for (Index j = 0; j < sys.size(); ++j) {
    acc += std::norm(oracle::inner(f, oracle::shift(phi, sys.points(0, j), sys.points(1, j), sys.hbar),
                                   12.0, 8000));
  }
  return acc;
}

}  // namespace

TEST_CASE("frame sums against quadrature") {
  std::mt19937_64 rng(21);
  const GaborSystem sys = square_system(0.8, 0.9, 3.0);
  for (int k = 0; k < 3; ++k) {
    const GaussianMixture psi = oracle::random_mixture(rng, 1, kH, 0.5);
    const double ref = brute_frame_sum(sys, psi);
    CHECK(frame_sum(sys, psi) == doctest::Approx(ref).epsilon(1e-10));
    // quadrature path of the library
    const SampledWindow s = sample(psi, Grid{1, 2048, 10.0});
    CHECK(frame_sum(sys, s) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("frame sums ignore enumeration order and grow with R") {
  std::mt19937_64 rng(2);
  const GaussianMixture psi = oracle::random_mixture(rng, 1, kH, 1.0);
  const GaborSystem sys = square_system(0.9, 0.9, 4.0);
  PointSet rev = sys.points.rowwise().reverse();
  const GaborSystem rsys = make_system(sys.window, rev, sys.radius);
  CHECK(frame_sum(rsys, psi) == doctest::Approx(frame_sum(sys, psi)).epsilon(1e-13));

  double last = 0.0;
  for (double r : {1.0, 2.0, 3.0, 5.0, 8.0}) {
    const double s = frame_sum(square_system(0.9, 0.9, r), psi);
    CHECK(s >= last);
    last = s;
  }
}

TEST_CASE("criterion") {
  const auto v = gaussian_frame_criterion((Vec(2) << 0.9, 1.2).finished(),
                                          (Vec(2) << 1.0, 0.9).finished(), kH);
  CHECK(v == std::vector<bool>{true, false});
  CHECK(gaussian_frame_criterion(Vec::Constant(1, 1.0), Vec::Constant(1, 1.0), kH)[0] == false);
  CHECK_THROWS(gaussian_frame_criterion(Vec::Constant(1, -1.0), Vec::Constant(1, 1.0), kH));
}

TEST_CASE("bounds against the Walnut oracle") {
  const FrameConfig cfg = FrameConfig::defaults(kH);
  for (auto [alpha, beta] : {std::pair{std::sqrt(0.5), std::sqrt(0.5)}, std::pair{1.0, 0.5},
                             std::pair{0.5, 0.5}, std::pair{1 / std::sqrt(3.0), 1 / std::sqrt(3.0)}}) {
    CAPTURE(alpha);
    CAPTURE(beta);
    const auto [lo, hi] = walnut_bounds(alpha, beta);
    const FrameReport r = frame_bounds(square_system(alpha, beta, default_radius(kH)), cfg);
    CHECK(r.is_frame);
    // finite lattice and finite family: estimates sit just inside the exact interval
    CHECK(r.a_est == doctest::Approx(lo).epsilon(0.02));
    CHECK(r.b_est == doctest::Approx(hi).epsilon(0.02));
    CHECK(r.a_est >= lo * (1 - 1e-9));
    CHECK(r.b_est <= hi * (1 + 1e-9));
  }
}

TEST_CASE("verdicts follow the criterion") {
  const FrameConfig cfg = FrameConfig::defaults(kH);
  for (double ab : {0.6, 0.8, 0.95, 1.05, 1.3}) {
    const FrameReport r = frame_bounds(square_system(std::sqrt(ab), std::sqrt(ab), default_radius(kH)), cfg);
    CAPTURE(ab);
    CHECK(r.is_frame == (ab < 1.0));
  }
}

TEST_CASE("report monotonicity") {
  const GaborSystem sys = square_system(0.9, 0.9, default_radius(kH));
  FrameConfig small = FrameConfig::defaults(kH);
  small.hermite_count = 32;
  small.mixture_count = 8;
  FrameConfig big = small;
  big.hermite_count = 96;
  const FrameReport a = frame_bounds(sys, small), b = frame_bounds(sys, big);
  CHECK(b.a_est <= a.a_est * (1 + 1e-12));
  CHECK(b.family_size > a.family_size);

  const FrameReport r1 = frame_bounds(square_system(0.9, 0.9, 4.0), small);
  const FrameReport r2 = frame_bounds(square_system(0.9, 0.9, 6.0), small);
  CHECK(r2.b_est >= r1.b_est);
}

TEST_CASE("test-vector method brackets the eig method") {
  const GaborSystem sys = square_system(0.9, 0.9, default_radius(kH));
  FrameConfig cfg = FrameConfig::defaults(kH);
  const FrameReport eig = frame_bounds(sys, cfg);
  cfg.method = BoundMethod::test_vectors;
  const FrameReport tv = frame_bounds(sys, cfg);
  CHECK(tv.a_est >= eig.a_est * (1 - 1e-9));
  CHECK(tv.b_est <= eig.b_est * (1 + 1e-9));
}

TEST_CASE("seeded family is reproducible") {
  FrameConfig cfg = FrameConfig::defaults(kH);
  cfg.hermite_count = 4;
  cfg.mixture_count = 6;
  const CMat a = test_family(1, kH, cfg), b = test_family(1, kH, cfg);
  CHECK(a == b);
  cfg.seed = 9;
  CHECK((test_family(1, kH, cfg) - a).norm() > 1e-3);
}

TEST_CASE("matched pairs agree term by term") {
  std::mt19937_64 rng(8);
  const GaborSystem sys = square_system(0.9, 0.8, 5.0);
  const GaussianMixture psi = oracle::random_mixture(rng, 1, kH, 1.0);
  const Mat s = oracle::random_symplectic(rng, 1, 2);
  const GaborSystem moved = make_system(metaplectic_apply(s, sys.gaussian_window()), PointSet(s * sys.points));
  const Vec lhs = frame_terms(moved, psi);
  const Vec rhs = frame_terms(sys, metaplectic_apply(symplectic_inverse(s), psi));
  CHECK(oracle::sorted_gap({lhs.data(), lhs.data() + lhs.size()}, {rhs.data(), rhs.data() + rhs.size()}) < 1e-12);

  CHECK(covariance_check(sys, standard_J(1), psi).deviation() < 1e-12);
  CHECK(covariance_check(sys, rotation(1, 0.7), psi).deviation() < 1e-12);
  PhasePoint z0(2), z1(2);
  z0 << 1.0, 0.0;
  z1 << 0.3, -0.2;
  CHECK(translation_check(sys, z0, Vec::Zero(2), psi).deviation() < 1e-12);
  CHECK(translation_check(sys, Vec::Zero(2), z1, psi).deviation() < 1e-12);
  CHECK(rescaling_check(sys, 1.0, psi).deviation() < 1e-12);
  CHECK(rescaling_check(sys, 0.05, psi).deviation() < 1e-12);
  CHECK(planck_dilation_check(sys, 0.3, psi).deviation() < 1e-12);
  CHECK_THROWS_AS(covariance_check(sys, Mat::Identity(2, 2) * 2.0, psi), DomainError);
}
