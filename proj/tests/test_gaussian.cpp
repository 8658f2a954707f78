#include <doctest.h>

#include <random>

#include "gabor/gaussian.hpp"
#include "gabor/sampled.hpp"
#include "gabor/symplectic.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {

GaussianState sample_state(double hbar) {
  CMat m(1, 1);
  m(0, 0) = cplx(0.4, 1.7);
  PhasePoint c(2);
  c << 0.6, -0.9;
  return make_gaussian(m, c, hbar, 0.3);
}

double max_gap(const oracle::Fn1& f, const oracle::Fn1& g, double L = 8.0) {
  double worst = 0.0;
  for (double x = -L; x <= L; x += 0.173) worst = std::max(worst, std::abs(f(x) - g(x)));
  return worst;
}

}  // namespace

TEST_CASE("pointwise values match the defining formula") {
  const GaussianState g = sample_state(0.3);
  const auto ref = oracle::gaussian_fn(g);
  for (double x : {-1.0, 0.0, 0.6, 2.2}) {
    CHECK(std::abs(g(Vec::Constant(1, x)) - ref(x)) < 1e-13);
  }
  CHECK_THROWS_AS(make_gaussian(CMat::Constant(1, 1, cplx(1.0, -1.0)), Vec::Zero(2), 1.0),
                  DomainError);
}

TEST_CASE("closed-form inner products against quadrature") {
  std::mt19937_64 rng(11);
  for (double hbar : {1.0 / (2 * kPi), 0.5, 1.0}) {
    for (int k = 0; k < 4; ++k) {
      const GaussianMixture a = oracle::random_mixture(rng, 1, hbar, 1.0);
      const GaussianMixture b = oracle::random_mixture(rng, 1, hbar, 1.0);
      const cplx ref = oracle::inner(oracle::mixture_fn(a), oracle::mixture_fn(b), 14.0, 60000);
      CHECK(std::abs(inner_product(a, b) - ref) < 1e-10);
    }
  }
  const GaussianState g = sample_state(0.2);
  CHECK(std::abs(inner_product(g, g) - 1.0) < 1e-13);
}

TEST_CASE("two-dimensional overlap factorizes over axes") {
  const double hbar = 0.4;
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = cplx(0.2, 1.3);
  m(1, 1) = cplx(-0.5, 0.8);
  CMat m2 = CMat::Zero(2, 2);
  m2(0, 0) = cplx(0.0, 0.9);
  m2(1, 1) = cplx(0.3, 1.1);
  PhasePoint c(4), c2(4);
  c << 0.3, -0.2, 0.5, 0.1;
  c2 << -0.1, 0.4, 0.0, -0.6;
  const GaussianState a = make_gaussian(m, c, hbar), b = make_gaussian(m2, c2, hbar);
  auto axis = [&](const CMat& mm, const PhasePoint& cc, int i) {
    return [=](double x) { return oracle::gaussian_1d(mm(i, i), cc(i), cc(2 + i), 0.0, hbar, x); };
  };
  cplx ref = 1.0;
  for (int i = 0; i < 2; ++i) ref *= oracle::inner(axis(m, c, i), axis(m2, c2, i));
  CHECK(std::abs(inner_product(a, b) - ref) < 1e-10);
}

TEST_CASE("Heisenberg-Weyl operator on a Gaussian") {
  const double hbar = 0.35;
  const GaussianState g = sample_state(hbar);
  PhasePoint z(2);
  z << -1.1, 0.7;
  const auto lhs = oracle::gaussian_fn(heisenberg_weyl_apply(z, g));
  const auto rhs = oracle::shift(oracle::gaussian_fn(g), z(0), z(1), hbar);
  CHECK(max_gap(lhs, rhs) < 1e-13);

  // T(z)T(z') = e^{i sigma(z,z')/2hbar} T(z + z')
  PhasePoint w(2);
  w << 0.4, 0.2;
  const GaussianState two = heisenberg_weyl_apply(z, heisenberg_weyl_apply(w, g));
  const GaussianState one = heisenberg_weyl_apply(PhasePoint(z + w), g);
  const cplx ratio = inner_product(two, one);
  CHECK(std::abs(ratio - std::exp(cplx(0, symplectic_form(z, w) / (2 * hbar)))) < 1e-12);
}

TEST_CASE("metaplectic lifts of the generators") {
  const double hbar = 0.45;
  const GaussianState g = sample_state(hbar);
  const auto f = oracle::gaussian_fn(g);

  SUBCASE("shear multiplies by a chirp") {
    const double p = 0.8;
    const auto lhs = oracle::gaussian_fn(metaplectic_apply(shear(Mat::Constant(1, 1, p)), g));
    auto rhs = [&](double x) { return std::exp(cplx(0, -p * x * x / (2 * hbar))) * f(x); };
    CHECK(max_gap(lhs, rhs) < 1e-13);
  }
  SUBCASE("dilation rescales x") {
    const double l = 1.7;
    const auto lhs = oracle::gaussian_fn(metaplectic_apply(dilation(Mat::Constant(1, 1, l)), g));
    auto rhs = [&](double x) { return std::sqrt(l) * f(l * x); };
    CHECK(max_gap(lhs, rhs) < 1e-13);
  }
  SUBCASE("J is the hbar-Fourier transform") {
    const auto lhs = oracle::gaussian_fn(metaplectic_apply(standard_J(1), g));
    // (2 pi i hbar)^{-1/2} int e^{-i x x'/hbar} f(x') dx'
    auto rhs = [&](double x) {
      const cplx pre = std::pow(cplx(0, 2 * kPi * hbar), -0.5);
      return pre * oracle::inner(f, [&](double y) { return std::exp(cplx(0, x * y / hbar)); }, 12.0, 20000);
    };
    CHECK(max_gap(lhs, rhs, 4.0) < 1e-9);
  }
}

TEST_CASE("siegel action") {
  const SiegelMatrix i1 = SiegelMatrix::identity(1);
  const Mat p = Mat::Constant(1, 1, 0.6);
  CHECK(std::abs(siegel_action(shear(p), i1).matrix()(0, 0) - cplx(-0.6, 1.0)) < 1e-15);
  CHECK(std::abs(siegel_action(rotation(1, 0.9), i1).matrix()(0, 0) - cplx(0, 1)) < 1e-14);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const SiegelMatrix m(oracle::random_siegel(rng, 2));
    const Mat s = siegel_to_symplectic(m);
    CHECK(is_symplectic(s));
    CHECK((siegel_action(s, SiegelMatrix::identity(2)).matrix() - m.matrix()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(SiegelMatrix(CMat::Constant(1, 1, cplx(0, -1))), DomainError);
}

TEST_CASE("Planck constant changes") {
  const GaussianState g = sample_state(0.2);
  const auto f = oracle::gaussian_fn(g);
  const double h2 = 0.9, r = h2 / 0.2;

  const auto same = oracle::gaussian_fn(reinterpret_hbar(g, h2));
  CHECK(max_gap(same, f) < 1e-12);

  const auto scaled = oracle::gaussian_fn(rescale_window(g, h2));
  auto ref = [&](double x) { return std::pow(r, -0.25) * f(x / std::sqrt(r)); };
  CHECK(max_gap(scaled, ref, 12.0) < 1e-12);
}

TEST_CASE("sampling and Hermite functions") {
  const double hbar = 1.0 / (2 * kPi);
  const Grid grid{1, 1024, 10.0};
  const Mat h = hermite_functions(grid, hbar, 20);
  const Mat gram = grid.weight() * h.transpose() * h;
  CHECK((gram - Mat::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
  // h_0 is the standard Gaussian
  const SampledWindow s0 = sample(standard_gaussian(1, hbar), grid);
  CHECK((s0.values.real() - h.col(0)).cwiseAbs().maxCoeff() < 1e-12);

  const GaussianState g = sample_state(hbar);
  PhasePoint z(2);
  z << grid.spacing() * 13, 0.5;
  const SampledWindow moved = heisenberg_weyl_apply(z, sample(g, grid));
  const SampledWindow ref = sample(heisenberg_weyl_apply(z, g), grid);
  CHECK((moved.values - ref.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(moved.shift_residual < 1e-12);
}

TEST_CASE("quadratic Fourier transform of a Gaussian") {
  const double hbar = 0.25;
  const Grid grid{1, 1024, 10.0};
  const GaussianState g = sample_state(hbar);
  GeneratingFunctionData w{Mat::Constant(1, 1, 0.4), Mat::Constant(1, 1, 1.3),
                           Mat::Constant(1, 1, -0.2), 0};
  const SampledWindow out = quadratic_fourier_apply(w, sample(g, grid), hbar);
  const SampledWindow ref = sample(metaplectic_apply(from_generating_function(w), g), grid);
  CHECK(std::abs(std::abs(inner_product(out, ref)) - 1.0) < 1e-6);

  GeneratingFunctionData steep = w;
  steep.P(0, 0) = 500.0;
  CHECK_THROWS_AS(quadratic_fourier_apply(steep, sample(g, grid), hbar), ResolutionError);
}
