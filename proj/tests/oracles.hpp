#pragma once

// Brute-force references used by the tests. Nothing here calls the closed forms in
// the library; Gaussians are evaluated from their defining formula and integrals are
// plain Riemann sums on a fine grid.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "gabor/core.hpp"
#include "gabor/gaussian.hpp"
#include "gabor/symplectic.hpp"

namespace oracle {

using gabor::cplx;
using gabor::Index;
using gabor::Mat;
using gabor::Vec;

using Fn1 = std::function<cplx(double)>;

/// e^{i phase/hbar} e^{i(p0 x - p0 x0/2)/hbar} g0(x - x0) with
/// g0(y) = (Im m / pi hbar)^{1/4} exp(i m y^2 / 2 hbar), n = 1.
inline cplx gaussian_1d(cplx m, double x0, double p0, double phase, double hbar, double x) {
  const cplx i(0.0, 1.0);
  const double y = x - x0;
  const double norm = std::pow(m.imag() / (gabor::kPi * hbar), 0.25);
  return norm * std::exp(i * (phase + p0 * x - 0.5 * p0 * x0) / hbar + i * m * y * y / (2.0 * hbar));
}

inline Fn1 gaussian_fn(const gabor::GaussianState& g) {
  const cplx m = g.M.matrix()(0, 0);
  const double x0 = g.center(0), p0 = g.center(1), ph = g.phase, h = g.hbar;
  return [=](double x) { return gaussian_1d(m, x0, p0, ph, h, x); };
}

inline Fn1 mixture_fn(const gabor::GaussianMixture& g) {
  std::vector<Fn1> fs;
  for (const auto& t : g.terms) fs.push_back(gaussian_fn(t));
  const auto c = g.coeffs;
  return [fs, c](double x) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < fs.size(); ++k) acc += c[k] * fs[k](x);
    return acc;
  };
}

/// Midpoint sum of f conj(g) over [-L, L].
inline cplx inner(const Fn1& f, const Fn1& g, double L = 12.0, Index N = 40000) {
  const double h = 2.0 * L / static_cast<double>(N);
  cplx acc = 0.0;
  for (Index j = 0; j < N; ++j) {
    const double x = -L + (static_cast<double>(j) + 0.5) * h;
    acc += f(x) * std::conj(g(x));
  }
  return acc * h;
}

/// (T(z) f)(x) with z = (x0, p0), straight from the definition.
inline Fn1 shift(const Fn1& f, double x0, double p0, double hbar) {
  return [=](double x) {
    return std::exp(cplx(0.0, (p0 * x - 0.5 * p0 * x0) / hbar)) * f(x - x0);
  };
}

/// Random 2n x 2n symplectic matrix as a product of shears, dilations and J.
inline Mat random_symplectic(std::mt19937_64& rng, Index n, int factors = 4) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat s = Mat::Identity(2 * n, 2 * n);
  for (int f = 0; f < factors; ++f) {
    Mat p(n, n), l(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        p(i, j) = u(rng);
        l(i, j) = 0.3 * u(rng);
      }
    }
    p = 0.5 * (p + p.transpose()).eval();
    l += Mat::Identity(n, n);
    Mat shear = Mat::Identity(2 * n, 2 * n);
    shear.bottomLeftCorner(n, n) = -p;
    Mat dil = Mat::Zero(2 * n, 2 * n);
    dil.topLeftCorner(n, n) = l.inverse();
    dil.bottomRightCorner(n, n) = l.transpose();
    s = shear * dil * s;
    if (u(rng) > 0.0) s = gabor::standard_J(n) * s;
  }
  return s;
}

/// Random point of the Siegel half-space near iI.
inline gabor::CMat random_siegel(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat a(n, n), b(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      a(i, j) = u(rng);
      b(i, j) = 0.7 * u(rng);
    }
  }
  gabor::CMat m(n, n);
  m.real() = 0.5 * (a + a.transpose());
  m.imag() = 0.5 * Mat::Identity(n, n) + b * b.transpose();
  return m;
}

inline gabor::GaussianMixture random_mixture(std::mt19937_64& rng, Index n, double hbar, double spread,
                                             int terms = 2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  gabor::GaussianMixture g;
  for (int k = 0; k < terms; ++k) {
    Vec c(2 * n);
    for (Index i = 0; i < 2 * n; ++i) c(i) = spread * u(rng);
    g.terms.push_back(gabor::make_gaussian(random_siegel(rng, n), c, hbar, u(rng)));
    g.coeffs.emplace_back(u(rng), u(rng));
  }
  return g.normalized();
}

/// Ridders' extrapolation of a difference estimator D(h) whose error is a series in h^2.
/// Returns the estimate and its error.
inline std::pair<double, double> ridders_from(const std::function<double(double)>& D, double h) {
  constexpr int kTab = 12;
  constexpr double kShrink = 1.4, kShrink2 = kShrink * kShrink;
  double a[kTab][kTab];
  a[0][0] = D(h);
  double best = a[0][0], err = INFINITY;
  for (int i = 1; i < kTab; ++i) {
    h /= kShrink;
    a[0][i] = D(h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1);
      fac *= kShrink2;
      const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2 * err) break;
  }
  return {best, err};
}

/// Best of several starting steps, since too large a start stops the tableau early.
inline double ridders(const std::function<double(double)>& D) {
  std::pair<double, double> best{0.0, INFINITY};
  for (double h : {0.4, 0.1, 0.025, 0.006}) {
    const auto r = ridders_from(D, h);
    if (r.second < best.second) best = r;
  }
  return best.first;
}

/// df/dz_i at z.
inline double fd_partial(const std::function<double(const Vec&)>& f, const Vec& z, Index i) {
  return ridders([&](double h) {
    Vec a = z, b = z;
    a(i) += h;
    b(i) -= h;
    return (f(a) - f(b)) / (2 * h);
  });
}

/// d^2 f / dz_i dz_j at z.
inline double fd_second(const std::function<double(const Vec&)>& f, const Vec& z, Index i, Index j) {
  return ridders([&](double h) {
    auto at = [&](double a, double b) {
      Vec w = z;
      w(i) += a;
      w(j) += b;
      return f(w);
    };
    if (i == j) return (at(h, 0) - 2 * f(z) + at(-h, 0)) / (h * h);
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
  });
}

/// Largest |a - b| over rows of two sorted sequences.
inline double sorted_gap(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() != b.size()) return INFINITY;
  double g = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) g = std::max(g, std::abs(a[k] - b[k]));
  return g;
}

}  // namespace oracle
