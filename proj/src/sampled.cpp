#include "gabor/sampled.hpp"

#include <cmath>
#include <vector>

namespace gabor {

namespace {

const cplx kI{0.0, 1.0};

void check_grids(const SampledWindow& a, const SampledWindow& b) {
  if (!(a.grid == b.grid)) throw DomainError("sampled windows live on different grids");
}

// Multi-index of a flat grid index, last axis fastest.
std::vector<Index> unflatten(const Grid& g, Index flat) {
  std::vector<Index> idx(g.n);
  for (Index a = g.n - 1; a >= 0; --a) {
    idx[a] = flat % g.points;
    flat /= g.points;
  }
  return idx;
}

Index flatten(const Grid& g, const std::vector<Index>& idx) {
  Index flat = 0;
  for (Index a = 0; a < g.n; ++a) flat = flat * g.points + idx[a];
  return flat;
}

Index wrap(Index i, Index n) { return ((i % n) + n) % n; }

// Grid index shift nearest to x, per axis.
std::vector<Index> snap_shift(const Grid& g, const Vec& x, double& residual) {
  const double h = g.spacing();
  std::vector<Index> k(g.n);
  Vec applied(g.n);
  for (Index a = 0; a < g.n; ++a) {
    if (std::abs(x(a)) > g.half_width) {
      throw DomainError("shift exceeds the sampling grid half-width");
    }
    k[a] = static_cast<Index>(std::llround(x(a) / h));
    applied(a) = static_cast<double>(k[a]) * h;
  }
  residual = (x - applied).norm();
  return k;
}

CVec shifted_values(const SampledWindow& w, const std::vector<Index>& k) {
  const Grid& g = w.grid;
  CVec out(g.size());
  for (Index f = 0; f < g.size(); ++f) {
    auto idx = unflatten(g, f);
    for (Index a = 0; a < g.n; ++a) idx[a] = wrap(idx[a] - k[a], g.points);
    out(f) = w.values(flatten(g, idx));
  }
  return out;
}

}  // namespace

Index Grid::size() const {
  Index s = 1;
  for (Index a = 0; a < n; ++a) s *= points;
  return s;
}

double Grid::weight() const { return std::pow(spacing(), static_cast<double>(n)); }

Vec Grid::point(Index flat) const {
  const auto idx = unflatten(*this, flat);
  Vec x(n);
  for (Index a = 0; a < n; ++a) x(a) = -half_width + static_cast<double>(idx[a]) * spacing();
  return x;
}

Mat Grid::coordinates() const {
  Mat xs(n, size());
  for (Index f = 0; f < size(); ++f) xs.col(f) = point(f);
  return xs;
}

void Grid::validate() const {
  if (n < 1) throw DimensionError("grid: dimension must be >= 1");
  if (points < 2) throw DomainError("grid: need at least 2 points per axis");
  if (!(half_width > 0)) throw DomainError("grid: half-width must be positive");
  if (std::pow(static_cast<double>(points), static_cast<double>(n)) > 5e7) {
    throw ResourceError("grid: too many sample points");
  }
}

double SampledWindow::norm() const {
  return std::sqrt(values.squaredNorm() * grid.weight());
}

SampledWindow SampledWindow::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0)) throw DomainError("cannot normalize a zero sampled window");
  SampledWindow out = *this;
  out.values /= nrm;
  return out;
}

SampledWindow sample(const GaussianState& g, const Grid& grid) {
  return sample(GaussianMixture(g), grid);
}

SampledWindow sample(const GaussianMixture& g, const Grid& grid) {
  grid.validate();
  if (grid.n != g.dim()) throw DimensionError("sample: grid and state dimensions differ");
  SampledWindow w{grid, CVec(grid.size()), g.hbar(), 0.0};
  for (Index f = 0; f < grid.size(); ++f) w.values(f) = g(grid.point(f));
  return w;
}

cplx inner_product(const SampledWindow& a, const SampledWindow& b) {
  check_grids(a, b);
  return b.values.dot(a.values) * a.grid.weight();
}

SampledWindow heisenberg_weyl_apply(const PhasePoint& z0, const SampledWindow& w) {
  const Index n = w.grid.n;
  if (z0.size() != 2 * n) throw DimensionError("heisenberg_weyl_apply: dimension mismatch");
  double residual = 0.0;
  const auto k = snap_shift(w.grid, z0.head(n), residual);
  Vec x0(n);
  for (Index a = 0; a < n; ++a) x0(a) = static_cast<double>(k[a]) * w.grid.spacing();
  const Vec p0 = z0.tail(n);
  SampledWindow out{w.grid, shifted_values(w, k), w.hbar, std::max(w.shift_residual, residual)};
  for (Index f = 0; f < w.grid.size(); ++f) {
    const double arg = (p0.dot(w.grid.point(f)) - 0.5 * p0.dot(x0)) / w.hbar;
    out.values(f) *= std::exp(kI * arg);
  }
  return out;
}

double generating_function_scale(const GeneratingFunctionData& data) {
  return std::max({data.P.cwiseAbs().maxCoeff(), data.L.cwiseAbs().maxCoeff(),
                   data.Q.cwiseAbs().maxCoeff()});
}

SampledWindow quadratic_fourier_apply(const GeneratingFunctionData& data,
                                      const SampledWindow& w, double hbar) {
  data.validate();
  if (data.L.rows() != 1 || w.grid.n != 1) {
    throw DimensionError("quadratic_fourier_apply: only n = 1 is supported");
  }
  if (!(hbar > 0)) throw DomainError("quadratic_fourier_apply: hbar must be positive");
  const double half = w.grid.half_width;
  const double needed = 4.0 * half * half * generating_function_scale(data) / (kPi * hbar);
  if (static_cast<double>(w.grid.points) < needed) {
    throw ResolutionError("quadratic_fourier_apply: grid of " +
                          std::to_string(w.grid.points) + " points cannot resolve the kernel; need " +
                          std::to_string(static_cast<long>(std::ceil(needed))));
  }
  const double p = data.P(0, 0), l = data.L(0, 0), q = data.Q(0, 0);
  const Index npts = w.grid.points;
  const double h = w.grid.spacing();
  const cplx prefactor = std::pow(kI, data.maslov) * std::sqrt(std::abs(l)) *
                         std::exp(-kI * (kPi / 4)) / std::sqrt(2 * kPi * hbar) * h;
  SampledWindow out{w.grid, CVec(npts), hbar, w.shift_residual};
  std::vector<double> xs(npts);
  for (Index j = 0; j < npts; ++j) xs[j] = -half + static_cast<double>(j) * h;
  parallel_for(static_cast<std::size_t>(npts), [&](std::size_t ai) {
    const double x = xs[ai];
    cplx acc = 0.0;
    for (Index b = 0; b < npts; ++b) {
      const double xp = xs[b];
      const double wgen = 0.5 * p * x * x - l * x * xp + 0.5 * q * xp * xp;
      acc += std::exp(kI * (wgen / hbar)) * w.values(b);
    }
    out.values(static_cast<Index>(ai)) = prefactor * acc;
  });
  return out;
}

cplx stft(const SampledWindow& psi, const SampledWindow& window, const PhasePoint& z) {
  check_grids(psi, window);
  const Index n = psi.grid.n;
  if (z.size() != 2 * n) throw DimensionError("stft: dimension mismatch");
  double residual = 0.0;
  const auto k = snap_shift(psi.grid, z.head(n), residual);
  const CVec shifted = shifted_values(window, k);
  const Vec p = z.tail(n);
  cplx acc = 0.0;
  for (Index f = 0; f < psi.grid.size(); ++f) {
    const double arg = -2 * kPi * p.dot(psi.grid.point(f));
    acc += std::exp(kI * arg) * psi.values(f) * std::conj(shifted(f));
  }
  return acc * psi.grid.weight();
}

Mat hermite_functions(const Grid& grid, double hbar, Index count) {
  grid.validate();
  if (count < 1) throw DomainError("hermite_functions: count must be >= 1");
  if (!(hbar > 0)) throw DomainError("hermite_functions: hbar must be positive");
  // One-dimensional table by the normalized three-term recurrence.
  Index max_degree = count - 1;
  const Index npts = grid.points;
  Mat table(npts, max_degree + 1);
  const double h = grid.spacing();
  const double norm0 = std::pow(kPi * hbar, -0.25);
  for (Index j = 0; j < npts; ++j) {
    const double x = -grid.half_width + static_cast<double>(j) * h;
    const double u = x / std::sqrt(hbar);
    table(j, 0) = norm0 * std::exp(-0.5 * u * u);
    if (max_degree >= 1) table(j, 1) = std::sqrt(2.0) * u * table(j, 0);
    for (Index k = 1; k < max_degree; ++k) {
      const double kk = static_cast<double>(k);
      table(j, k + 1) = std::sqrt(2.0 / (kk + 1)) * u * table(j, k) -
                        std::sqrt(kk / (kk + 1)) * table(j, k - 1);
    }
  }
  if (grid.n == 1) return table;

  // Multi-indices of increasing total degree until `count` are collected.
  std::vector<std::vector<Index>> multi;
  for (Index total = 0; static_cast<Index>(multi.size()) < count; ++total) {
    std::vector<Index> idx(grid.n, 0);
    std::function<void(Index, Index)> rec = [&](Index axis, Index left) {
      if (static_cast<Index>(multi.size()) >= count) return;
      if (axis == grid.n - 1) {
        idx[axis] = left;
        if (left < npts) multi.push_back(idx);
        return;
      }
      for (Index d = left; d >= 0; --d) {
        idx[axis] = d;
        rec(axis + 1, left - d);
      }
    };
    rec(0, total);
  }
  Mat out(grid.size(), count);
  for (Index f = 0; f < grid.size(); ++f) {
    const auto idx = unflatten(grid, f);
    for (Index c = 0; c < count; ++c) {
      double v = 1.0;
      for (Index a = 0; a < grid.n; ++a) {
        const Index deg = multi[c][a];
        v *= deg <= max_degree ? table(idx[a], deg) : 0.0;
      }
      out(f, c) = v;
    }
  }
  return out;
}

}  // namespace gabor
