// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gabor/deformation.hpp"
#include "gabor/expression.hpp"
#include "gabor/reconstruction.hpp"
#include "gabor/sampled.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {

constexpr double kH = 1.0 / (2 * kPi);

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PhasePoint pt(double x, double p) { return (PhasePoint(2) << x, p).finished(); }

GaborSystem square_system(double ab, double radius, double hbar = kH, Index n = 1) {
  const double s = std::sqrt(ab);
  return make_system(standard_gaussian(n, hbar), separable_lattice(Vec::Constant(n, s), Vec::Constant(n, s), radius));
}

// 1
Verdict frame_threshold() {
  const FrameConfig cfg = FrameConfig::defaults(kH);
  bool match = true;
  double r081 = 0, r11025 = 0;
  std::string d;
  for (double ab : {0.36, 0.64, 0.81, 0.9025, 1.1025, 1.44}) {
    const FrameReport r = frame_bounds(square_system(ab, default_radius(kH)), cfg);
    const bool expect = gaussian_frame_criterion(Vec::Constant(1, std::sqrt(ab)), Vec::Constant(1, std::sqrt(ab)), kH)[0];
    match = match && (r.is_frame == expect);
    if (ab == 0.81) r081 = r.a_est / r.b_est;
    if (ab == 1.1025) r11025 = r.a_est / r.b_est;
    d += fmt(" %.4g:", ab) + (r.is_frame ? "frame" : "no");
  }
  const double gain = r11025 > 0 ? r081 / r11025 : INFINITY;
  return {match && gain > 10.0, "verdicts" + d + fmt("; a/b(0.81) / a/b(1.1025) = %.3g", gain)};
}

// 2
Verdict covariance() {
  std::mt19937_64 rng(101);
  std::vector<std::pair<Mat, Index>> cases;
  cases.push_back({standard_J(1), 1});
  cases.push_back({shear(Mat::Constant(1, 1, 0.8)), 1});
  cases.push_back({dilation(Mat::Constant(1, 1, 1.6)), 1});
  cases.push_back({rotation(1, 0.7), 1});
  cases.push_back({rotation(2, 2.1), 2});
  cases.push_back({standard_J(2), 2});
  while (cases.size() < 17) cases.push_back({oracle::random_symplectic(rng, 1, 3), 1});
  while (cases.size() < 20) cases.push_back({oracle::random_symplectic(rng, 2, 2), 2});
  double worst = 0;
  for (const auto& [s, n] : cases) {
    const GaborSystem sys = square_system(0.81, n == 1 ? default_radius(kH) : 4.0, kH, n);
    const GaussianMixture psi = oracle::random_mixture(rng, n, kH, 1.0, 2);
    worst = std::max(worst, covariance_check(sys, s, psi).deviation());
  }
  return {worst <= 1e-9, fmt("20 pairs, max deviation %.3g", worst)};
}

// 3
Verdict translation() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const GaborSystem sys = square_system(0.81, default_radius(kH));
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const PhasePoint z0 = pt(u(rng), u(rng)), z1 = pt(u(rng), u(rng));
    const GaussianMixture psi = oracle::random_mixture(rng, 1, kH, 1.0, 2);
    worst = std::max(worst, translation_check(sys, z0, z1, psi).deviation());
  }
  return {worst <= 1e-9, fmt("20 cases, max deviation %.3g", worst)};
}

// 4
Verdict rescaling() {
  std::mt19937_64 rng(303);
  const GaborSystem sys = square_system(0.25, default_radius(kH));  // alpha = beta = 0.5
  double worst = 0;
  for (double h : {1.0, 0.05, kH}) {
    for (int k = 0; k < 4; ++k) {
      const GaussianMixture psi = k == 0 ? GaussianMixture(standard_gaussian(1, kH))
                                         : oracle::random_mixture(rng, 1, kH, 1.0, 2);
      worst = std::max(worst, rescaling_check(sys, h, psi).deviation());
      worst = std::max(worst, planck_dilation_check(sys, h, psi).deviation());
    }
  }
  return {worst <= 1e-9, fmt("hbar in {1, 0.05, 1/2pi}, max deviation %.3g", worst)};
}

// 5
Verdict integrators() {
  const Hamiltonian A = builtin_hamiltonian("anharmonic");
  double defect = 0;
  for (const PhasePoint& z : {pt(1.0, 0.0), pt(-0.7, 1.2), pt(1.5, -0.4)}) {
    for (double dt : {0.01, 0.1}) {
      for (Method m : {Method::euler, Method::verlet}) {
        const Mat jac = fd_jacobian(
            [&](const Vec& w) {
              return Vec(m == Method::euler ? symplectic_euler_step(A, w, dt) : verlet_step(A, w, dt));
            },
            z);
        defect = std::max(defect, symplectic_defect(jac));
      }
    }
  }
  const Hamiltonian H = builtin_hamiltonian("harmonic");
  auto err = [&](Method m, Index steps) {
    return (flow(H, pt(1, 0), 0.0, 1.0, steps, m) - rotation(1, 1.0) * pt(1, 0)).norm();
  };
  const double re = err(Method::euler, 100) / err(Method::euler, 200);
  const double rv = err(Method::verlet, 100) / err(Method::verlet, 200);
  const Hamiltonian K = modified_hamiltonian(A);
  double kuv = 0;
  for (const PhasePoint& z : {pt(1.0, 0.0), pt(-0.7, 1.2), pt(1.5, -0.4)}) {
    kuv = std::max(kuv, (symplectic_euler_step(A, z, 0.1) - flow(K, z, 0.0, 0.1, 10000, Method::rk4)).norm());
  }
  const bool ok = defect <= 1e-7 && std::abs(re - 2) <= 0.4 && std::abs(rv - 4) <= 0.8 && kuv <= 1e-6;
  return {ok, fmt("step defect %.3g", defect) + fmt(", ratios euler %.4g", re) + fmt(" verlet %.4g", rv) +
                  fmt(", euler vs flow of K %.3g", kuv)};
}

// 6
Verdict reconstruction() {
  const PathHamiltonian ph = hamiltonian_from_linear_path(builtin_path("rotation"), 0.9);
  const double coeff = std::max((ph.matrix - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(),
                                (ph.block_matrix - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const PhasePoint z0 = pt(0.6, -1.1);
  const Isotopy rot = [](double t, const PhasePoint& w) { return PhasePoint(rotation(1, t) * w); };
  const Isotopy tr = [z0](double t, const PhasePoint& w) { return PhasePoint(w + t * z0); };
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const PhasePoint z = pt(u(rng), u(rng));
    worst = std::max(worst, std::abs(hamiltonian_from_isotopy(rot, 0.8, z) - 0.5 * z.squaredNorm()));
    worst = std::max(worst, std::abs(hamiltonian_from_isotopy(tr, 0.8, z) - symplectic_form(z, z0)));
  }
  return {coeff <= 1e-6 && worst <= 1e-6,
          fmt("rotation path coefficient error %.3g", coeff) + fmt(", isotopy quadrature error %.3g", worst)};
}

// 7
Verdict invariance() {
  const GaborSystem sys = square_system(0.81, default_radius(kH));
  const Hamiltonian A = builtin_hamiltonian("anharmonic");
  std::mt19937_64 rng(707);
  std::vector<GaussianMixture> states;
  for (int k = 0; k < 32; ++k) states.push_back(oracle::random_mixture(rng, 1, kH, 2.0, 1 + k % 3));
  double worst = 0;
  for (double t : {0.25, 0.5, 1.0}) {
    const DeformationResult d = weak_deform(sys, A, t);
    for (const auto& psi : states) worst = std::max(worst, invariance_check(sys, d, psi).deviation());
  }
  std::vector<double> ts;
  for (int k = 0; k <= 8; ++k) ts.push_back(2 * kPi * k / 8.0);
  const auto rows = deform_sweep(sys, builtin_hamiltonian("harmonic"), ts, DeformConfig{}, FrameConfig::defaults(kH));
  double drift = 0;
  for (const auto& [t, r] : rows) {
    drift = std::max(drift, std::abs(r.a_est / rows[0].second.a_est - 1));
    drift = std::max(drift, std::abs(r.b_est / rows[0].second.b_est - 1));
  }
  return {worst <= 1e-8 && drift <= 0.02,
          fmt("max invariance deviation %.3g", worst) + fmt(", harmonic sweep bound drift %.3g", drift)};
}

// 8
Verdict metaplectic_cross() {
  const double hbar = kH;
  const Grid grid{1, 2048, 8.0};
  std::vector<GeneratingFunctionData> ws{
      rotation_generating_function(kPi / 4),
      rotation_generating_function(2.0),
      {Mat::Constant(1, 1, 0.5), Mat::Constant(1, 1, 1.2), Mat::Constant(1, 1, -0.3), 0},
      {Mat::Constant(1, 1, -1.0), Mat::Constant(1, 1, 0.8), Mat::Constant(1, 1, 0.0), 0},
      {Mat::Constant(1, 1, 0.2), Mat::Constant(1, 1, -1.5), Mat::Constant(1, 1, 1.1), 1}};
  CMat m(1, 1);
  m(0, 0) = cplx(0.3, 1.4);
  const GaussianState g = make_gaussian(m, pt(0.4, -0.3), hbar, 0.1);
  double worst = 0, worst_phase = 0;
  for (const auto& w : ws) {
    const SampledWindow q = quadratic_fourier_apply(w, sample(g, grid), hbar);
    const SampledWindow s = sample(metaplectic_apply(from_generating_function(w), g), grid);
    const cplx ov = inner_product(q, s);
    worst = std::max(worst, std::abs(std::abs(ov) - 1));
    // the lift is fixed up to a sign
    worst_phase = std::max(worst_phase, std::min(std::abs(ov - 1.0), std::abs(ov + 1.0)));
  }
  return {worst <= 1e-4, fmt("5 generating functions, max | |overlap| - 1 | %.3g", worst) +
                             fmt(" (phase up to sign %.3g)", worst_phase)};
}

// 9
Verdict siegel() {
  std::mt19937_64 rng(909);
  double cocycle = 0, min_im = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const Index n = 1 + k % 3;
    const Mat s1 = oracle::random_symplectic(rng, n, 2), s2 = oracle::random_symplectic(rng, n, 2);
    const SiegelMatrix m(oracle::random_siegel(rng, n));
    const CMat lhs = siegel_action(Mat(s1 * s2), m).matrix();
    const CMat rhs = siegel_action(s1, siegel_action(s2, m)).matrix();
    cocycle = std::max(cocycle, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    const Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (lhs.imag() + lhs.imag().transpose())));
    min_im = std::min(min_im, es.eigenvalues()(0));
    cocycle = std::max(cocycle, (lhs - lhs.transpose()).cwiseAbs().maxCoeff());
  }
  return {cocycle <= 1e-9 && min_im > 0,
          fmt("100 pairs, cocycle/symmetry error %.3g", cocycle) + fmt(", min eig Im %.3g", min_im)};
}

// Random expressions in x1, x2, p1, p2, t, built so every probe in [-1, 1]^4 stays in
// the domain and the values stay moderate.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> c(0.1, 2.0);
  static const char* vars[] = {"x1", "x2", "p1", "p2", "t"};
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return vars[rng() % 5];
    case 1: return fmt("%.3g", c(rng));
    case 2: return "(" + sub() + " + " + sub() + ")";
    case 3: return "(" + sub() + " - " + sub() + ")";
    case 4: return "(" + sub() + " * " + sub() + ")";
    case 5: return "(" + sub() + " / (2 + cos(" + sub() + ")))";
    case 6: return "(" + sub() + ")^" + std::to_string(2 + rng() % 2);
    case 7: return std::string(rng() % 2 ? "sin" : "cos") + "(" + sub() + ")";
    case 8: return "exp(sin(" + sub() + "))";
    default: return rng() % 2 ? "sqrt(1 + (" + sub() + ")^2)" : "-(" + sub() + ")";
  }
}

// 10
Verdict parser() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double round = 0, grad = 0, hess = 0;
  int failures = 0;
  for (int k = 0; k < 200; ++k) {
    const std::string src = random_expr(rng, 4);
    try {
      const Expression e = parse_hamiltonian(src, 2);
      const Expression r = parse_hamiltonian(e.to_string(), 2);
      for (int probe = 0; probe < 3; ++probe) {
        const PhasePoint z = (PhasePoint(4) << u(rng), u(rng), u(rng), u(rng)).finished();
        const double t = 0.5 * (1 + u(rng));
        const double v = e.value(z, t);
        round = std::max(round, std::abs(r.value(z, t) - v) / std::max(1.0, std::abs(v)));

        const auto d = e.derivatives(z, t);
        std::function<double(const Vec&)> f = [&](const Vec& w) { return e.value(w, t); };
        // Ridders-extrapolated differences
        const double scale_g = std::max(1.0, d.gradient.cwiseAbs().maxCoeff());
        const double scale_h = std::max(1.0, d.hessian.cwiseAbs().maxCoeff());
        for (Index i = 0; i < 4; ++i) {
          grad = std::max(grad, std::abs(oracle::fd_partial(f, z, i) - d.gradient(i)) / scale_g);
          for (Index j = 0; j < 4; ++j) {
            hess = std::max(hess, std::abs(oracle::fd_second(f, z, i, j) - d.hessian(i, j)) / scale_h);
          }
        }
      }
    } catch (const std::exception& ex) {
      ++failures;
      std::fprintf(stderr, "expression %d failed: %s\n  %s\n", k, ex.what(), src.c_str());
    }
  }
  const bool ok = failures == 0 && round <= 1e-12 && grad <= 1e-7 && hess <= 1e-7;
  return {ok, fmt("200 expressions, round-trip %.3g", round) + fmt(", gradient vs FD %.3g", grad) +
                  fmt(", hessian vs FD %.3g", hess) + fmt(", errors %g", failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"Gaussian frame threshold", frame_threshold},
      {"symplectic covariance", covariance},
      {"translation theorem", translation},
      {"rescaling", rescaling},
      {"integrator contracts", integrators},
      {"Hamiltonian reconstruction", reconstruction},
      {"invariance under weak deformation", invariance},
      {"metaplectic cross-validation", metaplectic_cross},
      {"Siegel action", siegel},
      {"expression parser", parser}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%zu] %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
