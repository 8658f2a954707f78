#include "gabor/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gabor/config.hpp"
#include "gabor/deformation.hpp"
#include "gabor/expression.hpp"
#include "gabor/reconstruction.hpp"

namespace gabor {

namespace {

using nlohmann::json;

json to_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vec(m.row(i).transpose())));
  return rows;
}

json to_json(const FrameReport& r) {
  return {{"a_est", r.a_est},
          {"b_est", r.b_est},
          {"ratio", std::isfinite(r.ratio) ? json(r.ratio) : json(nullptr)},
          {"is_frame", r.is_frame},
          {"method", to_string(r.method)},
          {"truncation", {{"R", r.radius}, {"L", r.half_width}, {"N", r.grid_points}}},
          {"residual_estimate", r.residual_estimate},
          {"lattice_size", r.lattice_size},
          {"family_size", r.family_size},
          {"family_rank", r.family_rank}};
}

json to_json(const GaussianState& g) {
  return {{"M_re", to_json(g.M.real())},
          {"M_im", to_json(g.M.imag())},
          {"center", to_json(g.center)},
          {"phase", g.phase},
          {"hbar", g.hbar}};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return fmt17(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "nan";
  if (v.is_string()) return v.get<std::string>();
  return "\"" + v.dump() + "\"";
}

// Flattens nested objects into dotted keys.
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out.emplace_back(prefix, j);
  }
}

// Tables are {"columns": [...], "rows": [[...]]}; anything else becomes key,value lines.
std::string render_csv(const json& result) {
  std::ostringstream os;
  if (result.contains("table")) {
    const json& t = result.at("table");
    const auto& cols = t.at("columns");
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].get<std::string>();
    os << "\n";
    for (const auto& row : t.at("rows")) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
    return os.str();
  }
  std::vector<std::pair<std::string, json>> flat;
  flatten(result, "", flat);
  os << "key,value\n";
  for (const auto& [k, v] : flat) os << k << "," << csv_cell(v) << "\n";
  return os.str();
}

json report_row(double param, const FrameReport& r) {
  return json::array({param, r.a_est, r.b_est, std::isfinite(r.ratio) ? json(r.ratio) : json(nullptr),
                      r.is_frame});
}

std::vector<double> parse_grid(const std::string& field, const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = [&] {
      std::vector<std::string> p;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ':')) p.push_back(item);
      return p;
    }();
    if (parts.size() != 3) throw ConfigError(field, "expected start:stop:count");
    const Vec a = parse_vector(field, parts[0]), b = parse_vector(field, parts[1]);
    const Vec c = parse_vector(field, parts[2]);
    const long count = std::lround(c(0));
    if (count < 1 || c(0) != static_cast<double>(count)) throw ConfigError(field, "count must be a positive integer");
    for (long k = 0; k < count; ++k) {
      out.push_back(count == 1 ? a(0) : a(0) + (b(0) - a(0)) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
  } else {
    const Vec v = parse_vector(field, s);
    out.assign(v.data(), v.data() + v.size());
  }
  return out;
}

// Random normalized Gaussian mixtures for checks: 1 to 3 terms, centers in the ball of
// radius `spread`, Siegel parameters near iI.
GaussianMixture random_test_state(std::mt19937_64& rng, Index n, double hbar, double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> terms(1, 3);
  std::normal_distribution<double> g(0.0, 1.0);
  GaussianMixture mix;
  const int k = terms(rng);
  for (int m = 0; m < k; ++m) {
    Mat a(n, n), b(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        a(i, j) = 0.5 * u(rng);
        b(i, j) = 0.5 * u(rng);
      }
    }
    CMat M(n, n);
    M.real() = 0.5 * (a + a.transpose());
    M.imag() = Mat::Identity(n, n) + b * b.transpose();
    PhasePoint c(2 * n);
    for (Index i = 0; i < 2 * n; ++i) c(i) = spread * u(rng) / std::sqrt(2.0 * static_cast<double>(n));
    mix.terms.push_back(make_gaussian(M, c, hbar, u(rng)));
    mix.coeffs.emplace_back(g(rng), g(rng));
  }
  return mix.normalized();
}

struct Outcome {
  json result;
  int code = kExitOk;
  json args = json::object();  ///< command arguments outside RunConfig, for the hash
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(std::vector<std::string> args) {
    CLI::App app{"Gabor frames with Gaussian windows under symplectic and Hamiltonian deformations",
                 "gabor"};
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_version_flag("--version", kVersion);
    app.add_option("--config", config_path_, "TOML-style config file ([section] key = value)");
    flag(&app, "--seed", "seed", "seed for every random draw (default 0)");
    flag(&app, "--out", "output.path", "output file, - for stdout");
    flag(&app, "--format", "output.format", "json or csv");

    auto* fc = app.add_subcommand("frame-check", "estimate frame bounds; exit 3 when not a frame");
    system_flags(fc);
    estimation_flags(fc);

    auto* cr = app.add_subcommand("criterion", "per-axis Gaussian frame criterion alpha_j beta_j < 2 pi hbar");
    flag(cr, "--alpha", "lattice.alpha", "spacings alpha_j");
    flag(cr, "--beta", "lattice.beta", "spacings beta_j");
    flag(cr, "--hbar", "hbar", "Planck constant");

    auto* de = app.add_subcommand("deform", "weak Hamiltonian deformation of the configured system");
    system_flags(de);
    dynamics_flags(de);
    bool dump = false, bounds = false;
    de->add_flag("--dump", dump, "include the deformed lattice points");
    de->add_flag("--bounds", bounds, "also estimate frame bounds of the deformed system");
    estimation_flags(de);

    auto* inv = app.add_subcommand("invariance", "max deviation of the invariance identity; exit 3 above tol");
    system_flags(inv);
    dynamics_flags(inv);
    Index trials = 32;
    double tol = 1e-8;
    inv->add_option("--trials", trials, "number of random test states")->check(CLI::PositiveNumber);
    inv->add_option("--tol", tol, "deviation tolerance");

    auto* ig = app.add_subcommand("integrate", "integrate a trajectory and dump it");
    flag(ig, "--n", "n", "dimension");
    flag(ig, "--hbar", "hbar", "Planck constant");
    dynamics_flags(ig);
    std::string z0_text;
    ig->add_option("--z0", z0_text, "initial point x1..xn,p1..pn")->required();

    auto* sw = app.add_subcommand("sweep", "frame bounds along a time grid or alpha*beta grid");
    system_flags(sw);
    dynamics_flags(sw);
    estimation_flags(sw);
    std::string t_grid, ab_grid;
    auto* tg = sw->add_option("--t-grid", t_grid, "times: start:stop:count or a list");
    auto* abg = sw->add_option("--ab-grid", ab_grid, "products alpha*beta (alpha = beta): start:stop:count or a list");
    tg->excludes(abg);

    auto* ph = app.add_subcommand("path-hamiltonian", "Hamiltonian of a builtin linear symplectic path");
    std::string path_name = "rotation";
    double path_t = 0.5, path_param = 1.0;
    Index probes = 5;
    flag(ph, "--n", "n", "dimension");
    ph->add_option("--path", path_name, "rotation, identity, shear or dilation");
    ph->add_option("--t", path_t, "time");
    ph->add_option("--param", path_param, "path parameter");
    ph->add_option("--probes", probes, "probe points for the isotopy quadrature")->check(CLI::NonNegativeNumber);

    std::vector<const char*> argv{"gabor"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out_, err_);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out_, err_);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e, out_, err_);
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitError;
    }

    try {
      RunConfig cfg;
      if (!config_path_.empty()) cfg.apply(load_config_file(config_path_));
      cfg.apply(flags_);
      cfg.validate();

      const auto* sub = app.get_subcommands().front();
      const std::string name = sub->get_name();
      Outcome o;
      if (name == "frame-check") o = frame_check(cfg);
      else if (name == "criterion") o = criterion(cfg);
      else if (name == "deform") o = deform(cfg, dump, bounds);
      else if (name == "invariance") o = invariance(cfg, trials, tol);
      else if (name == "integrate") o = integrate_cmd(cfg, z0_text);
      else if (name == "sweep") o = sweep(cfg, t_grid, ab_grid);
      else o = path_hamiltonian(cfg, path_name, path_t, path_param, probes);

      const json hashed = {{"command", name}, {"config", cfg.to_json()}, {"args", o.args}};
      json doc = {{"meta", {{"version", kVersion}, {"seed", cfg.seed}, {"config_hash", fnv1a_hex(hashed.dump())}}},
                  {"result", o.result}};
      const std::string text = cfg.output.format == "csv" ? render_csv(o.result) : doc.dump(2) + "\n";
      write(cfg.output.path, text);
      return o.code;
    } catch (const ParseError& e) {
      err_ << "error: " << e.what() << " (span " << e.span().begin << ".." << e.span().end << ")";
      if (!e.expected().empty()) {
        err_ << "; expected one of:";
        for (const auto& x : e.expected()) err_ << " " << x;
      }
      err_ << "\n";
      return kExitError;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitError;
    }
  }

 private:
  void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        name, [this, key](const std::string& v) { flags_[key] = v; }, help);
  }

  void system_flags(CLI::App* app) {
    flag(app, "--hbar", "hbar", "Planck constant (default 1/2pi)");
    flag(app, "--n", "n", "dimension");
    flag(app, "--alpha", "lattice.alpha", "lattice spacings alpha_j (comma list)");
    flag(app, "--beta", "lattice.beta", "lattice spacings beta_j (comma list)");
    flag(app, "--generator", "lattice.generator", "lattice generator matrix, rows separated by ;");
    flag(app, "--radius", "lattice.radius", "truncation radius (default 8 sqrt(2 pi hbar))");
    flag(app, "--window-M", "window.M", "Siegel matrix of the window, e.g. 0.5+2i");
    flag(app, "--center", "window.center", "window center x1..xn,p1..pn");
  }

  void dynamics_flags(CLI::App* app) {
    app->add_option_function<std::string>(
        "--hamiltonian",
        [this](const std::string& v) {
          const auto names = builtin_hamiltonian_names();
          if (std::find(names.begin(), names.end(), v) != names.end()) {
            flags_["hamiltonian.name"] = v;
            flags_.erase("hamiltonian.expr");
          } else {
            flags_["hamiltonian.expr"] = v;
          }
        },
        "builtin name (harmonic, shear, free, anharmonic, driven, zero) or expression in x1.., p1.., t");
    flag(app, "--param", "hamiltonian.param", "builtin parameter (shear P)");
    flag(app, "--method", "integrator.method", "euler, verlet, verlet-literal, rk4-ref, exact or auto");
    flag(app, "--steps", "integrator.steps", "integration steps");
    flag(app, "--t", "integrator.t", "final time");
    flag(app, "--lattice-mode", "integrator.lattice_mode", "affine or exact-nonlinear");
  }

  void estimation_flags(CLI::App* app) {
    flag(app, "--L", "estimation.L", "grid half-width (default 10 sqrt(2 pi hbar))");
    flag(app, "--N", "estimation.N", "grid points");
    flag(app, "--hermite", "estimation.hermite", "Hermite functions in the test family");
    flag(app, "--mixtures", "estimation.mixtures", "random Gaussian mixtures in the test family");
    flag(app, "--floor", "estimation.floor", "frame verdict needs a_est > floor * b_est");
    flag(app, "--bound-method", "estimation.method", "eig or test-vectors");
  }

  void write(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output.path", "cannot open '" + path + "' for writing");
    f << text;
  }

  Outcome frame_check(const RunConfig& cfg) {
    const FrameReport r = frame_bounds(cfg.make_system(), cfg.frame_config());
    Outcome o;
    o.result = to_json(r);
    o.code = r.is_frame ? kExitOk : kExitNegative;
    return o;
  }

  Outcome criterion(const RunConfig& cfg) {
    const Index n = std::max(cfg.lattice.alpha.size(), cfg.lattice.beta.size());
    auto widen = [n](const Vec& v) { return v.size() == n ? v : Vec(Vec::Constant(n, v(0))); };
    const Vec a = widen(cfg.lattice.alpha), b = widen(cfg.lattice.beta);
    const auto verdicts = gaussian_frame_criterion(a, b, cfg.hbar);
    const bool all = std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
    Outcome o;
    o.result = {{"alpha", to_json(a)}, {"beta", to_json(b)}, {"hbar", cfg.hbar},
                {"threshold", 2 * kPi * cfg.hbar}, {"verdicts", verdicts}, {"is_frame", all}};
    o.code = all ? kExitOk : kExitNegative;
    return o;
  }

  Outcome deform(const RunConfig& cfg, bool dump, bool bounds) {
    const GaborSystem sys = cfg.make_system();
    const DeformationResult d = weak_deform(sys, cfg.make_hamiltonian(), cfg.integrator.t, cfg.deform_config());
    Outcome o;
    o.args = {{"dump", dump}, {"bounds", bounds}};
    o.result = {{"t", cfg.integrator.t},
                {"lattice_mode", to_string(d.mode)},
                {"z_t", to_json(d.z)},
                {"S_t", to_json(d.S)},
                {"symplectic_defect", symplectic_defect(d.S)},
                {"gamma", d.gamma},
                {"window", to_json(d.window)},
                {"lattice_size", d.lattice.cols()}};
    if (dump) {
      json pts = json::array();
      for (Index j = 0; j < d.lattice.cols(); ++j) pts.push_back(to_json(Vec(d.lattice.col(j))));
      o.result["lattice"] = pts;
    }
    if (bounds) o.result["frame"] = to_json(frame_bounds(d.system(), cfg.frame_config()));
    return o;
  }

  Outcome invariance(const RunConfig& cfg, Index trials, double tol) {
    const GaborSystem sys = cfg.make_system();
    DeformConfig dc = cfg.deform_config();
    dc.mode = LatticeMode::affine;
    const DeformationResult d = weak_deform(sys, cfg.make_hamiltonian(), cfg.integrator.t, dc);
    std::mt19937_64 rng(cfg.seed);
    std::vector<GaussianMixture> states;
    for (Index k = 0; k < trials; ++k) {
      states.push_back(random_test_state(rng, cfg.n, cfg.hbar, 0.5 * cfg.radius()));
    }
    std::vector<double> dev(states.size());
    parallel_for(states.size(), [&](std::size_t k) {
      dev[k] = invariance_check(sys, d, states[k]).deviation();
    });
    const double worst = *std::max_element(dev.begin(), dev.end());
    Outcome o;
    o.args = {{"trials", trials}, {"tol", tol}};
    o.result = {{"t", cfg.integrator.t}, {"trials", trials}, {"max_deviation", worst},
                {"tol", tol}, {"pass", worst <= tol}, {"deviations", dev}};
    o.code = worst <= tol ? kExitOk : kExitNegative;
    return o;
  }

  Outcome integrate_cmd(const RunConfig& cfg, const std::string& z0_text) {
    const PhasePoint z0 = parse_vector("z0", z0_text);
    if (z0.size() != 2 * cfg.n) throw ConfigError("z0", "must have 2n entries");
    const Hamiltonian H = cfg.make_hamiltonian();
    const Method m = cfg.integrator.method.value_or(default_method(H));
    const Trajectory tr = integrate(H, z0, cfg.integrator.t, cfg.integrator.steps, m);
    json cols = json::array({"t"});
    for (Index i = 0; i < cfg.n; ++i) cols.push_back("x" + std::to_string(i + 1));
    for (Index i = 0; i < cfg.n; ++i) cols.push_back("p" + std::to_string(i + 1));
    cols.push_back("gamma");
    cols.push_back("energy");
    json rows = json::array();
    for (std::size_t k = 0; k < tr.size(); ++k) {
      json row = json::array({tr.times[k]});
      for (Index i = 0; i < z0.size(); ++i) row.push_back(tr.points[k](i));
      row.push_back(tr.gamma[k]);
      row.push_back(H.value(tr.points[k], tr.times[k]));
      rows.push_back(row);
    }
    Outcome o;
    o.args = {{"z0", to_json(z0)}};
    o.result = {{"method", to_string(tr.method)},
                {"dt", tr.dt},
                {"final_S", to_json(tr.final_linear())},
                {"symplectic_defect", symplectic_defect(tr.final_linear())},
                {"table", {{"columns", cols}, {"rows", rows}}}};
    return o;
  }

  Outcome sweep(const RunConfig& cfg, const std::string& t_grid, const std::string& ab_grid) {
    if (t_grid.empty() && ab_grid.empty()) throw ConfigError("sweep", "give --t-grid or --ab-grid");
    const json cols = json::array({t_grid.empty() ? "alpha_beta" : "t", "a_est", "b_est", "ratio", "is_frame"});
    json rows = json::array();
    Outcome o;
    if (!t_grid.empty()) {
      const auto ts = parse_grid("t-grid", t_grid);
      const auto reps = deform_sweep(cfg.make_system(), cfg.make_hamiltonian(), ts, cfg.deform_config(),
                                     cfg.frame_config());
      for (const auto& [t, r] : reps) rows.push_back(report_row(t, r));
      o.args = {{"t_grid", t_grid}};
    } else {
      const auto abs = parse_grid("ab-grid", ab_grid);
      const GaussianState window = cfg.make_window();
      for (double ab : abs) {
        if (!(ab > 0)) throw ConfigError("ab-grid", "products must be positive");
        const double s = std::sqrt(ab);
        const Lattice lat = separable_lattice(Vec::Constant(cfg.n, s), Vec::Constant(cfg.n, s), cfg.radius());
        rows.push_back(report_row(ab, frame_bounds(make_system(window, lat), cfg.frame_config())));
      }
      o.args = {{"ab_grid", ab_grid}};
    }
    o.result = {{"table", {{"columns", cols}, {"rows", rows}}}};
    return o;
  }

  Outcome path_hamiltonian(const RunConfig& cfg, const std::string& name, double t, double param,
                           Index probes) {
    const LinearPath path = builtin_path(name, cfg.n, param);
    const PathHamiltonian ph = hamiltonian_from_linear_path(path, t);
    const Isotopy iso = [&path](double s, const PhasePoint& z) { return PhasePoint(path(s) * z); };
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    json pts = json::array();
    for (Index k = 0; k < probes; ++k) {
      PhasePoint z(2 * cfg.n);
      for (Index i = 0; i < z.size(); ++i) z(i) = u(rng);
      pts.push_back({{"z", to_json(z)},
                     {"quadratic_form", 0.5 * z.dot(ph.matrix * z)},
                     {"isotopy_quadrature", hamiltonian_from_isotopy(iso, t, z)}});
    }
    Outcome o;
    o.args = {{"path", name}, {"t", t}, {"param", param}, {"probes", probes}};
    o.result = {{"path", name},
                {"t", t},
                {"matrix", to_json(ph.matrix)},
                {"block_matrix", to_json(ph.block_matrix)},
                {"blocks", {{"xx", to_json(ph.xx)}, {"xp", to_json(ph.xp)}, {"pp", to_json(ph.pp)}}},
                {"probes", pts}};
    return o;
  }

  std::ostream& out_;
  std::ostream& err_;
  std::string config_path_;
  ConfigMap flags_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace gabor
