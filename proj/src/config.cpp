#include "gabor/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gabor/expression.hpp"

namespace gabor {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

// Drops a trailing # comment outside quotes.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

double parse_real(const std::string& field, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != e) {
    throw ConfigError(field, "expected a number, got '" + s + "'");
  }
  return v;
}

long long parse_integer(const std::string& field, const std::string& raw) {
  const std::string s = trim(raw);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(field, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Entries of one row, separated by commas or whitespace.
std::vector<std::string> row_entries(const std::string& row) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (char c : row) {
    if (c == ',' || c == ' ' || c == '\t') {
      flush();
    } else if (c != '[' && c != ']') {
      cur += c;
    }
  }
  flush();
  return out;
}

cplx parse_complex(const std::string& field, const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError(field, "empty complex entry");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(field, s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign.
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  const std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
  std::string im = cut == std::string::npos ? body : body.substr(cut);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(field, re), parse_real(field, im)};
}

Method parse_method_field(const std::string& field, const std::string& s) {
  try {
    return parse_method(s);
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

nlohmann::json matrix_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json vector_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec broadcast(const Vec& v, Index n, const std::string& field) {
  if (v.size() == n) return v;
  if (v.size() == 1) return Vec::Constant(n, v(0));
  throw ConfigError(field, "expected 1 or " + std::to_string(n) + " entries");
}

}  // namespace

Mat parse_real_matrix(const std::string& field, const std::string& s) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(s, ';')) {
    const auto entries = row_entries(row);
    if (entries.empty()) continue;
    std::vector<double> r;
    for (const auto& e : entries) r.push_back(parse_real(field, e));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ConfigError(field, "empty matrix");
  Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ConfigError(field, "ragged matrix rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

CMat parse_complex_matrix(const std::string& field, const std::string& s) {
  std::vector<std::vector<cplx>> rows;
  for (const auto& row : split(s, ';')) {
    const auto entries = row_entries(row);
    if (entries.empty()) continue;
    std::vector<cplx> r;
    for (const auto& e : entries) r.push_back(parse_complex(field, e));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ConfigError(field, "empty matrix");
  CMat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ConfigError(field, "ragged matrix rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Vec parse_vector(const std::string& field, const std::string& s) {
  const auto entries = row_entries(s);
  if (entries.empty()) throw ConfigError(field, "empty list");
  Vec v(static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Index>(i)) = parse_real(field, entries[i]);
  return v;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(where, "empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(where, "missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), full) == keys.end()) {
      throw ConfigError(full, "unknown configuration key (" + where + ")");
    }
    out[full] = unquote(trim(s.substr(eq + 1)));
  }
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "hbar", "n", "seed",
      "lattice.alpha", "lattice.beta", "lattice.generator", "lattice.radius",
      "window.M", "window.center",
      "hamiltonian.name", "hamiltonian.expr", "hamiltonian.param",
      "integrator.method", "integrator.steps", "integrator.t", "integrator.lattice_mode",
      "estimation.L", "estimation.N", "estimation.hermite", "estimation.mixtures",
      "estimation.floor", "estimation.method",
      "output.format", "output.path"};
  return keys;
}

void RunConfig::apply(const ConfigMap& values) {
  for (const auto& [key, raw] : values) {
    const std::string v = trim(raw);
    if (key == "hbar") hbar = parse_real(key, v);
    else if (key == "n") n = static_cast<Index>(parse_integer(key, v));
    else if (key == "seed") {
      const long long s = parse_integer(key, v);
      if (s < 0) throw ConfigError(key, "seed must be non-negative");
      seed = static_cast<std::uint64_t>(s);
    }
    else if (key == "lattice.alpha") lattice.alpha = parse_vector(key, v);
    else if (key == "lattice.beta") lattice.beta = parse_vector(key, v);
    else if (key == "lattice.generator") lattice.generator = parse_real_matrix(key, v);
    else if (key == "lattice.radius") lattice.radius = parse_real(key, v);
    else if (key == "window.M") window.M = parse_complex_matrix(key, v);
    else if (key == "window.center") window.center = parse_vector(key, v);
    else if (key == "hamiltonian.name") hamiltonian.name = v;
    else if (key == "hamiltonian.expr") hamiltonian.expression = v;
    else if (key == "hamiltonian.param") hamiltonian.param = parse_real(key, v);
    else if (key == "integrator.method") {
      if (v == "auto") integrator.method.reset();
      else integrator.method = parse_method_field(key, v);
    }
    else if (key == "integrator.steps") integrator.steps = static_cast<Index>(parse_integer(key, v));
    else if (key == "integrator.t") integrator.t = parse_real(key, v);
    else if (key == "integrator.lattice_mode") {
      try {
        integrator.lattice_mode = parse_lattice_mode(v);
      } catch (const DomainError& e) {
        throw ConfigError(key, e.what());
      }
    }
    else if (key == "estimation.L") estimation.half_width = parse_real(key, v);
    else if (key == "estimation.N") estimation.grid_points = static_cast<Index>(parse_integer(key, v));
    else if (key == "estimation.hermite") estimation.hermite = static_cast<Index>(parse_integer(key, v));
    else if (key == "estimation.mixtures") estimation.mixtures = static_cast<Index>(parse_integer(key, v));
    else if (key == "estimation.floor") estimation.floor = parse_real(key, v);
    else if (key == "estimation.method") {
      try {
        estimation.method = parse_bound_method(v);
      } catch (const DomainError& e) {
        throw ConfigError(key, e.what());
      }
    }
    else if (key == "output.format") output.format = v;
    else if (key == "output.path") output.path = v;
    else throw ConfigError(key, "unknown configuration key");
  }
  // A builtin name given without an expression at this layer replaces an earlier expression.
  if (values.count("hamiltonian.name") && !values.count("hamiltonian.expr")) {
    hamiltonian.expression.clear();
  }
}

void RunConfig::validate() const {
  if (!(hbar > 0) || !std::isfinite(hbar)) throw ConfigError("hbar", "must be positive");
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (lattice.generator) {
    if (lattice.generator->rows() != 2 * n || lattice.generator->cols() != 2 * n) {
      throw ConfigError("lattice.generator", "must be 2n x 2n");
    }
  } else {
    const Vec a = broadcast(lattice.alpha, n, "lattice.alpha");
    const Vec b = broadcast(lattice.beta, n, "lattice.beta");
    if (!(a.minCoeff() > 0)) throw ConfigError("lattice.alpha", "must be positive");
    if (!(b.minCoeff() > 0)) throw ConfigError("lattice.beta", "must be positive");
  }
  if (lattice.radius && !(*lattice.radius > 0)) throw ConfigError("lattice.radius", "must be positive");
  if (window.M && (window.M->rows() != n || window.M->cols() != n)) {
    throw ConfigError("window.M", "must be n x n");
  }
  if (window.center && window.center->size() != 2 * n) {
    throw ConfigError("window.center", "must have 2n entries");
  }
  if (integrator.steps < 1) throw ConfigError("integrator.steps", "must be >= 1");
  if (!std::isfinite(integrator.t)) throw ConfigError("integrator.t", "must be finite");
  if (estimation.half_width && !(*estimation.half_width > 0)) {
    throw ConfigError("estimation.L", "must be positive");
  }
  if (estimation.grid_points < 2) throw ConfigError("estimation.N", "must be >= 2");
  if (estimation.hermite < 0) throw ConfigError("estimation.hermite", "must be >= 0");
  if (estimation.mixtures < 0) throw ConfigError("estimation.mixtures", "must be >= 0");
  if (estimation.hermite + estimation.mixtures < 1) {
    throw ConfigError("estimation.hermite", "test family must not be empty");
  }
  if (!(estimation.floor > 0)) throw ConfigError("estimation.floor", "must be positive");
  if (output.format != "json" && output.format != "csv") {
    throw ConfigError("output.format", "must be json or csv");
  }
  if (hamiltonian.expression.empty()) {
    const auto names = builtin_hamiltonian_names();
    if (std::find(names.begin(), names.end(), hamiltonian.name) == names.end()) {
      throw ConfigError("hamiltonian.name", "unknown builtin '" + hamiltonian.name + "'");
    }
  }
}

double RunConfig::radius() const { return lattice.radius.value_or(default_radius(hbar)); }

Lattice RunConfig::make_lattice() const {
  validate();
  if (lattice.generator) return Lattice{*lattice.generator, radius(), Vec(), std::nullopt};
  return separable_lattice(broadcast(lattice.alpha, n, "lattice.alpha"),
                           broadcast(lattice.beta, n, "lattice.beta"), radius());
}

GaussianState RunConfig::make_window() const {
  const CMat m = window.M.value_or(CMat(cplx(0.0, 1.0) * CMat::Identity(n, n)));
  const Vec c = window.center.value_or(Vec(Vec::Zero(2 * n)));
  try {
    return make_gaussian(m, c, hbar);
  } catch (const DomainError& e) {
    throw ConfigError("window.M", e.what());
  }
}

GaborSystem RunConfig::make_system() const { return gabor::make_system(make_window(), make_lattice()); }

Hamiltonian RunConfig::make_hamiltonian() const {
  if (!hamiltonian.expression.empty()) {
    return expression_hamiltonian(parse_hamiltonian(hamiltonian.expression, n));
  }
  return builtin_hamiltonian(hamiltonian.name, n, hamiltonian.param);
}

FrameConfig RunConfig::frame_config() const {
  FrameConfig c = FrameConfig::defaults(hbar);
  if (estimation.half_width) c.half_width = *estimation.half_width;
  c.grid_points = estimation.grid_points;
  c.hermite_count = estimation.hermite;
  c.mixture_count = estimation.mixtures;
  c.frame_floor = estimation.floor;
  c.method = estimation.method;
  c.seed = seed;
  return c;
}

DeformConfig RunConfig::deform_config() const {
  DeformConfig c;
  c.method = integrator.method;
  c.steps = integrator.steps;
  c.mode = integrator.lattice_mode;
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["hbar"] = hbar;
  j["n"] = n;
  j["seed"] = seed;
  nlohmann::json lat;
  if (lattice.generator) {
    lat["generator"] = matrix_json(*lattice.generator);
  } else {
    lat["alpha"] = vector_json(lattice.alpha);
    lat["beta"] = vector_json(lattice.beta);
  }
  lat["radius"] = radius();
  j["lattice"] = lat;
  const CMat m = window.M.value_or(CMat(cplx(0.0, 1.0) * CMat::Identity(n, n)));
  j["window"] = {{"M_re", matrix_json(m.real())},
                 {"M_im", matrix_json(m.imag())},
                 {"center", vector_json(window.center.value_or(Vec(Vec::Zero(2 * n))))}};
  if (hamiltonian.expression.empty()) {
    j["hamiltonian"] = {{"name", hamiltonian.name}, {"param", hamiltonian.param}};
  } else {
    j["hamiltonian"] = {{"expr", hamiltonian.expression}};
  }
  j["integrator"] = {{"method", integrator.method ? to_string(*integrator.method) : "auto"},
                     {"steps", integrator.steps},
                     {"t", integrator.t},
                     {"lattice_mode", to_string(integrator.lattice_mode)}};
  const FrameConfig fc = frame_config();
  j["estimation"] = {{"L", fc.half_width},       {"N", fc.grid_points},
                     {"hermite", fc.hermite_count}, {"mixtures", fc.mixture_count},
                     {"floor", fc.frame_floor},   {"method", to_string(fc.method)}};
  return j;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

}  // namespace gabor
