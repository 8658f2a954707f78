#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "gabor/deformation.hpp"
#include "gabor/frames.hpp"
#include "gabor/hamiltonian.hpp"
#include "gabor/integrators.hpp"

namespace gabor {

/// Invalid configuration value; names the offending field.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : DomainError(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Raw "section.key" -> value text; top-level keys carry no section prefix.
using ConfigMap = std::map<std::string, std::string>;

/// TOML-style text: [section] headers, key = value lines, # comments, optional quotes.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

/// Every key the configuration understands.
const std::vector<std::string>& config_keys();

struct RunConfig {
  double hbar = kHbarTF;
  Index n = 1;
  std::uint64_t seed = 0;

  struct {
    Vec alpha = Vec::Constant(1, 0.9);
    Vec beta = Vec::Constant(1, 0.9);
    std::optional<Mat> generator;
    std::optional<double> radius;  ///< default 8 sqrt(2 pi hbar)
  } lattice;

  struct {
    std::optional<CMat> M;  ///< default i I
    std::optional<Vec> center;
  } window;

  struct {
    std::string name = "harmonic";
    std::string expression;  ///< overrides name when set
    double param = 1.0;
  } hamiltonian;

  struct {
    std::optional<Method> method;
    Index steps = 1000;
    double t = 0.5;
    LatticeMode lattice_mode = LatticeMode::affine;
  } integrator;

  struct {
    std::optional<double> half_width;  ///< default 10 sqrt(2 pi hbar)
    Index grid_points = 1024;
    Index hermite = 128;
    Index mixtures = 32;
    double floor = 1e-3;
    BoundMethod method = BoundMethod::eig;
  } estimation;

  struct {
    std::string format = "json";
    std::string path = "-";
  } output;

  /// Applies values in map order; later calls override earlier ones.
  void apply(const ConfigMap& values);
  void validate() const;

  double radius() const;
  Lattice make_lattice() const;
  GaussianState make_window() const;
  GaborSystem make_system() const;
  Hamiltonian make_hamiltonian() const;
  FrameConfig frame_config() const;
  DeformConfig deform_config() const;

  /// Canonical form of every effective setting.
  nlohmann::json to_json() const;
  /// FNV-1a 64 of to_json().dump(), as 16 hex digits.
  std::string hash() const;
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

/// "a, b; c, d" rows of real entries.
Mat parse_real_matrix(const std::string& field, const std::string& s);
/// Entries like 0.5+2i, -i, 3.
CMat parse_complex_matrix(const std::string& field, const std::string& s);
Vec parse_vector(const std::string& field, const std::string& s);

}  // namespace gabor
