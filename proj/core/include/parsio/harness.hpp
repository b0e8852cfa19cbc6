#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parsio {

/// Raised for configs that cannot be run; maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double L = 2.0;                 ///< half-width of the box [-L, L)^{n-1} x [-L^2, L^2)
  double h = 0.125;
  std::vector<int> counts;        ///< explicit node counts (overrides L)
  std::optional<double> dt;       ///< must equal h^2 when given
  std::vector<double> refine;     ///< extra h values for refinement studies
};

struct SurfaceSpec {
  std::string kind = "random";    ///< random | linear | zero | affine
  std::uint64_t seed = 7;
  std::uint64_t seed_stride = 0;  ///< seed of the i-th M value is seed + i * seed_stride
  std::vector<double> M{1.0};
  std::vector<double> slope{0.5}; ///< affine: b
};

struct ExperimentConfig {
  std::string experiment;
  int n = 2;
  GridSpec grid;
  std::vector<std::string> kernels;  ///< kernel-check, cdm: empty runs the canonical set and the controls
  SurfaceSpec surface;
  std::vector<double> epsilon;
  std::vector<double> delta;
  int order = -1;                 ///< kernel-check: derivative order N (-1: each kernel's own)
  int probes = 50;
  double zeta_Z = 64.0;
  int zeta_count = 4096;
  double kappa_R = 1024.0;
  double kappa_step = 1.0 / 256.0;
  std::vector<double> tail_Z{0.25, 0.5, 1.0};
  int k_max = 32;
  int resolution = 0;
  std::vector<int> n_list{2, 3};
  std::vector<int> m_list{2, 3};
  double ball_radius = 1.0;
  double jeps_L = 1.0;            ///< decompose: torus of the J_eps symbol check
  double jeps_h = 1.0 / 64.0;
  std::vector<double> jeps_epsilon;
  bool jeps_doubling = true;
  int power_iterations = 2000;
  double power_tol = 1e-7;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 1;
  int threads = 1;

  double tolerance(const std::string& key, double fallback) const;
};

/// Parses the JSON config text (comments allowed) and validates it. A
/// non-empty `experiment` supplies the name when the text has none and must
/// match it otherwise.
ExperimentConfig parse_config(const std::string& text, const std::string& experiment = "");
ExperimentConfig load_config(const std::string& path, const std::string& experiment = "");
/// Throws ConfigError on unknown experiment or names, bad grids, dt != h^2.
void validate(const ExperimentConfig& config);
/// Normalized JSON echo of every field.
std::string config_json(const ExperimentConfig& config);
const std::vector<std::string>& experiment_names();

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";  ///< <=, >=, info
  bool pass = true;
  std::string note;
};

struct RunReport {
  std::string experiment;
  std::string config_json;  ///< normalized echo of the config
  std::vector<Check> checks;
  std::map<std::string, double> timings;  ///< seconds per stage; not part of report.json
  std::vector<std::string> warnings;
  std::string version;

  bool passed() const;
  const Check* find(const std::string& name) const;
};

/// Runs the configured experiment. CSV tables go to `out_dir` when it is non-empty.
RunReport run(const ExperimentConfig& config, const std::string& out_dir = "");

/// Writes report.json (sorted keys, no timings) and timing.json.
void write_report(const RunReport& report, const std::string& out_dir);
std::string report_json(const RunReport& report);

}  // namespace parsio
