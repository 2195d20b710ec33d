#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "alh/errors.hpp"
#include "alh/report.hpp"

namespace alh {

/// Bad configuration: unknown key, wrong type, or a failed precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class ScenarioKind { kottler, flow, mass_aspect, penrose, static_compare, sweep };
std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kottler;
  int curvature = -1;
  int genus = 2;
  double mass = 0.0;
  double epsilon = 0.0;
  std::optional<double> tolerance;

  int radii = 20;  // kottler

  std::optional<double> r0;  // flow
  double t_max = 4.0;
  int steps = 4096;

  std::optional<double> r_start;  // mass-aspect
  std::optional<double> r_end;
  int steps_per_decade = 256;

  int jump_samples = 10000;  // penrose
  std::uint64_t seed = 1;
  int scan_points = 10000;

  std::vector<ScenarioConfig> members;  // sweep
};

/// Parses one scenario object. Unknown keys, wrong types and keys that do not
/// belong to the scenario kind are rejected. Sweeps accept "members" (a list of
/// scenario objects) and/or "template" plus "vary" (key -> list of values,
/// expanded as a cartesian product in key order).
ScenarioConfig parse_config(const Json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Checks the preconditions of the target module; throws ValidationError.
void validate(const ScenarioConfig& config);

/// Normalized echo of the configuration (every field that applies to the kind).
Json to_json(const ScenarioConfig& config);

struct Check {
  std::string name;
  bool applicable;
  bool passed;
  double value;
  double threshold;
};

struct RunReport {
  ScenarioConfig config;
  std::vector<Check> checks;
  Json results = Json::object();
  std::vector<std::string> outputs;
  int exit_code = 0;
  std::string error;
  std::vector<RunReport> members;  // sweep only
  double wall_seconds = 0.0;       // never serialized

  bool all_passed() const;
};

/// JSON with fixed key order; wall time is excluded so reruns are byte-identical.
Json to_json(const RunReport& report);

/// Executes one scenario. Outputs go to out_dir when it is non-empty. Errors
/// raised by the computation are captured: exit_code 2 for validation
/// failures, 1 for failed checks or numerical failures, 0 otherwise. `threads`
/// only matters for sweeps.
RunReport run(const ScenarioConfig& config, const std::filesystem::path& out_dir,
              unsigned threads = 0);

/// Runs members on up to `threads` workers (0 = hardware concurrency). Member
/// i writes into out_dir/member_iii; results and summary.csv keep input order.
std::vector<RunReport> sweep(const std::vector<ScenarioConfig>& configs,
                             const std::filesystem::path& out_dir, unsigned threads = 0);

/// summary.csv content for a list of member reports.
std::string sweep_summary_csv(const std::vector<RunReport>& reports);

/// mt19937_64 with a fixed mapping to [0, 1): (x >> 11) * 2^-53.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alh
