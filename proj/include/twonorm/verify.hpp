#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twonorm/grid.hpp"

namespace twonorm {

inline constexpr const char* kVersion = "0.1.0";

enum class SuiteId {
  Axioms,
  Sandwich,
  Isometry,
  GProperties,
  GeometryVolume,
  FunctionalBounds,
  Roundtrip,
  QuadratureConvergence,
};

const char* to_string(SuiteId id) noexcept;
/// Throws UnknownSuite.
SuiteId parse_suite(const std::string& name);
std::vector<SuiteId> all_suites();
/// Grid used when SuiteConfig::grid_n is 0.
std::size_t default_grid(SuiteId id) noexcept;

struct SuiteConfig {
  SuiteId suite = SuiteId::Axioms;
  std::vector<double> p_list{1.0, 1.5, 2.0, 3.0};
  std::size_t grid_n = 0;  ///< 0 selects default_grid(suite)
  std::string rule_kind = "midpoint";
  int trials = 100;
  std::uint64_t master_seed = 0;
  std::map<std::string, double> tolerances;  ///< per-check overrides
  int parallel = 1;                          ///< worker threads
};

/// Throws InvalidConfig.
void validate(const SuiteConfig& config);

/// PASS checks cannot fail spuriously because an optimizer stopped short;
/// MONITOR checks can, and carry a larger budget.
enum class CheckKind { Pass, Monitor };

struct Check {
  CheckKind kind = CheckKind::Pass;
  double slack = 0.0;  ///< positive = inequality satisfied
  double tolerance = 0.0;
  bool ok() const noexcept { return slack >= -tolerance; }
};

struct Flag {
  bool value = true;
  bool required = false;
};

struct TrialRecord {
  int id = 0;
  double p = 0.0;
  std::uint64_t sub_seed = 0;
  std::map<std::string, std::string> inputs;
  std::map<std::string, double> values;
  std::map<std::string, Check> margins;
  std::map<std::string, Flag> flags;
  bool pass = false;

  void finalize();
};

struct Summary {
  int pass = 0;
  int fail = 0;
  std::map<std::string, double> min_margins;
  double wall_ms = 0.0;
};

struct Report {
  SuiteConfig config;
  std::size_t grid = 0;
  std::string version = kVersion;
  std::vector<TrialRecord> trials;
  Summary summary;

  bool all_pass() const noexcept { return summary.fail == 0; }
};

/// Derived as a hash of (master seed, suite name, p, trial id).
std::uint64_t trial_seed(std::uint64_t master_seed, SuiteId suite, double p,
                         int trial_id);

/// Runs `trials` trials per p. The result does not depend on `parallel`.
Report run_suite(const SuiteConfig& config);

/// Smooth trigonometric draw (3 in 4) or rough nodal draw (1 in 4).
std::pair<GridFunction, GridFunction> generate_pair(std::uint64_t sub_seed,
                                                    const RulePtr& rule);
/// One function; `smooth_only` suppresses the rough branch. `label` receives a
/// generator description.
GridFunction generate_function(std::uint64_t sub_seed, const RulePtr& rule,
                               bool smooth_only = false, std::string* label = nullptr);
/// Antisymmetric kernels are sums of one to three wedge terms; others are
/// randsmooth draws.
Kernel generate_kernel(std::uint64_t sub_seed, const RulePtr& rule, bool antisymmetric,
                       std::string* label = nullptr);

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

/// The report with wall-clock data removed; equal for equal configurations.
nlohmann::json deterministic_view(const Report& report);

}  // namespace twonorm
