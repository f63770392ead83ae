#include "twonorm/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "suites.hpp"
#include "twonorm/rng.hpp"
#include "twonorm/spec.hpp"

namespace twonorm {

namespace {

struct SuiteInfo {
  SuiteId id;
  const char* name;
  std::size_t grid;
  TrialRecord (*run)(const suites::TrialContext&);
};

constexpr SuiteInfo kSuites[] = {
    {SuiteId::Axioms, "axioms", 256, &suites::axioms},
    {SuiteId::Sandwich, "sandwich_2_2", 256, &suites::sandwich},
    {SuiteId::Isometry, "isometry_2_1", 64, &suites::isometry},
    {SuiteId::GProperties, "g_properties", 256, &suites::g_properties},
    {SuiteId::GeometryVolume, "geometry_volume", 256, &suites::geometry_volume},
    {SuiteId::FunctionalBounds, "functional_bounds_2_3_2_6", 64,
     &suites::functional_bounds},
    {SuiteId::Roundtrip, "roundtrip", 64, &suites::roundtrip},
    {SuiteId::QuadratureConvergence, "quadrature_convergence", 256,
     &suites::quadrature_convergence},
};

const SuiteInfo& info(SuiteId id) {
  for (const auto& s : kSuites)
    if (s.id == id) return s;
  throw Error(ErrorKind::UnknownSuite, "unknown suite id");
}

GridFunction rough_function(SplitMix64& g, const RulePtr& rule) {
  std::vector<double> s(rule->size());
  for (double& v : s) v = g.uniform(-1.0, 1.0);
  return GridFunction(rule, std::move(s));
}

GridFunction smooth_function(SplitMix64& g, const RulePtr& rule, std::string* label) {
  const fspec::Fourier spec{g.next(), g.uniform_int(2, 5)};
  if (label) *label = to_string(FunctionSpec{spec});
  return sample_function(rule, spec);
}

}  // namespace

const char* to_string(SuiteId id) noexcept {
  for (const auto& s : kSuites)
    if (s.id == id) return s.name;
  return "unknown";
}

SuiteId parse_suite(const std::string& name) {
  for (const auto& s : kSuites)
    if (name == s.name) return s.id;
  throw Error(ErrorKind::UnknownSuite, "unknown suite '" + name + "'");
}

std::vector<SuiteId> all_suites() {
  std::vector<SuiteId> ids;
  for (const auto& s : kSuites) ids.push_back(s.id);
  return ids;
}

std::size_t default_grid(SuiteId id) noexcept {
  for (const auto& s : kSuites)
    if (s.id == id) return s.grid;
  return 256;
}

void validate(const SuiteConfig& config) {
  if (config.trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be >= 1");
  if (config.p_list.empty()) throw Error(ErrorKind::InvalidConfig, "empty p list");
  for (double p : config.p_list)
    if (!std::isfinite(p) || p < 1.0)
      throw Error(ErrorKind::InvalidConfig, "every p must satisfy 1 <= p < inf");
  if (config.grid_n == 1) throw Error(ErrorKind::InvalidConfig, "grid must be >= 2");
  if (config.parallel < 1) throw Error(ErrorKind::InvalidConfig, "parallel must be >= 1");
  info(config.suite);
}

void TrialRecord::finalize() {
  pass = std::all_of(margins.begin(), margins.end(),
                     [](const auto& kv) { return kv.second.ok(); }) &&
         std::all_of(flags.begin(), flags.end(), [](const auto& kv) {
           return kv.second.value || !kv.second.required;
         });
}

std::uint64_t trial_seed(std::uint64_t master_seed, SuiteId suite, double p,
                         int trial_id) {
  std::uint64_t h = mix_seed_str(master_seed, to_string(suite));
  h = mix_seed_real(h, p);
  return mix_seed(h, static_cast<std::uint64_t>(trial_id));
}

GridFunction generate_function(std::uint64_t sub_seed, const RulePtr& rule,
                               bool smooth_only, std::string* label) {
  SplitMix64 g(sub_seed);
  const bool rough = (g.next() % 4 == 0) && !smooth_only;
  if (rough) {
    if (label) *label = "rough:" + std::to_string(sub_seed);
    return rough_function(g, rule);
  }
  return smooth_function(g, rule, label);
}

std::pair<GridFunction, GridFunction> generate_pair(std::uint64_t sub_seed,
                                                    const RulePtr& rule) {
  SplitMix64 g(sub_seed);
  if (g.next() % 4 == 0) {
    auto a = rough_function(g, rule);
    auto b = rough_function(g, rule);
    return {std::move(a), std::move(b)};
  }
  auto a = smooth_function(g, rule, nullptr);
  auto b = smooth_function(g, rule, nullptr);
  return {std::move(a), std::move(b)};
}

Kernel generate_kernel(std::uint64_t sub_seed, const RulePtr& rule, bool antisymmetric,
                       std::string* label) {
  SplitMix64 g(sub_seed);
  if (!antisymmetric) {
    const kspec::RandSmooth spec{g.next(), g.uniform_int(2, 4)};
    if (label) *label = to_string(KernelSpec{spec});
    return sample_kernel(rule, KernelSpec{spec});
  }
  const int terms = g.uniform_int(1, 3);
  Kernel sum(rule);
  std::string text;
  std::vector<double> acc(rule->size() * rule->size(), 0.0);
  for (int t = 0; t < terms; ++t) {
    const fspec::Fourier a{g.next(), g.uniform_int(2, 5)};
    const fspec::Fourier b{g.next(), g.uniform_int(2, 5)};
    const KernelSpec spec{kspec::Wedge{a, b}};
    if (t) text += " + ";
    text += to_string(spec);
    const Kernel k = sample_kernel(rule, spec);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += k.samples()[i];
  }
  if (label) *label = text;
  return Kernel(rule, std::move(acc));
}

Report run_suite(const SuiteConfig& config) {
  validate(config);
  const SuiteInfo& suite = info(config.suite);
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.config = config;
  report.grid = config.grid_n ? config.grid_n : suite.grid;
  const RulePtr rule = make_rule(config.rule_kind, report.grid);

  struct Job {
    double p;
    int id;
  };
  std::vector<Job> jobs;
  for (double p : config.p_list)
    for (int t = 0; t < config.trials; ++t) jobs.push_back({p, t});
  report.trials.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      suites::TrialContext ctx{rule, jobs[k].p, jobs[k].id,
                               trial_seed(config.master_seed, config.suite,
                                          jobs[k].p, jobs[k].id),
                               &config.tolerances};
      TrialRecord rec = suite.run(ctx);
      rec.id = ctx.id;
      rec.p = ctx.p;
      rec.sub_seed = ctx.seed;
      rec.finalize();
      report.trials[k] = std::move(rec);
    }
  };
  const int threads = std::min<int>(config.parallel, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& rec : report.trials) {
    (rec.pass ? report.summary.pass : report.summary.fail) += 1;
    for (const auto& [name, check] : rec.margins) {
      auto [it, inserted] = report.summary.min_margins.emplace(name, check.slack);
      if (!inserted) it->second = std::min(it->second, check.slack);
    }
  }
  report.summary.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

namespace {

const char* kind_name(CheckKind k) { return k == CheckKind::Pass ? "pass" : "monitor"; }

// JSON has no infinities; slacks and values are finite in practice, but a
// degenerate input must not corrupt the document.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double from_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

nlohmann::json to_json(const Report& report) {
  using nlohmann::json;
  json j;
  j["suite"] = to_string(report.config.suite);
  j["p"] = report.config.p_list;
  j["grid"] = report.grid;
  j["rule"] = report.config.rule_kind;
  j["seed"] = report.config.master_seed;
  j["version"] = report.version;
  j["trials_per_p"] = report.config.trials;
  j["tolerance_overrides"] = report.config.tolerances;
  json checks = json::object();
  json trials = json::array();
  for (const auto& rec : report.trials) {
    json t;
    t["id"] = rec.id;
    t["p"] = rec.p;
    t["sub_seed"] = rec.sub_seed;
    t["inputs"] = rec.inputs;
    json values = json::object();
    for (const auto& [k, v] : rec.values) values[k] = number(v);
    t["values"] = values;
    json margins = json::object();
    for (const auto& [k, c] : rec.margins) {
      margins[k] = number(c.slack);
      checks[k] = {{"kind", kind_name(c.kind)}, {"tolerance", c.tolerance}};
    }
    t["margins"] = margins;
    json flags = json::object();
    for (const auto& [k, f] : rec.flags) flags[k] = f.value;
    t["flags"] = flags;
    t["required_flags"] = json::array();
    for (const auto& [k, f] : rec.flags)
      if (f.required) t["required_flags"].push_back(k);
    t["pass"] = rec.pass;
    trials.push_back(std::move(t));
  }
  j["checks"] = checks;
  j["trials"] = trials;
  json mins = json::object();
  for (const auto& [k, v] : report.summary.min_margins) mins[k] = number(v);
  j["summary"] = {{"pass", report.summary.pass},
                  {"fail", report.summary.fail},
                  {"min_margins", mins},
                  {"wall_ms", report.summary.wall_ms}};
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  try {
    r.config.suite = parse_suite(j.at("suite").get<std::string>());
    r.config.p_list = j.at("p").get<std::vector<double>>();
    r.grid = j.at("grid").get<std::size_t>();
    r.config.grid_n = r.grid;
    r.config.rule_kind = j.at("rule").get<std::string>();
    r.config.master_seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    r.config.trials = j.value("trials_per_p", 1);
    r.config.tolerances =
        j.value("tolerance_overrides", std::map<std::string, double>{});
    const auto& checks = j.at("checks");
    for (const auto& t : j.at("trials")) {
      TrialRecord rec;
      rec.id = t.at("id").get<int>();
      rec.p = t.at("p").get<double>();
      rec.sub_seed = t.at("sub_seed").get<std::uint64_t>();
      rec.inputs = t.at("inputs").get<std::map<std::string, std::string>>();
      for (const auto& [k, v] : t.at("values").items()) rec.values[k] = from_number(v);
      for (const auto& [k, v] : t.at("margins").items()) {
        const auto& c = checks.at(k);
        rec.margins[k] = Check{c.at("kind") == "pass" ? CheckKind::Pass : CheckKind::Monitor,
                               from_number(v), c.at("tolerance").get<double>()};
      }
      const auto required = t.value("required_flags", std::vector<std::string>{});
      for (const auto& [k, v] : t.at("flags").items())
        rec.flags[k] = Flag{v.get<bool>(),
                            std::find(required.begin(), required.end(), k) != required.end()};
      rec.pass = t.at("pass").get<bool>();
      r.trials.push_back(std::move(rec));
    }
    const auto& s = j.at("summary");
    r.summary.pass = s.at("pass").get<int>();
    r.summary.fail = s.at("fail").get<int>();
    for (const auto& [k, v] : s.at("min_margins").items())
      r.summary.min_margins[k] = from_number(v);
    r.summary.wall_ms = s.at("wall_ms").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
  }
  return r;
}

nlohmann::json deterministic_view(const Report& report) {
  auto j = to_json(report);
  j["summary"].erase("wall_ms");
  return j;
}

}  // namespace twonorm
