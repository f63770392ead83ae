#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "twonorm/g_geometry.hpp"
#include "twonorm/lp_core.hpp"
#include "twonorm/spec.hpp"
#include "twonorm/two_functional.hpp"
#include "twonorm/two_norm.hpp"
#include "twonorm/verify.hpp"

namespace twonorm::cli {

namespace {

std::string format_value(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

nlohmann::json estimate_json(const NormEstimate& est) {
  return {{"value", est.value},
          {"converged", est.converged},
          {"iterations", est.iterations},
          {"starts", est.starts},
          {"is_lower_bound", est.is_lower_bound}};
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw Error(ErrorKind::Parse, "bad --p-list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Norm2Args {
  std::string norm, f1, f2, rule = "midpoint", json;
  double p = 2.0;
  std::size_t grid = 256;
  std::uint64_t seed = 0;
};

int cmd_norm2(const Norm2Args& a, std::ostream& out, std::ostream& err) {
  const RulePtr rule = make_rule(a.rule, a.grid);
  const GridFunction x1 = sample_function(rule, parse_function_spec(a.f1));
  const GridFunction x2 = sample_function(rule, parse_function_spec(a.f2));
  conjugate_exponent(a.p);
  nlohmann::json j{{"command", "norm2"}, {"norm", a.norm}, {"p", a.p},
                   {"grid", a.grid},     {"rule", rule->digest()},
                   {"f1", a.f1},         {"f2", a.f2}};
  double value = 0.0;
  bool converged = true;
  if (a.norm == "gunawan") {
    value = gunawan_norm(x1, x2, a.p);
    j["value"] = value;
    j["is_lower_bound"] = false;
  } else if (a.norm == "volume") {
    value = volume(x1, x2, a.p);
    j["value"] = value;
    j["is_lower_bound"] = false;
  } else {
    OptimizerOptions opts;
    opts.seed = a.seed;
    const auto est = gahler_norm(x1, x2, a.p, opts);
    value = est.value;
    converged = est.converged;
    j.update(estimate_json(est));
  }
  out << format_value(value) << '\n';
  if (!a.json.empty()) write_json(a.json, j);
  if (!converged) {
    err << "warning: optimizer did not converge; value is a lower bound\n";
    return kNotConverged;
  }
  return kOk;
}

struct FnormArgs {
  std::string kind, kernel, rule = "midpoint", json;
  double p = 2.0;
  std::size_t grid = 64;
  std::uint64_t seed = 0;
};

int cmd_fnorm(const FnormArgs& a, std::ostream& out, std::ostream& err) {
  const RulePtr rule = make_rule(a.rule, a.grid);
  const Kernel theta = sample_kernel(rule, parse_kernel_spec(a.kernel));
  NormEstimate est;
  if (a.kind == "y" || a.kind == "21") {
    OperatorOptions opts;
    opts.seed = a.seed;
    est = a.kind == "y" ? yq_norm(theta, a.p, opts) : fnorm_21(theta, a.p, opts);
  } else {
    RatioOptions opts;
    opts.seed = a.seed;
    opts.gahler.seed = a.seed;
    est = a.kind == "g22" ? fnorm_22_G(theta, a.p, opts) : fnorm_22_H(theta, a.p, opts);
  }
  out << format_value(est.value) << '\n';
  if (!a.json.empty()) {
    nlohmann::json j{{"command", "fnorm"}, {"kind", a.kind},          {"p", a.p},
                     {"grid", a.grid},     {"rule", rule->digest()},  {"kernel", a.kernel}};
    j.update(estimate_json(est));
    write_json(a.json, j);
  }
  if (!est.converged) {
    err << "warning: optimizer did not converge; value is a lower bound\n";
    return kNotConverged;
  }
  return kOk;
}

struct VerifyArgs {
  std::string suite = "all", p_list = "1,1.5,2,3", out, rule = "midpoint";
  int trials = 100;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  int parallel = 1;
  std::vector<std::string> tolerances;
};

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    std::size_t used = 0;
    double v = 0.0;
    if (eq != std::string::npos && eq > 0) {
      try {
        v = std::stod(item.substr(eq + 1), &used);
      } catch (const std::exception&) {
        used = 0;
      }
    }
    if (used == 0 || eq + 1 + used != item.size())
      throw Error(ErrorKind::Parse, "bad --tolerance '" + item + "', expected check=value");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<SuiteId> ids;
  if (a.suite == "all")
    ids = all_suites();
  else
    ids.push_back(parse_suite(a.suite));
  SuiteConfig base;
  base.p_list = parse_p_list(a.p_list);
  base.grid_n = a.grid;
  base.rule_kind = a.rule;
  base.trials = a.trials;
  base.master_seed = a.seed;
  base.parallel = a.parallel;
  base.tolerances = parse_tolerances(a.tolerances);
  nlohmann::json docs = nlohmann::json::array();
  bool ok = true;
  for (SuiteId id : ids) {
    SuiteConfig cfg = base;
    cfg.suite = id;
    const Report report = run_suite(cfg);
    ok = ok && report.all_pass();
    double min_margin = kInfinity;
    for (const auto& [name, v] : report.summary.min_margins) min_margin = std::min(min_margin, v);
    out << "suite=" << to_string(id) << " pass=" << report.summary.pass
        << " fail=" << report.summary.fail << " min_margin=" << std::setprecision(6)
        << min_margin + 0.0 << '\n';
    docs.push_back(to_json(report));
  }
  if (!a.out.empty()) write_json(a.out, docs.size() == 1 ? docs[0] : docs);
  return ok ? kOk : kSuiteFailure;
}

struct GenArgs {
  std::string what, spec, rule = "midpoint", out;
  std::size_t grid = 256;
};

int cmd_gen(const GenArgs& a) {
  const RulePtr rule = make_rule(a.rule, a.grid);
  if (a.what == "function")
    write_function_csv(sample_function(rule, parse_function_spec(a.spec)), a.out);
  else
    write_kernel_csv(sample_kernel(rule, parse_kernel_spec(a.spec)), a.out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-norms, semi-inner products and 2-dual norms on discretized L^p[0,1]",
               "twonorm"};
  app.require_subcommand(1);

  Norm2Args n2;
  auto* norm2 = app.add_subcommand("norm2", "Gunawan or Gahler 2-norm, or the volume, of a pair");
  norm2->add_option("--norm", n2.norm)->required()->check(CLI::IsMember({"gunawan", "gahler", "volume"}));
  norm2->add_option("--p", n2.p)->required();
  norm2->add_option("--f1", n2.f1)->required();
  norm2->add_option("--f2", n2.f2)->required();
  norm2->add_option("--grid", n2.grid)->capture_default_str();
  norm2->add_option("--rule", n2.rule)->capture_default_str();
  norm2->add_option("--json", n2.json);
  norm2->add_option("--seed", n2.seed)->capture_default_str();

  FnormArgs fa;
  auto* fnorm = app.add_subcommand("fnorm", "Norm of the bilinear 2-functional of a kernel");
  fnorm->add_option("--kind", fa.kind)->required()->check(CLI::IsMember({"y", "21", "g22", "h22"}));
  fnorm->add_option("--p", fa.p)->capture_default_str();
  fnorm->add_option("--kernel", fa.kernel)->required();
  fnorm->add_option("--grid", fa.grid)->capture_default_str();
  fnorm->add_option("--rule", fa.rule)->capture_default_str();
  fnorm->add_option("--json", fa.json);
  fnorm->add_option("--seed", fa.seed)->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run seeded property suites and write a JSON report");
  verify->add_option("--suite", va.suite, "suite id or 'all'")->capture_default_str();
  verify->add_option("--p-list", va.p_list)->capture_default_str();
  verify->add_option("--trials", va.trials)->capture_default_str();
  verify->add_option("--grid", va.grid, "0 = per-suite default")->capture_default_str();
  verify->add_option("--rule", va.rule)->capture_default_str();
  verify->add_option("--seed", va.seed)->capture_default_str();
  verify->add_option("--out", va.out);
  verify->add_option("--parallel", va.parallel)->capture_default_str();
  verify->add_option("--tolerance", va.tolerances, "per-check override, check=value (repeatable)");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Write a sampled function or kernel as CSV");
  gen->add_option("--what", ga.what)->required()->check(CLI::IsMember({"function", "kernel"}));
  gen->add_option("--spec", ga.spec)->required();
  gen->add_option("--grid", ga.grid)->capture_default_str();
  gen->add_option("--rule", ga.rule)->capture_default_str();
  gen->add_option("--out", ga.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*norm2) return cmd_norm2(n2, out, err);
    if (*fnorm) return cmd_fnorm(fa, out, err);
    if (*verify) return cmd_verify(va, out);
    if (*gen) return cmd_gen(ga);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidConfig ? kUsage : kInput;
  }
  return kUsage;
}

}  // namespace twonorm::cli
