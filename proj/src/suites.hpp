#pragma once

#include <map>
#include <string>

#include "twonorm/verify.hpp"

namespace twonorm::suites {

struct TrialContext {
  RulePtr rule;
  double p = 2.0;
  int id = 0;
  std::uint64_t seed = 0;
  const std::map<std::string, double>* overrides = nullptr;
};

TrialRecord axioms(const TrialContext& ctx);
TrialRecord sandwich(const TrialContext& ctx);
TrialRecord isometry(const TrialContext& ctx);
TrialRecord g_properties(const TrialContext& ctx);
TrialRecord geometry_volume(const TrialContext& ctx);
TrialRecord functional_bounds(const TrialContext& ctx);
TrialRecord roundtrip(const TrialContext& ctx);
TrialRecord quadrature_convergence(const TrialContext& ctx);

}  // namespace twonorm::suites
