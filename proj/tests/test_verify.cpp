#include <doctest.h>

#include <set>

#include "twonorm/verify.hpp"

using namespace twonorm;

namespace {

SuiteConfig small(SuiteId id, int trials) {
  SuiteConfig c;
  c.suite = id;
  c.trials = trials;
  c.master_seed = 42;
  return c;
}

}  // namespace

TEST_CASE("suite names round-trip") {
  for (SuiteId id : all_suites()) CHECK(parse_suite(to_string(id)) == id);
  CHECK(all_suites().size() == 8);
  try {
    parse_suite("nope");
    FAIL("expected unknown suite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownSuite);
  }
}

TEST_CASE("default grids") {
  CHECK(default_grid(SuiteId::Axioms) == 256);
  CHECK(default_grid(SuiteId::FunctionalBounds) == 64);
  CHECK(default_grid(SuiteId::Isometry) == 64);
}

TEST_CASE("trial seeds are deterministic and distinct") {
  std::set<std::uint64_t> seen;
  for (SuiteId id : all_suites())
    for (double p : {1.0, 1.5, 2.0, 3.0})
      for (int t = 0; t < 50; ++t) {
        const auto s = trial_seed(42, id, p, t);
        CHECK(s == trial_seed(42, id, p, t));
        seen.insert(s);
      }
  CHECK(seen.size() == 8 * 4 * 50);
  CHECK(trial_seed(42, SuiteId::Axioms, 2.0, 0) != trial_seed(43, SuiteId::Axioms, 2.0, 0));
}

TEST_CASE("config validation") {
  auto bad = [](auto mutate) {
    SuiteConfig c;
    mutate(c);
    try {
      validate(c);
      return false;
    } catch (const Error& e) {
      return e.kind() == ErrorKind::InvalidConfig;
    }
  };
  CHECK(bad([](SuiteConfig& c) { c.trials = 0; }));
  CHECK(bad([](SuiteConfig& c) { c.p_list = {0.5}; }));
  CHECK(bad([](SuiteConfig& c) { c.p_list = {}; }));
  CHECK(bad([](SuiteConfig& c) { c.parallel = 0; }));
  CHECK_NOTHROW(validate(SuiteConfig{}));
}

TEST_CASE("trial pass requires margins and required flags") {
  TrialRecord r;
  r.margins["a"] = Check{CheckKind::Pass, -1e-9, 1e-8};
  r.finalize();
  CHECK(r.pass);
  r.margins["b"] = Check{CheckKind::Monitor, -2e-4, 1e-4};
  r.finalize();
  CHECK_FALSE(r.pass);
  r.margins.erase("b");
  r.flags["converged"] = Flag{false, false};
  r.finalize();
  CHECK(r.pass);
  r.flags["converged"] = Flag{false, true};
  r.finalize();
  CHECK_FALSE(r.pass);
}

TEST_CASE("generators are deterministic") {
  auto r = make_rule(RuleKind::Midpoint, 32);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto [a, b] = generate_pair(s, r);
    auto [c, d] = generate_pair(s, r);
    CHECK(sample_digest(a.samples()) == sample_digest(c.samples()));
    CHECK(sample_digest(b.samples()) == sample_digest(d.samples()));
    auto k1 = generate_kernel(s, r, true), k2 = generate_kernel(s, r, true);
    CHECK(sample_digest(k1.samples()) == sample_digest(k2.samples()));
  }
}

TEST_CASE("small suites pass and reports round-trip through JSON") {
  for (SuiteId id : {SuiteId::Roundtrip, SuiteId::GProperties, SuiteId::Sandwich}) {
    auto c = small(id, 3);
    c.grid_n = 32;
    auto report = run_suite(c);
    CHECK(report.trials.size() == 12);
    CHECK(report.all_pass());
    CHECK(report.summary.pass == 12);
    auto j = to_json(report);
    CHECK(j.at("suite") == to_string(id));
    CHECK(j.at("grid") == 32);
    CHECK(j.at("version") == kVersion);
    auto back = report_from_json(j);
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("parallel and serial runs give identical reports") {
  for (SuiteId id : {SuiteId::Axioms, SuiteId::GeometryVolume}) {
    auto c = small(id, 3);
    c.grid_n = 32;
    const auto serial = deterministic_view(run_suite(c));
    c.parallel = 4;
    const auto parallel = deterministic_view(run_suite(c));
    CHECK(serial == parallel);
    CHECK_FALSE(serial.at("summary").contains("wall_ms"));
  }
}

TEST_CASE("tolerance overrides are applied") {
  auto c = small(SuiteId::Roundtrip, 2);
  c.grid_n = 16;
  c.p_list = {2.0};
  c.tolerances["kernel_recovered"] = -1.0;
  auto report = run_suite(c);
  CHECK(report.summary.fail == 2);
  CHECK(report.trials[0].margins.at("kernel_recovered").tolerance == -1.0);
}
