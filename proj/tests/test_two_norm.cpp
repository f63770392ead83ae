#include <doctest.h>

#include <cmath>

#include "twonorm/lp_core.hpp"
#include "twonorm/rng.hpp"
#include "twonorm/two_norm.hpp"
#include "twonorm/verify.hpp"

using namespace twonorm;

namespace {

const double kPs[] = {1.0, 1.5, 2.0, 3.0};

// (1/2 sum_i sum_j w_i w_j |x1_i x2_j - x1_j x2_i|^p)^(1/p) over the full square.
double gunawan_full_square(const GridFunction& x1, const GridFunction& x2, double p) {
  auto w = x1.rule()->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      s += w[i] * w[j] * std::pow(std::abs(x1[i] * x2[j] - x1[j] * x2[i]), p);
  return std::pow(0.5 * s, 1.0 / p);
}

double gram_oracle(const GridFunction& a, const GridFunction& b) {
  auto w = a.rule()->weights();
  double aa = 0, bb = 0, ab = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    aa += w[i] * a[i] * a[i];
    bb += w[i] * b[i] * b[i];
    ab += w[i] * a[i] * b[i];
  }
  return std::sqrt(std::max(0.0, aa * bb - ab * ab));
}

// For p = 1 the dual ball is the sup-norm cube; the determinant is linear in
// each dual vector, so its maximum sits at a pair of sign vectors.
double gahler_p1_vertices(const GridFunction& x1, const GridFunction& x2) {
  const std::size_t n = x1.size();
  auto w = x1.rule()->weights();
  double best = 0.0;
  for (unsigned m1 = 0; m1 < (1u << n); ++m1)
    for (unsigned m2 = 0; m2 < (1u << n); ++m2) {
      double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s1 = (m1 >> i) & 1 ? 1.0 : -1.0;
        const double s2 = (m2 >> i) & 1 ? 1.0 : -1.0;
        a1 += w[i] * x1[i] * s1;
        a2 += w[i] * x1[i] * s2;
        b1 += w[i] * x2[i] * s1;
        b2 += w[i] * x2[i] * s2;
      }
      best = std::max(best, std::abs(a1 * b2 - a2 * b1));
    }
  return best;
}

// Two nodes: scan both dual vectors over the boundary of the q-ball.
double gahler_two_node_scan(const GridFunction& x1, const GridFunction& x2, double p) {
  const double q = conjugate_exponent(p).q;
  auto w = x1.rule()->weights();
  const int steps = 2000;
  std::vector<std::array<double, 2>> ys(steps);
  for (int k = 0; k < steps; ++k) {
    const double th = M_PI * k / steps;
    double c = std::cos(th), s = std::sin(th);
    const double nrm = std::pow(w[0] * std::pow(std::abs(c), q) + w[1] * std::pow(std::abs(s), q), 1.0 / q);
    ys[k] = {c / nrm, s / nrm};
  }
  double best = 0.0;
  for (const auto& y1 : ys)
    for (const auto& y2 : ys) {
      const double a1 = w[0] * x1[0] * y1[0] + w[1] * x1[1] * y1[1];
      const double a2 = w[0] * x1[0] * y2[0] + w[1] * x1[1] * y2[1];
      const double b1 = w[0] * x2[0] * y1[0] + w[1] * x2[1] * y1[1];
      const double b2 = w[0] * x2[0] * y2[0] + w[1] * x2[1] * y2[1];
      best = std::max(best, std::abs(a1 * b2 - a2 * b1));
    }
  return best;
}

}  // namespace

TEST_CASE("gunawan examples") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  CHECK(gunawan_norm(t, 3.0 * t, 2.0) == 0.0);
  CHECK(std::abs(gunawan_norm(one, t, 2.0) - 1.0 / std::sqrt(12.0)) < 1e-5);
  CHECK(std::abs(gunawan_norm(one, t, 1.0) - 1.0 / 6.0) < 1e-5);
}

TEST_CASE("gunawan matches the full-square sum") {
  auto r = make_rule(RuleKind::Trapezoid, 48);
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto [x1, x2] = generate_pair(s, r);
    for (double p : kPs)
      CHECK(gunawan_norm(x1, x2, p) == doctest::Approx(gunawan_full_square(x1, x2, p)).epsilon(1e-12));
  }
}

TEST_CASE("gahler examples at p = 2") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  auto est = gahler_norm(one, t, 2.0);
  CHECK(est.is_lower_bound);
  CHECK(est.converged);
  CHECK(est.value == doctest::Approx(gram_oracle(one, t)).epsilon(1e-6));
  CHECK(std::abs(est.value - 1.0 / std::sqrt(12.0)) < 1e-5);
  CHECK(gahler_norm(t, -2.0 * t, 2.0).value == 0.0);

  for (std::uint64_t s = 0; s < 10; ++s) {
    auto [x1, x2] = generate_pair(s, r);
    CHECK(gahler_norm(x1, x2, 2.0).value == doctest::Approx(gram_oracle(x1, x2)).epsilon(1e-6));
  }
}

TEST_CASE("gahler at p = 1 reaches the best sign-vector pair") {
  auto r = make_rule(RuleKind::Midpoint, 8);
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(8), b(8);
    for (auto& v : a) v = rng.uniform(-1, 1);
    for (auto& v : b) v = rng.uniform(-1, 1);
    GridFunction x1(r, a), x2(r, b);
    const double oracle = gahler_p1_vertices(x1, x2);
    OptimizerOptions opts;
    opts.seed = rng.next();
    const double v = gahler_norm(x1, x2, 1.0, opts).value;
    CHECK(v <= oracle * (1 + 1e-12));
    CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("gahler on two nodes matches a dense scan of the dual ball") {
  auto r = make_rule(RuleKind::Midpoint, 2);
  SplitMix64 rng(9);
  for (double p : {1.5, 3.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      GridFunction x1(r, {rng.uniform(-1, 1), rng.uniform(-1, 1)});
      GridFunction x2(r, {rng.uniform(-1, 1), rng.uniform(-1, 1)});
      const double scan = gahler_two_node_scan(x1, x2, p);
      const double v = gahler_norm(x1, x2, p).value;
      CHECK(v >= scan * (1 - 1e-12));
      CHECK(v == doctest::Approx(scan).epsilon(1e-5));
    }
  }
}

TEST_CASE("gahler determinant of extremal duals equals the value") {
  auto r = make_rule(RuleKind::Midpoint, 64);
  auto [x1, x2] = generate_pair(17, r);
  for (double p : kPs) {
    auto est = gahler_norm(x1, x2, p);
    REQUIRE(est.maximizers.size() == 2);
    CHECK(std::abs(gahler_determinant(x1, x2, est.maximizers[0], est.maximizers[1])) ==
          doctest::Approx(est.value).epsilon(1e-12));
    const double q = conjugate_exponent(p).q;
    CHECK(lp_norm(est.maximizers[0], q) <= 1 + 1e-12);
    CHECK(lp_norm(est.maximizers[1], q) <= 1 + 1e-12);
  }
}

TEST_CASE("gahler is deterministic for a fixed seed and symmetric under swap") {
  auto r = make_rule(RuleKind::Midpoint, 64);
  auto [x1, x2] = generate_pair(23, r);
  OptimizerOptions opts;
  opts.seed = 77;
  for (double p : kPs) {
    CHECK(gahler_norm(x1, x2, p, opts).value == gahler_norm(x1, x2, p, opts).value);
    CHECK(gahler_norm(x1, x2, p, opts).value == gahler_norm(x2, x1, p, opts).value);
  }
}

TEST_CASE("both norms obey the 2-norm axioms on random pairs") {
  auto r = make_rule(RuleKind::Midpoint, 64);
  SplitMix64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    auto [x1, x2] = generate_pair(rng.next(), r);
    auto x3 = generate_function(rng.next(), r);
    const double a = rng.uniform(-2, 2);
    for (double p : kPs) {
      const double h = gunawan_norm(x1, x2, p);
      CHECK(gunawan_norm(x1, a * x1, p) <= 1e-8);
      CHECK(gunawan_norm(x2, x1, p) == doctest::Approx(h).epsilon(1e-12));
      CHECK(gunawan_norm(a * x1, x2, p) == doctest::Approx(std::abs(a) * h).epsilon(1e-12));
      CHECK(gunawan_norm(x1 + x3, x2, p) <= h + gunawan_norm(x3, x2, p) + 1e-12);

      const double g = gahler_norm(x1, x2, p).value;
      CHECK(gahler_norm(x1, a * x1, p).value <= 1e-8);
      CHECK(gahler_norm(a * x1, x2, p).value == doctest::Approx(std::abs(a) * g).epsilon(1e-8));
    }
  }
}

TEST_CASE("sandwich between the two norms") {
  auto r = make_rule(RuleKind::Midpoint, 64);
  for (std::uint64_t s = 100; s < 110; ++s) {
    auto [x1, x2] = generate_pair(s, r);
    for (double p : kPs) {
      const double h = gunawan_norm(x1, x2, p);
      const double g = gahler_norm(x1, x2, p).value;
      CHECK(g >= std::pow(2.0, 1.0 / p - 1.0) * h * (1 - 1e-6));
      CHECK(g <= std::pow(2.0, 1.0 / p) * h * (1 + 1e-6));
    }
  }
}

TEST_CASE("grid mismatch") {
  auto a = make_rule(RuleKind::Midpoint, 8);
  auto b = make_rule(RuleKind::Midpoint, 16);
  auto fa = sample(a, [](double t) { return t; });
  auto fb = sample(b, [](double t) { return t; });
  CHECK_THROWS_AS(gunawan_norm(fa, fb, 2.0), Error);
  CHECK_THROWS_AS(gahler_norm(fa, fb, 2.0), Error);
}
