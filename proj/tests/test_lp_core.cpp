#include <doctest.h>

#include <cmath>

#include "twonorm/lp_core.hpp"
#include "twonorm/rng.hpp"
#include "twonorm/verify.hpp"

using namespace twonorm;

namespace {

const double kPs[] = {1.0, 1.5, 2.0, 3.0};

RulePtr mid(std::size_t n) { return make_rule(RuleKind::Midpoint, n); }

}  // namespace

TEST_CASE("conjugate exponents") {
  CHECK(conjugate_exponent(2.0).q == 2.0);
  CHECK(conjugate_exponent(3.0).q == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(std::isinf(conjugate_exponent(1.0).q));
  for (double bad : {0.5, -1.0, std::nan(""), kInfinity}) {
    try {
      conjugate_exponent(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
}

TEST_CASE("lp norms against antiderivatives") {
  auto r = mid(256);
  auto one = sample(r, [](double) { return 1.0; });
  for (double p : kPs) CHECK(lp_norm(one, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(one, kInfinity) == 1.0);
  auto t = sample(r, [](double s) { return s; });
  // midpoint error for t^2 is h^2/12
  CHECK(std::abs(lp_norm(t, 2.0) - 1.0 / std::sqrt(3.0)) < 1e-5);
  CHECK(std::abs(lp_norm(t, 1.0) - 0.5) < 1e-14);
  CHECK(std::abs(lp_norm(t, 3.0) - std::pow(0.25, 1.0 / 3.0)) < 1e-5);
}

TEST_CASE("pairings against antiderivatives") {
  auto r = mid(256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  CHECK(std::abs(pairing(one, t) - 0.5) < 1e-14);
  CHECK(pairing(t, GridFunction(r)) == 0.0);
  CHECK(std::abs(pairing(t, t) - 1.0 / 3.0) < 1e-5);
}

TEST_CASE("pairing is symmetric bit for bit") {
  auto r = mid(64);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto [x, y] = generate_pair(s, r);
    CHECK(pairing(x, y) == pairing(y, x));
  }
}

TEST_CASE("holder extremal examples") {
  auto r = mid(256);
  auto one = sample(r, [](double) { return 1.0; });
  auto h = holder_extremal(one, 3.0);
  CHECK(h.value == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < r->size(); ++i) CHECK(h.y[i] == doctest::Approx(1.0).epsilon(1e-14));

  auto t = sample(r, [](double s) { return s; });
  auto ht = holder_extremal(t, 2.0);
  CHECK(std::abs(ht.value - 1.0 / std::sqrt(3.0)) < 1e-5);
  for (std::size_t i = 0; i < r->size(); ++i)
    CHECK(std::abs(ht.y[i] - std::sqrt(3.0) * r->nodes()[i]) < 1e-4);

  auto hz = holder_extremal(GridFunction(r), 2.0);
  CHECK(hz.degenerate);
  CHECK(hz.value == 0.0);
  CHECK(hz.y.is_zero());
}

TEST_CASE("p = 1 extremal is the sign with sgn(0) = 0") {
  auto r = mid(4);
  GridFunction z(r, {2.0, 0.0, -0.5, 1.0});
  auto h = holder_extremal(z, 1.0);
  CHECK(h.y[0] == 1.0);
  CHECK(h.y[1] == 0.0);
  CHECK(h.y[2] == -1.0);
  CHECK(h.y[3] == 1.0);
  CHECK(sgn(0.0) == 0.0);
  CHECK(sgn(-0.0) == 0.0);
}

TEST_CASE("holder inequality, tightness, feasibility and homogeneity") {
  auto r = mid(128);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto [x, y] = generate_pair(rng.next(), r);
    for (double p : kPs) {
      const double q = conjugate_exponent(p).q;
      CHECK(std::abs(pairing(x, y)) <= lp_norm(x, p) * lp_norm(y, q) + 1e-12);
      auto h = holder_extremal(x, p);
      CHECK(pairing(x, h.y) == doctest::Approx(lp_norm(x, p)).epsilon(1e-10));
      if (p > 1.0)
        CHECK(std::abs(lp_norm(h.y, q) - 1.0) < 1e-10);
      else
        CHECK(lp_norm(h.y, q) <= 1.0 + 1e-12);
      const double a = rng.uniform(-3.0, 3.0);
      CHECK(lp_norm(a * x, p) == doctest::Approx(std::abs(a) * lp_norm(x, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lp norm does not overflow on large samples") {
  auto r = mid(4);
  GridFunction x(r, {1e300, 1e300, 0.0, 0.0});
  CHECK(lp_norm(x, 2.0) == doctest::Approx(1e300 * std::sqrt(0.5)));
}
