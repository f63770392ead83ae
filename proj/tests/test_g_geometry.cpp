#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "twonorm/g_geometry.hpp"
#include "twonorm/lp_core.hpp"
#include "twonorm/rng.hpp"
#include "twonorm/two_norm.hpp"
#include "twonorm/verify.hpp"

using namespace twonorm;

namespace {

const double kPs[] = {1.0, 1.5, 2.0, 3.0};

// g written out from its definition with plain loops.
double g_direct(const GridFunction& x, const GridFunction& y, double p) {
  auto w = x.rule()->weights();
  double nx = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) nx += w[i] * std::pow(std::abs(x[i]), p);
  nx = std::pow(nx, 1.0 / p);
  if (nx == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (x[i] == 0.0) continue;
    s += w[i] * std::pow(std::abs(x[i]), p - 1.0) * (x[i] > 0 ? 1.0 : -1.0) * y[i];
  }
  return std::pow(nx, 2.0 - p) * s;
}

}  // namespace

TEST_CASE("g examples") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  CHECK(std::abs(g(t, t, 3.0) - std::pow(0.25, 2.0 / 3.0)) < 1e-5);
  CHECK(std::abs(g(one, t, 2.0) - 0.5) < 1e-14);
  CHECK(g(GridFunction(r), t, 1.5) == 0.0);
}

TEST_CASE("g agrees with its definition") {
  auto r = make_rule(RuleKind::Midpoint, 64);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto [x, y] = generate_pair(s, r);
    for (double p : kPs) CHECK(g(x, y, p) == doctest::Approx(g_direct(x, y, p)).epsilon(1e-12));
  }
}

TEST_CASE("gram determinant examples") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  CHECK(std::abs(gram_det(one, t, 2.0) - 1.0 / 12.0) < 1e-5);
  CHECK(gram_det(t, t, 3.0) == doctest::Approx(0.0));

  auto r4 = make_rule(RuleKind::Midpoint, 1024);
  auto one4 = sample(r4, [](double) { return 1.0; });
  auto t4 = sample(r4, [](double s) { return s; });
  const double fine = g_direct(one4, one4, 3.0) * g_direct(t4, t4, 3.0) -
                      g_direct(one4, t4, 3.0) * g_direct(t4, one4, 3.0);
  CHECK(gram_det(one, t, 3.0) == doctest::Approx(fine).epsilon(1e-4));
}

TEST_CASE("projection examples at p = 2") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  auto in_span = 2.0 * one - 3.0 * t;
  auto proj = g_projection(in_span, one, t, 2.0);
  for (std::size_t i = 0; i < r->size(); ++i) CHECK(std::abs(proj[i] - in_span[i]) < 1e-10);

  auto sq = sample(r, [](double s) { return s * s; });
  auto pq = g_projection(sq, one, t, 2.0);
  for (std::size_t i = 0; i < r->size(); ++i)
    CHECK(std::abs(pq[i] - (r->nodes()[i] - 1.0 / 6.0)) < 1e-5);

  // orthonormal pair: 1 and sqrt(12)(t - 1/2) up to quadrature error, so
  // normalize exactly on the grid
  auto c = t - 0.5 * one;
  c *= 1.0 / std::sqrt(pairing(c, c));
  auto e = sample(r, [](double s) { return std::exp(s); });
  auto pe = g_projection(e, one, c, 2.0);
  auto expand = g(one, e, 2.0) * one + g(c, e, 2.0) * c;
  for (std::size_t i = 0; i < r->size(); ++i) CHECK(std::abs(pe[i] - expand[i]) < 1e-10);
}

TEST_CASE("projection matches least squares at p = 2") {
  auto r = make_rule(RuleKind::Midpoint, 128);
  auto w = r->weights();
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto [y1, y2] = generate_pair(s, r);
    auto x = generate_function(s + 1000, r);
    Eigen::MatrixXd A(r->size(), 2);
    Eigen::VectorXd b(r->size());
    for (std::size_t i = 0; i < r->size(); ++i) {
      const double sw = std::sqrt(w[i]);
      A(i, 0) = sw * y1[i];
      A(i, 1) = sw * y2[i];
      b(i) = sw * x[i];
    }
    Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    auto proj = g_projection(x, y1, y2, 2.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < r->size(); ++i) scale = std::max(scale, std::abs(x[i]));
    for (std::size_t i = 0; i < r->size(); ++i)
      CHECK(std::abs(proj[i] - (c(0) * y1[i] + c(1) * y2[i])) < 1e-8 * scale);
  }
}

TEST_CASE("singular gram is reported") {
  auto r = make_rule(RuleKind::Midpoint, 16);
  auto t = sample(r, [](double s) { return s; });
  auto x = sample(r, [](double s) { return s * s; });
  try {
    g_projection(x, t, 2.0 * t, 1.5);
    FAIL("expected singular gram");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularGram);
  }
}

TEST_CASE("orthogonalization") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  auto [a, b] = g_orthogonalize(one, t, 2.0);
  for (std::size_t i = 0; i < r->size(); ++i) {
    CHECK(a[i] == 1.0);
    CHECK(std::abs(b[i] - (r->nodes()[i] - 0.5)) < 1e-14);
  }
  auto [c, d] = g_orthogonalize(t, -4.0 * t, 3.0);
  for (std::size_t i = 0; i < r->size(); ++i) CHECK(std::abs(d[i]) < 1e-14);

  for (std::uint64_t s = 0; s < 10; ++s) {
    auto [x1, x2] = generate_pair(s, r);
    for (double p : kPs) {
      auto [o1, o2] = g_orthogonalize(x1, x2, p);
      CHECK(std::abs(g(o1, o2, p)) <= 1e-10 * lp_norm(o1, p) * lp_norm(x2, p));
    }
  }
  try {
    g_orthogonalize(GridFunction(r), t, 2.0);
    FAIL("expected degenerate input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateInput);
  }
}

TEST_CASE("volume") {
  auto r = make_rule(RuleKind::Midpoint, 256);
  auto one = sample(r, [](double) { return 1.0; });
  auto t = sample(r, [](double s) { return s; });
  CHECK(std::abs(volume(one, t, 2.0) - 1.0 / std::sqrt(12.0)) < 1e-5);
  CHECK(volume(t, 2.5 * t, 1.5) == doctest::Approx(0.0));
  CHECK(volume(GridFunction(r), t, 3.0) == 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto [x1, x2] = generate_pair(s, r);
    CHECK(volume(x1, x2, 2.0) == doctest::Approx(std::sqrt(gram_det(x1, x2, 2.0))).epsilon(1e-8));
    for (double p : kPs) CHECK(volume(x1, x2, p) <= gahler_norm(x1, x2, p).value * (1 + 1e-4));
  }
}

TEST_CASE("g properties on random pairs") {
  auto r = make_rule(RuleKind::Midpoint, 128);
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto [x, y] = generate_pair(rng.next(), r);
    auto z = generate_function(rng.next(), r);
    const double a = rng.uniform(0.1, 2.0) * (trial % 2 ? -1 : 1), b = rng.uniform(-2, 2);
    for (double p : kPs) {
      const double nx = lp_norm(x, p), ny = lp_norm(y, p);
      CHECK(g(x, x, p) == doctest::Approx(nx * nx).epsilon(1e-10));
      CHECK(g(a * x, b * y, p) == doctest::Approx(a * b * g(x, y, p)).epsilon(1e-10));
      CHECK(std::abs(g(x, x + y, p) - nx * nx - g(x, y, p)) <= 1e-10 * nx * (nx + ny));
      CHECK(std::abs(g(x, y, p)) <= nx * ny + 1e-10);
      CHECK(std::abs(g(x, y + z, p) - g(x, y, p) - g(x, z, p)) <= 1e-12 * nx * (ny + lp_norm(z, p)));
    }
  }
}
