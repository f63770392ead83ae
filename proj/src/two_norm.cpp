#include "twonorm/two_norm.hpp"

#include <algorithm>
#include <cmath>

#include "twonorm/lp_core.hpp"
#include "twonorm/rng.hpp"

namespace twonorm {

double gunawan_norm(const GridFunction& x1, const GridFunction& x2, double p) {
  require_same_grid(x1, x2);
  conjugate_exponent(p);
  auto w = x1.rule()->weights();
  auto a = x1.samples();
  auto b = x2.samples();
  const std::size_t n = a.size();
  // The integrand is symmetric in (u, v) and vanishes on the diagonal, so the
  // 1/2 cancels against summing the strict upper triangle once.
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(a[i] * b[j] - a[j] * b[i]);
      double term;
      if (p == 1.0)
        term = d;
      else if (p == 2.0)
        term = d * d;
      else
        term = std::pow(d, p);
      row += w[j] * term;
    }
    acc += w[i] * row;
  }
  if (p == 1.0) return acc;
  if (p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / p);
}

double gahler_determinant(const GridFunction& x1, const GridFunction& x2,
                          const GridFunction& y1, const GridFunction& y2) {
  return pairing(x1, y1) * pairing(x2, y2) - pairing(x2, y1) * pairing(x1, y2);
}

namespace {

struct Ascent {
  std::vector<double> y1, y2;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Maximizes <a,y1><b,y2> - <b,y1><a,y2> from a fixed y2 = start, updating y1
// then y2 in closed form. The same expressions are used for every argument
// order so mirrored runs agree exactly.
Ascent ascend(std::span<const double> w, std::span<const double> a,
              std::span<const double> b, std::span<const double> start, double p,
              const OptimizerOptions& opts) {
  const std::size_t n = a.size();
  Ascent r;
  r.y1.assign(n, 0.0);
  r.y2.assign(start.begin(), start.end());
  std::vector<double> z(n);
  double prev = -kInfinity;
  for (int it = 1; it <= opts.max_iter; ++it) {
    double ca = detail::pairing(w, b, r.y2);
    double cb = detail::pairing(w, a, r.y2);
    for (std::size_t i = 0; i < n; ++i) z[i] = ca * a[i] - cb * b[i];
    detail::holder_extremal(w, z, p, r.y1);

    ca = detail::pairing(w, a, r.y1);
    cb = detail::pairing(w, b, r.y1);
    for (std::size_t i = 0; i < n; ++i) z[i] = ca * b[i] - cb * a[i];
    const double value = detail::holder_extremal(w, z, p, r.y2);

    r.iterations = it;
    r.value = value;
    if (value - prev <= opts.tol * std::abs(value) || value == 0.0) {
      r.converged = true;
      break;
    }
    prev = value;
  }
  return r;
}

std::vector<double> random_dual_unit(SplitMix64& g, std::span<const double> w,
                                     double q) {
  std::vector<double> s(w.size());
  for (double& v : s) v = g.uniform(-1.0, 1.0);
  const double norm = detail::lp_norm(w, s, q);
  for (double& v : s) v /= norm;
  return s;
}

// The pairings (<a,y>, <b,y>) over the dual unit ball fill a convex set K in
// the plane with support function c -> ||c1 a + c2 b||_p, and the supremum is
// max over boundary points k of K of ||k1 b - k2 a||_p. A boundary point is
// reached by the extremal of c1 a + c2 b for c = (cos phi, sin phi), so the
// problem is one-dimensional in phi. Returns the second dual vector for phi,
// which is an ascent start; `value` receives the determinant it attains.
std::vector<double> angle_start(std::span<const double> w, std::span<const double> a,
                                std::span<const double> b, double phi, double p,
                                double& value) {
  const std::size_t n = a.size();
  const double c1 = std::cos(phi), c2 = std::sin(phi);
  std::vector<double> z(n), y(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = c1 * a[i] + c2 * b[i];
  detail::holder_extremal(w, z, p, y);
  const double k1 = detail::pairing(w, a, y), k2 = detail::pairing(w, b, y);
  for (std::size_t i = 0; i < n; ++i) z[i] = k1 * b[i] - k2 * a[i];
  value = detail::holder_extremal(w, z, p, y);
  return y;
}

struct Scanned {
  double value;
  std::vector<double> y2;
};

// For p = 1, K is a polygon whose vertices come from the sign patterns of
// c1 a + c2 b; these change only where a component vanishes, so one angle per
// gap between consecutive breakpoints visits every vertex. Otherwise a uniform
// scan, keeping its local maxima.
std::vector<Scanned> scan_angles(std::span<const double> w, std::span<const double> a,
                                 std::span<const double> b, double p, int angles,
                                 std::size_t keep) {
  std::vector<double> phis;
  bool circular_local_max = true;
  if (p == 1.0) {
    std::vector<double> breaks;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0 && b[i] == 0.0) continue;
      double t = std::atan2(-a[i], b[i]);
      if (t < 0.0) t += M_PI;
      if (t >= M_PI) t -= M_PI;
      breaks.push_back(t);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    for (std::size_t k = 0; k < breaks.size(); ++k) {
      const double lo = breaks[k];
      const double hi = k + 1 < breaks.size() ? breaks[k + 1] : breaks[0] + M_PI;
      phis.push_back(0.5 * (lo + hi));
    }
    circular_local_max = false;
  } else {
    for (int k = 0; k < angles; ++k) phis.push_back(M_PI * k / angles);
  }
  std::vector<Scanned> all;
  all.reserve(phis.size());
  for (double phi : phis) {
    double v = 0.0;
    auto y = angle_start(w, a, b, phi, p, v);
    all.push_back({v, std::move(y)});
  }
  std::vector<std::size_t> idx;
  const std::size_t m = all.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (!circular_local_max) {
      idx.push_back(k);
      continue;
    }
    const double prev = all[(k + m - 1) % m].value, next = all[(k + 1) % m].value;
    if (all[k].value >= prev && all[k].value >= next) idx.push_back(k);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return all[i].value > all[j].value; });
  if (idx.size() > keep) idx.resize(keep);
  std::vector<Scanned> out;
  for (std::size_t i : idx) out.push_back(std::move(all[i]));
  return out;
}

}  // namespace

NormEstimate gahler_norm(const GridFunction& x1, const GridFunction& x2, double p,
                         const OptimizerOptions& opts,
                         std::span<const DualPair> warm) {
  require_same_grid(x1, x2);
  const Exponent e = conjugate_exponent(p);
  const RulePtr& rule = x1.rule();
  auto w = rule->weights();
  const std::size_t n = rule->size();

  // Work on a canonical argument order; the value is invariant under the swap
  // (only the determinant's sign changes), so swapped calls agree exactly.
  const bool swapped = std::lexicographical_compare(
      x2.samples().begin(), x2.samples().end(), x1.samples().begin(), x1.samples().end());
  auto a = swapped ? x2.samples() : x1.samples();
  auto b = swapped ? x1.samples() : x2.samples();

  // Starts for the fixed slot: the best angles, the two Hoelder extremals,
  // then seeded random points on the dual unit sphere.
  std::vector<std::vector<double>> starts;
  if (opts.angles > 0)
    for (auto& sc : scan_angles(w, a, b, p, opts.angles, 4))
      if (sc.value > 0.0) starts.push_back(std::move(sc.y2));
  for (auto x : {a, b}) {
    std::vector<double> s(n);
    if (detail::holder_extremal(w, x, p, s) > 0.0) starts.push_back(std::move(s));
  }
  SplitMix64 g(mix_seed(opts.seed, 0x6761686cULL));
  const std::size_t target = starts.size() + std::max(opts.starts - 2, 0);
  while (starts.size() < target) starts.push_back(random_dual_unit(g, w, e.q));

  NormEstimate est;
  Ascent best;
  best.value = -kInfinity;
  auto consider = [&](Ascent&& r) {
    ++est.starts;
    if (r.value > best.value) best = std::move(r);
  };
  for (const auto& [y1, y2] : warm) {
    require_same_grid(x1, y1);
    require_same_grid(x1, y2);
    consider(ascend(w, a, b, swapped ? y1.samples() : y2.samples(), p, opts));
  }
  for (const auto& s : starts) consider(ascend(w, a, b, s, p, opts));

  est.value = std::max(best.value, 0.0);
  est.iterations = best.iterations;
  est.converged = best.converged;
  GridFunction y1(rule, std::move(best.y1));
  GridFunction y2(rule, std::move(best.y2));
  // det_{x2,x1}(y1, y2) = det_{x1,x2}(y2, y1).
  if (swapped) std::swap(y1, y2);
  est.maximizers = {std::move(y1), std::move(y2)};
  est.is_lower_bound = true;
  return est;
}

}  // namespace twonorm
