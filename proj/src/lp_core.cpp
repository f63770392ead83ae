#include "twonorm/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twonorm {

Exponent conjugate_exponent(double p) {
  if (!std::isfinite(p) || p < 1.0)
    throw Error(ErrorKind::Domain,
                "exponent must satisfy 1 <= p < inf, got " + std::to_string(p));
  if (p == 1.0) return {1.0, kInfinity};
  return {p, p / (p - 1.0)};
}

namespace detail {

double lp_norm(std::span<const double> w, std::span<const double> x, double p) {
  if (p == kInfinity) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the largest entry so |x|^p neither underflows nor overflows.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * std::abs(x[i]);
    return acc;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i] / scale;
      acc += w[i] * r * r;
    }
    return scale * std::sqrt(acc);
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += w[i] * std::pow(std::abs(x[i]) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

double pairing(std::span<const double> w, std::span<const double> x,
               std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * (x[i] * y[i]);
  return acc;
}

double holder_extremal(std::span<const double> w, std::span<const double> z,
                       double p, std::span<double> out) {
  const double norm = lp_norm(w, z, p);
  if (norm == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return 0.0;
  }
  if (p == 1.0) {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = sgn(z[i]);
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / norm;
  } else {
    // sgn(z)|z|^{p-1} / ||z||^{p-1}, evaluated as sgn(z)(|z|/||z||)^{p-1}.
    for (std::size_t i = 0; i < z.size(); ++i)
      out[i] = sgn(z[i]) * std::pow(std::abs(z[i]) / norm, p - 1.0);
  }
  return norm;
}

}  // namespace detail

double lp_norm(const GridFunction& x, double p) {
  if (p != kInfinity) conjugate_exponent(p);
  return detail::lp_norm(x.rule()->weights(), x.samples(), p);
}

double pairing(const GridFunction& x, const GridFunction& y) {
  require_same_grid(x, y);
  return detail::pairing(x.rule()->weights(), x.samples(), y.samples());
}

HolderExtremal holder_extremal(const GridFunction& z, double p) {
  conjugate_exponent(p);
  HolderExtremal h{GridFunction(z.rule()), 0.0, false};
  h.value = detail::holder_extremal(z.rule()->weights(), z.samples(), p,
                                    h.y.samples());
  h.degenerate = (h.value == 0.0);
  return h;
}

}  // namespace twonorm
