#include "twonorm/g_geometry.hpp"

#include <cmath>

#include "twonorm/lp_core.hpp"

namespace twonorm {

double g(const GridFunction& x, const GridFunction& y, double p) {
  require_same_grid(x, y);
  conjugate_exponent(p);
  auto w = x.rule()->weights();
  auto xs = x.samples();
  auto ys = y.samples();
  const double norm = detail::lp_norm(w, xs, p);
  if (norm == 0.0) return 0.0;
  // ||x||^{2-p} |x|^{p-1} sgn(x) = ||x|| (|x|/||x||)^{p-1} sgn(x)
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < xs.size(); ++i) acc += w[i] * (xs[i] * ys[i]);
    return acc;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) continue;
    const double dir = (p == 1.0) ? sgn(xs[i])
                                  : sgn(xs[i]) * std::pow(std::abs(xs[i]) / norm, p - 1.0);
    acc += w[i] * dir * ys[i];
  }
  return norm * acc;
}

double gram_det(const GridFunction& y1, const GridFunction& y2, double p) {
  return g(y1, y1, p) * g(y2, y2, p) - g(y1, y2, p) * g(y2, y1, p);
}

GridFunction g_projection(const GridFunction& x, const GridFunction& y1,
                          const GridFunction& y2, double p) {
  require_same_grid(x, y1);
  require_same_grid(x, y2);
  const double g11 = g(y1, y1, p), g12 = g(y1, y2, p);
  const double g21 = g(y2, y1, p), g22 = g(y2, y2, p);
  const double gamma = g11 * g22 - g12 * g21;
  const double n1 = lp_norm(y1, p), n2 = lp_norm(y2, p);
  if (!(std::abs(gamma) > 1e-12 * n1 * n1 * n2 * n2))
    throw Error(ErrorKind::SingularGram, "Gram determinant is numerically zero");
  const double gx1 = g(y1, x, p), gx2 = g(y2, x, p);
  // Cofactor expansion of the bordered determinant along its first row.
  const double m01 = gx1 * g22 - g12 * gx2;
  const double m02 = gx1 * g21 - g11 * gx2;
  GridFunction out(x.rule());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (m01 * y1[i] - m02 * y2[i]) / gamma;
  return out;
}

std::pair<GridFunction, GridFunction> g_orthogonalize(const GridFunction& x1,
                                                      const GridFunction& x2,
                                                      double p) {
  require_same_grid(x1, x2);
  if (x1.is_zero())
    throw Error(ErrorKind::DegenerateInput, "cannot orthogonalize against zero");
  const double c = g(x1, x2, p) / g(x1, x1, p);
  GridFunction second = x2;
  for (std::size_t i = 0; i < second.size(); ++i) second[i] -= c * x1[i];
  return {x1, std::move(second)};
}

double volume(const GridFunction& x1, const GridFunction& x2, double p) {
  require_same_grid(x1, x2);
  conjugate_exponent(p);
  if (x1.is_zero()) return 0.0;
  auto [o1, o2] = g_orthogonalize(x1, x2, p);
  return lp_norm(o1, p) * lp_norm(o2, p);
}

}  // namespace twonorm
