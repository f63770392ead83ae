#pragma once

#include <limits>
#include <span>

#include "twonorm/grid.hpp"

namespace twonorm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A Lebesgue exponent with its conjugate; p = 1 pairs with q = infinity.
struct Exponent {
  double p = 2.0;
  double q = 2.0;
};

/// Throws Domain for p < 1 or non-finite p.
Exponent conjugate_exponent(double p);

/// (sum_i w_i |x_i|^p)^{1/p}; p = kInfinity gives max_i |x_i|.
double lp_norm(const GridFunction& x, double p);

/// sum_i w_i x_i y_i.
double pairing(const GridFunction& x, const GridFunction& y);

struct HolderExtremal {
  GridFunction y;
  double value = 0.0;     ///< lp_norm(z, p)
  bool degenerate = false;  ///< z == 0
};

/// The dual unit vector attaining Hoelder equality: pairing(z, y) equals
/// lp_norm(z, p) with lp_norm(y, q) = 1. For p = 1, y = sgn(z).
HolderExtremal holder_extremal(const GridFunction& z, double p);

inline double sgn(double v) noexcept { return (v > 0.0) - (v < 0.0); }

// Unchecked kernels over raw samples; the optimizers call these in their inner
// loops after validating grids once.
namespace detail {
double lp_norm(std::span<const double> w, std::span<const double> x, double p);
double pairing(std::span<const double> w, std::span<const double> x,
               std::span<const double> y);
/// Writes the extremal into `out` and returns lp_norm(z, p). Leaves `out`
/// zero and returns 0 when z == 0.
double holder_extremal(std::span<const double> w, std::span<const double> z,
                       double p, std::span<double> out);
}  // namespace detail

}  // namespace twonorm
