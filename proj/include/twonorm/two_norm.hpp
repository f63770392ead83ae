#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "twonorm/grid.hpp"

namespace twonorm {

/// Settings shared by the multi-start ascent optimizers.
struct OptimizerOptions {
  double tol = 1e-10;   ///< stop when relative improvement per sweep drops below
  int max_iter = 200;   ///< sweeps per start
  int starts = 8;       ///< start points, deterministic ones included
  int angles = 128;     ///< angular scan resolution for p > 1; 0 disables the scan
  std::uint64_t seed = 0;
};

/// Value of a supremum-defined norm found by ascent. `value` is attained by
/// `maximizers` (re-evaluating them reproduces it) and is therefore a lower
/// bound of the discrete supremum.
struct NormEstimate {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;  ///< sweeps used by the winning start
  int starts = 0;      ///< ascents run
  std::vector<GridFunction> maximizers;
  bool is_lower_bound = true;
};

/// ( 1/2 sum_i sum_j w_i w_j |x1_i x2_j - x1_j x2_i|^p )^{1/p}, exact.
double gunawan_norm(const GridFunction& x1, const GridFunction& x2, double p);

/// det [[<x1,y1>, <x2,y1>], [<x1,y2>, <x2,y2>]].
double gahler_determinant(const GridFunction& x1, const GridFunction& x2,
                          const GridFunction& y1, const GridFunction& y2);

using DualPair = std::pair<GridFunction, GridFunction>;

/// Supremum of gahler_determinant over the dual unit ball (||y_k||_q <= 1),
/// by alternating closed-form Hoelder updates. Every start point is used for
/// both update orders, so swapping x1 and x2 yields the same value bit for
/// bit. `warm` adds extra (y1, y2) starts; the result is never below the
/// determinant at any of them. Maximizers are (y1, y2).
NormEstimate gahler_norm(const GridFunction& x1, const GridFunction& x2, double p,
                         const OptimizerOptions& opts = {},
                         std::span<const DualPair> warm = {});

}  // namespace twonorm
