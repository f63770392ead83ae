#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

#include "twonorm/grid.hpp"
#include "twonorm/two_norm.hpp"

namespace twonorm {

/// (T x)_j = sum_i w_i x_i theta_ij.
GridFunction apply_kernel(const Kernel& theta, const GridFunction& x);
/// (T* y)_i = sum_j w_j theta_ij y_j.
GridFunction apply_kernel_adjoint(const Kernel& theta, const GridFunction& y);

/// f(x, y) = sum_i sum_j w_i w_j x_i y_j theta_ij.
double eval_f(const Kernel& theta, const GridFunction& x, const GridFunction& y);

/// (theta_ij - theta_ji) / 2.
Kernel antisym_part(const Kernel& theta);
/// max_ij |theta_ij + theta_ji| <= tol.
bool is_antisymmetric(const Kernel& theta, double tol);

struct OperatorOptions {
  double tol = 1e-13;
  int max_iter = 5000;
  int starts = 8;
  std::uint64_t seed = 0;
};

/// sup_{||x||_p = 1} ||T x||_q by nonlinear power iteration over x. For p = 1
/// the exact value max_ij |theta_ij|. Maximizer: x.
NormEstimate yq_norm(const Kernel& theta, double p, const OperatorOptions& opts = {});

/// sup |f(x,y)| / (||x||_p ||y||_p) by alternating maximization over (x, y),
/// starting from the y side and evaluating through f. p = 1 uses the exact
/// vertex value. Maximizers: (x, y).
NormEstimate fnorm_21(const Kernel& theta, double p, const OperatorOptions& opts = {});

struct RatioOptions {
  int modes = 12;        ///< search functions per argument
  int starts = 16;
  int max_iter = 300;    ///< quasi-Newton steps per start
  double tol = 1e-12;    ///< on the log of the ratio
  std::uint64_t seed = 0;
  OptimizerOptions gahler;  ///< final certification of the Gahler denominator
};

/// The search space of the 2-2 dual norms: 1, t, cos(k pi t), sin(k pi t) for
/// k = 1.. until `modes` functions, orthonormalized in the rule's L^2.
std::vector<GridFunction> search_basis(const RulePtr& rule, int modes);

/// sup |f(x,y)| / ||x,y||^G over x, y in search_basis, for antisymmetric
/// theta (Domain error otherwise). `warm` adds (x, y) start pairs, projected
/// onto the basis. Maximizers: (x, y).
NormEstimate fnorm_22_G(const Kernel& theta, double p, const RatioOptions& opts = {},
                        std::span<const std::pair<GridFunction, GridFunction>> warm = {});
/// Same with the Gunawan 2-norm in the denominator.
NormEstimate fnorm_22_H(const Kernel& theta, double p, const RatioOptions& opts = {},
                        std::span<const std::pair<GridFunction, GridFunction>> warm = {});

using Bilinear = std::function<double(const GridFunction&, const GridFunction&)>;

/// theta_ij = f(e_i, e_j) / (w_i w_j), the exact kernel of a bilinear form on
/// the grid space.
Kernel kernel_from_bilinear(const Bilinear& f, const RulePtr& rule);

}  // namespace twonorm
