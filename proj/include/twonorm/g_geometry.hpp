#pragma once

#include <utility>

#include "twonorm/grid.hpp"

namespace twonorm {

/// Semi-inner product g(x, y) = ||x||_p^{2-p} sum_i w_i |x_i|^{p-1} sgn(x_i) y_i.
/// Linear in y, homogeneous in x, not symmetric for p != 2. g(0, y) = 0.
double g(const GridFunction& x, const GridFunction& y, double p);

/// g(y1,y1) g(y2,y2) - g(y1,y2) g(y2,y1).
double gram_det(const GridFunction& y1, const GridFunction& y2, double p);

/// Projection of x on span{y1, y2} solving the g-normal equations
///   [g(y1,y1) g(y1,y2); g(y2,y1) g(y2,y2)] c = [g(y1,x); g(y2,x)].
/// Throws SingularGram when |Gamma| <= 1e-12 ||y1||^2 ||y2||^2.
GridFunction g_projection(const GridFunction& x, const GridFunction& y1,
                          const GridFunction& y2, double p);

/// Left g-orthogonal pair (x1, x2 - g(x1,x2)/g(x1,x1) x1). Throws
/// DegenerateInput for x1 = 0.
std::pair<GridFunction, GridFunction> g_orthogonalize(const GridFunction& x1,
                                                      const GridFunction& x2,
                                                      double p);

/// Volume of the 2-rectangle: ||x1°||_p ||x2°||_p, zero when x1 = 0.
double volume(const GridFunction& x1, const GridFunction& x2, double p);

}  // namespace twonorm
