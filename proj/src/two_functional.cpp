#include "twonorm/two_functional.hpp"

#include <cmath>

#include "twonorm/lp_core.hpp"
#include "twonorm/rng.hpp"

namespace twonorm {

namespace {

// (T x)_j = sum_i w_i x_i theta_ij, accumulated row by row.
void apply_rows(const Kernel& theta, std::span<const double> w,
                std::span<const double> x, std::span<double> out) {
  const std::size_t n = theta.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = w[i] * x[i];
    if (c == 0.0) continue;
    auto row = theta.row(i);
    for (std::size_t j = 0; j < n; ++j) out[j] += c * row[j];
  }
}

// (T* y)_i = sum_j w_j theta_ij y_j.
void apply_cols(const Kernel& theta, std::span<const double> w,
                std::span<const double> y, std::span<double> out) {
  const std::size_t n = theta.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = theta.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * row[j] * y[j];
    out[i] = acc;
  }
}

std::vector<double> random_unit(SplitMix64& g, std::span<const double> w, double p) {
  std::vector<double> s(w.size());
  for (double& v : s) v = g.uniform(-1.0, 1.0);
  const double norm = detail::lp_norm(w, s, p);
  for (double& v : s) v /= norm;
  return s;
}

std::vector<double> normalized(std::vector<double> v, std::span<const double> w,
                               double p) {
  const double norm = detail::lp_norm(w, v, p);
  if (norm > 0.0)
    for (double& x : v) x /= norm;
  return v;
}

// A few L^2 power iterations on T*T from the constant function.
std::vector<double> l2_dominant(const Kernel& theta, std::span<const double> w) {
  const std::size_t n = theta.size();
  std::vector<double> x(n, 1.0), t(n);
  for (int it = 0; it < 30; ++it) {
    apply_rows(theta, w, x, t);
    apply_cols(theta, w, t, x);
    const double norm = detail::lp_norm(w, x, 2.0);
    if (norm == 0.0) return std::vector<double>(n, 1.0);
    for (double& v : x) v /= norm;
  }
  return x;
}

std::size_t heaviest_row(const Kernel& theta) {
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    double acc = 0.0;
    for (double v : theta.row(i)) acc += v * v;
    if (acc > best_norm) {
      best_norm = acc;
      best = i;
    }
  }
  return best;
}

NormEstimate zero_estimate(const RulePtr& rule, int count) {
  NormEstimate est;
  est.value = 0.0;
  est.converged = true;
  for (int k = 0; k < count; ++k)
    est.maximizers.push_back(sample(rule, [](double) { return 1.0; }));
  return est;
}

// Exact value for p = 1: the unit ball of L^1 has vertices +-e_i / w_i.
std::pair<std::size_t, std::size_t> max_entry(const Kernel& theta) {
  std::size_t bi = 0, bj = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (std::size_t j = 0; j < theta.size(); ++j)
      if (std::abs(theta(i, j)) > best) {
        best = std::abs(theta(i, j));
        bi = i;
        bj = j;
      }
  return {bi, bj};
}

}  // namespace

GridFunction apply_kernel(const Kernel& theta, const GridFunction& x) {
  require_same_grid(theta, x);
  GridFunction out(x.rule());
  apply_rows(theta, x.rule()->weights(), x.samples(), out.samples());
  return out;
}

GridFunction apply_kernel_adjoint(const Kernel& theta, const GridFunction& y) {
  require_same_grid(theta, y);
  GridFunction out(y.rule());
  apply_cols(theta, y.rule()->weights(), y.samples(), out.samples());
  return out;
}

double eval_f(const Kernel& theta, const GridFunction& x, const GridFunction& y) {
  require_same_grid(theta, x);
  require_same_grid(theta, y);
  auto w = x.rule()->weights();
  const std::size_t n = theta.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) inner += w[i] * x[i] * theta(i, j);
    acc += w[j] * y[j] * inner;
  }
  return acc;
}

Kernel antisym_part(const Kernel& theta) {
  Kernel out(theta.rule());
  const std::size_t n = theta.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = 0.5 * (theta(i, j) - theta(j, i));
  return out;
}

bool is_antisymmetric(const Kernel& theta, double tol) {
  const std::size_t n = theta.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(theta(i, j) + theta(j, i)) > tol) return false;
  return true;
}

NormEstimate yq_norm(const Kernel& theta, double p, const OperatorOptions& opts) {
  const Exponent e = conjugate_exponent(p);
  const RulePtr& rule = theta.rule();
  auto w = rule->weights();
  const std::size_t n = theta.size();
  if (theta.max_abs() == 0.0) return zero_estimate(rule, 1);

  if (p == 1.0) {
    const auto [i, j] = max_entry(theta);
    GridFunction x = indicator(rule, i);
    x[i] = 1.0 / w[i];
    NormEstimate est;
    est.value = lp_norm(apply_kernel(theta, x), kInfinity) / lp_norm(x, 1.0);
    est.converged = true;
    est.starts = 1;
    est.is_lower_bound = false;
    est.maximizers = {std::move(x)};
    return est;
  }

  std::vector<std::vector<double>> starts;
  starts.push_back(normalized(std::vector<double>(n, 1.0), w, p));
  starts.push_back(normalized(l2_dominant(theta, w), w, p));
  {
    std::vector<double> e_i(n, 0.0);
    e_i[heaviest_row(theta)] = 1.0;
    starts.push_back(normalized(std::move(e_i), w, p));
  }
  SplitMix64 g(mix_seed(opts.seed, 0x7971ULL));
  while (static_cast<int>(starts.size()) < opts.starts)
    starts.push_back(random_unit(g, w, p));

  NormEstimate est;
  est.value = -1.0;
  std::vector<double> t(n), dual(n), s(n);
  for (auto& x : starts) {
    ++est.starts;
    double prev = -1.0, value = 0.0;
    bool converged = false;
    int it = 0;
    for (it = 1; it <= opts.max_iter; ++it) {
      apply_rows(theta, w, x, t);
      value = detail::lp_norm(w, t, e.q) / detail::lp_norm(w, x, p);
      if (value - prev <= opts.tol * value || value == 0.0) {
        converged = true;
        break;
      }
      prev = value;
      if (it == opts.max_iter) break;
      detail::holder_extremal(w, t, e.q, dual);
      apply_cols(theta, w, dual, s);
      detail::holder_extremal(w, s, e.q, x);
    }
    if (value > est.value) {
      est.value = value;
      est.converged = converged;
      est.iterations = std::min(it, opts.max_iter);
      est.maximizers = {GridFunction(rule, x)};
    }
  }
  est.is_lower_bound = true;
  return est;
}

NormEstimate fnorm_21(const Kernel& theta, double p, const OperatorOptions& opts) {
  const Exponent e = conjugate_exponent(p);
  const RulePtr& rule = theta.rule();
  auto w = rule->weights();
  const std::size_t n = theta.size();
  if (theta.max_abs() == 0.0) return zero_estimate(rule, 2);

  if (p == 1.0) {
    const auto [i, j] = max_entry(theta);
    GridFunction x = indicator(rule, i);
    GridFunction y = indicator(rule, j);
    x[i] = 1.0 / w[i];
    y[j] = sgn(theta(i, j)) / w[j];
    NormEstimate est;
    est.value = std::abs(eval_f(theta, x, y)) / (lp_norm(x, 1.0) * lp_norm(y, 1.0));
    est.converged = true;
    est.starts = 1;
    est.is_lower_bound = false;
    est.maximizers = {std::move(x), std::move(y)};
    return est;
  }

  // Starts for y: constant, the L^2-dominant left direction T x_dom, the
  // heaviest column, then random points.
  std::vector<std::vector<double>> starts;
  starts.push_back(normalized(std::vector<double>(n, 1.0), w, p));
  {
    std::vector<double> t(n);
    apply_rows(theta, w, l2_dominant(theta, w), t);
    starts.push_back(normalized(std::move(t), w, p));
  }
  {
    const Kernel tr = theta.transposed();
    std::vector<double> e_j(n, 0.0);
    e_j[heaviest_row(tr)] = 1.0;
    starts.push_back(normalized(std::move(e_j), w, p));
  }
  SplitMix64 g(mix_seed(opts.seed, 0x6632ULL));
  while (static_cast<int>(starts.size()) < opts.starts)
    starts.push_back(random_unit(g, w, p));

  NormEstimate est;
  est.value = -1.0;
  GridFunction x(rule), y(rule);
  std::vector<double> riesz(n);
  for (auto& start : starts) {
    ++est.starts;
    std::copy(start.begin(), start.end(), y.samples().begin());
    double prev = -1.0, value = 0.0;
    bool converged = false;
    int it = 0;
    for (it = 1; it <= opts.max_iter; ++it) {
      // x -> f(x, y) has Riesz vector T* y; maximize over the L^p ball.
      apply_cols(theta, w, y.samples(), riesz);
      detail::holder_extremal(w, riesz, e.q, x.samples());
      // y -> f(x, y) has Riesz vector T x.
      apply_rows(theta, w, x.samples(), riesz);
      detail::holder_extremal(w, riesz, e.q, y.samples());
      value = std::abs(eval_f(theta, x, y)) /
              (detail::lp_norm(w, x.samples(), p) * detail::lp_norm(w, y.samples(), p));
      if (!std::isfinite(value)) value = 0.0;
      if (value - prev <= opts.tol * value || value == 0.0) {
        converged = true;
        break;
      }
      prev = value;
    }
    if (value > est.value) {
      est.value = value;
      est.converged = converged;
      est.iterations = std::min(it, opts.max_iter);
      est.maximizers = {x, y};
    }
  }
  est.is_lower_bound = true;
  return est;
}

Kernel kernel_from_bilinear(const Bilinear& f, const RulePtr& rule) {
  if (!rule || rule->size() == 0)
    throw Error(ErrorKind::InvalidSize, "kernel_from_bilinear needs a non-empty rule");
  const std::size_t n = rule->size();
  auto w = rule->weights();
  std::vector<GridFunction> e;
  e.reserve(n);
  for (std::size_t i = 0; i < n; ++i) e.push_back(indicator(rule, i));
  Kernel theta(rule);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      theta(i, j) = f(e[i], e[j]) / (w[i] * w[j]);
  return theta;
}

}  // namespace twonorm
