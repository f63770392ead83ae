#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "twonorm/lp_core.hpp"
#include "twonorm/rng.hpp"
#include "twonorm/two_functional.hpp"

namespace twonorm {

std::vector<GridFunction> search_basis(const RulePtr& rule, int modes) {
  auto w = rule->weights();
  std::vector<GridFunction> raw;
  raw.push_back(sample(rule, [](double) { return 1.0; }));
  raw.push_back(sample(rule, [](double t) { return t; }));
  for (int k = 1; static_cast<int>(raw.size()) < modes; ++k) {
    const double f = k * std::numbers::pi;
    raw.push_back(sample(rule, [f](double t) { return std::cos(f * t); }));
    if (static_cast<int>(raw.size()) < modes)
      raw.push_back(sample(rule, [f](double t) { return std::sin(f * t); }));
  }
  raw.resize(static_cast<std::size_t>(std::max(modes, 0)), GridFunction(rule));

  // Modified Gram-Schmidt in the weighted L^2, two passes; directions that
  // the grid cannot resolve are dropped.
  std::vector<GridFunction> basis;
  for (auto v : raw) {
    const double before = detail::lp_norm(w, v.samples(), 2.0);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const double c = detail::pairing(w, b.samples(), v.samples());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
      }
    const double norm = detail::lp_norm(w, v.samples(), 2.0);
    if (before == 0.0 || norm <= 1e-8 * before) continue;
    v *= 1.0 / norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

enum class Denominator { Gahler, Gunawan };

// Symmetric eigen-decomposition by cyclic Jacobi; small dense matrices only.
void jacobi_eigen(std::vector<double> a, int m, std::vector<double>& values,
                  std::vector<double>& vectors) {
  vectors.assign(static_cast<std::size_t>(m * m), 0.0);
  for (int i = 0; i < m; ++i) vectors[static_cast<std::size_t>(i * m + i)] = 1.0;
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * m + j)]; };
  auto V = [&](int i, int j) -> double& {
    return vectors[static_cast<std::size_t>(i * m + j)];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-30) break;
    for (int pi = 0; pi < m; ++pi)
      for (int q = pi + 1; q < m; ++q) {
        if (std::abs(A(pi, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(pi, pi)) / (2.0 * A(pi, q));
        const double t = sgn(theta == 0.0 ? 1.0 : theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = A(k, pi), akq = A(k, q);
          A(k, pi) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = A(pi, k), aqk = A(q, k);
          A(pi, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < m; ++k) {
          const double vkp = V(k, pi), vkq = V(k, q);
          V(k, pi) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  values.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) values[static_cast<std::size_t>(i)] = A(i, i);
}

class RatioProblem {
 public:
  RatioProblem(const Kernel& theta, double p, Denominator kind,
               std::vector<GridFunction> basis)
      : theta_(theta), p_(p), kind_(kind), rule_(theta.rule()),
        w_(rule_->weights()), n_(rule_->size()),
        k_(static_cast<int>(basis.size())), basis_(std::move(basis)),
        x_(rule_), y_(rule_), tx_(n_), ty_(n_), gx_(n_), gy_(n_) {}

  int dim() const { return 2 * k_; }

  void synthesize(std::span<const double> c, GridFunction& x, GridFunction& y) const {
    std::fill(x.samples().begin(), x.samples().end(), 0.0);
    std::fill(y.samples().begin(), y.samples().end(), 0.0);
    for (int k = 0; k < k_; ++k) {
      const auto& b = basis_[static_cast<std::size_t>(k)];
      const double ca = c[static_cast<std::size_t>(k)];
      const double cb = c[static_cast<std::size_t>(k + k_)];
      for (std::size_t i = 0; i < n_; ++i) {
        x[i] += ca * b[i];
        y[i] += cb * b[i];
      }
    }
  }

  std::vector<double> analyze(const GridFunction& x, const GridFunction& y) const {
    std::vector<double> c(static_cast<std::size_t>(dim()));
    for (int k = 0; k < k_; ++k) {
      const auto& b = basis_[static_cast<std::size_t>(k)].samples();
      c[static_cast<std::size_t>(k)] = detail::pairing(w_, b, x.samples());
      c[static_cast<std::size_t>(k + k_)] = detail::pairing(w_, b, y.samples());
    }
    return c;
  }

  /// f(B_k, B_l) for the deterministic starts.
  std::vector<double> coefficient_matrix() const {
    std::vector<double> m(static_cast<std::size_t>(k_ * k_));
    for (int k = 0; k < k_; ++k)
      for (int l = 0; l < k_; ++l)
        m[static_cast<std::size_t>(k * k_ + l)] =
            eval_f(theta_, basis_[static_cast<std::size_t>(k)],
                   basis_[static_cast<std::size_t>(l)]);
    return m;
  }

  void reset_warm() { warm_.clear(); }
  const std::vector<DualPair>& warm() const { return warm_; }
  void commit_warm() {
    if (pending_) warm_ = {*pending_};
  }

  /// log|f| - log N at coefficients c, with gradient; -inf when the pair is
  /// numerically dependent or f vanishes.
  double log_ratio(std::span<const double> c, std::span<double> grad) {
    synthesize(c, x_, y_);
    apply_rows_(x_.samples(), tx_);
    apply_cols_(y_.samples(), ty_);
    double f = 0.0;
    for (std::size_t j = 0; j < n_; ++j) f += w_[j] * y_[j] * tx_[j];
    const double nx = detail::lp_norm(w_, x_.samples(), p_);
    const double ny = detail::lp_norm(w_, y_.samples(), p_);
    if (f == 0.0 || nx == 0.0 || ny == 0.0) return -kInfinity;
    const double denom = kind_ == Denominator::Gunawan ? gunawan_with_gradient()
                                                       : gahler_with_gradient();
    if (!(denom > 1e-10 * nx * ny)) return -kInfinity;
    if (!grad.empty()) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        const double dx = w_[i] * ty_[i] / f - gx_[i] / denom;
        const double dy = w_[i] * tx_[i] / f - gy_[i] / denom;
        for (int k = 0; k < k_; ++k) {
          const double b = basis_[static_cast<std::size_t>(k)][i];
          grad[static_cast<std::size_t>(k)] += dx * b;
          grad[static_cast<std::size_t>(k + k_)] += dy * b;
        }
      }
    }
    return std::log(std::abs(f)) - std::log(denom);
  }

 private:
  void apply_rows_(std::span<const double> x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double c = w_[i] * x[i];
      auto row = theta_.row(i);
      for (std::size_t j = 0; j < n_; ++j) out[j] += c * row[j];
    }
  }
  void apply_cols_(std::span<const double> y, std::span<double> out) const {
    for (std::size_t i = 0; i < n_; ++i) {
      auto row = theta_.row(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) acc += w_[j] * row[j] * y[j];
      out[i] = acc;
    }
  }

  // H^p = sum_{i<j} w_i w_j |D_ij|^p with D_ij = x_i y_j - x_j y_i.
  double gunawan_with_gradient() {
    std::fill(gx_.begin(), gx_.end(), 0.0);
    std::fill(gy_.begin(), gy_.end(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = x_[i] * y_[j] - x_[j] * y_[i];
        const double ad = std::abs(d);
        if (ad == 0.0) continue;
        const double pw1 = (p_ == 2.0) ? ad : (p_ == 1.0 ? 1.0 : std::pow(ad, p_ - 1.0));
        const double ww = w_[i] * w_[j];
        acc += ww * pw1 * ad;
        const double s = ww * pw1 * sgn(d);
        gx_[i] += s * y_[j];
        gx_[j] -= s * y_[i];
        gy_[j] += s * x_[i];
        gy_[i] -= s * x_[j];
      }
    if (acc == 0.0) return 0.0;
    const double h = std::pow(acc, 1.0 / p_);
    // dH = H^{1-p} d(H^p)/p, and d(H^p)/p is what was accumulated.
    const double scale = h / acc;
    for (std::size_t i = 0; i < n_; ++i) {
      gx_[i] *= scale;
      gy_[i] *= scale;
    }
    return h;
  }

  // Envelope gradient through the inner maximizer (y1, y2).
  double gahler_with_gradient() {
    OptimizerOptions inner;
    inner.tol = 1e-13;
    inner.max_iter = 100;
    inner.starts = 2;
    inner.angles = 0;
    const auto est = gahler_norm(x_, y_, p_, inner, warm_);
    const auto& y1 = est.maximizers[0];
    const auto& y2 = est.maximizers[1];
    const double xy1 = detail::pairing(w_, x_.samples(), y1.samples());
    const double xy2 = detail::pairing(w_, x_.samples(), y2.samples());
    const double yy1 = detail::pairing(w_, y_.samples(), y1.samples());
    const double yy2 = detail::pairing(w_, y_.samples(), y2.samples());
    for (std::size_t i = 0; i < n_; ++i) {
      gx_[i] = w_[i] * (y1[i] * yy2 - y2[i] * yy1);
      gy_[i] = w_[i] * (xy1 * y2[i] - y1[i] * xy2);
    }
    pending_ = DualPair{y1, y2};
    return est.value;
  }

  const Kernel& theta_;
  double p_;
  Denominator kind_;
  RulePtr rule_;
  std::span<const double> w_;
  std::size_t n_;
  int k_;
  std::vector<GridFunction> basis_;
  GridFunction x_, y_;
  std::vector<double> tx_, ty_, gx_, gy_;
  std::vector<DualPair> warm_;
  std::optional<DualPair> pending_;
};

struct LocalResult {
  std::vector<double> c;
  double log_value = -kInfinity;
  int iterations = 0;
  bool converged = false;
};

// BFGS ascent on the log-ratio with Armijo backtracking. The ratio is
// invariant under rescaling either argument, so the gradient is orthogonal to
// the current point and no explicit renormalization is needed.
LocalResult maximize(RatioProblem& prob, std::vector<double> c, const RatioOptions& opts) {
  const int m = prob.dim();
  const auto M = static_cast<std::size_t>(m);
  LocalResult r;
  prob.reset_warm();
  std::vector<double> grad(M), grad_new(M), trial(M), dir(M), s(M), yv(M);
  double value = prob.log_ratio(c, grad);
  prob.commit_warm();
  if (!std::isfinite(value)) {
    r.c = std::move(c);
    return r;
  }
  std::vector<double> H(M * M, 0.0);
  auto reset = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < M; ++i) H[i * M + i] = 1.0;
  };
  reset();
  auto norm2 = [](const std::vector<double>& v) {
    double a = 0.0;
    for (double x : v) a += x * x;
    return std::sqrt(a);
  };
  int quiet = 0;
  bool first = true;
  for (int it = 1; it <= opts.max_iter; ++it) {
    r.iterations = it;
    // Ascent direction H * grad.
    double slope = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < M; ++j) acc += H[i * M + j] * grad[j];
      dir[i] = acc;
      slope += acc * grad[i];
    }
    if (!(slope > 0.0)) {
      reset();
      dir = grad;
      slope = 0.0;
      for (double g : grad) slope += g * g;
    }
    if (slope <= 1e-28) {
      r.converged = true;
      break;
    }
    double step = 1.0;
    if (first) step = std::min(1.0, 0.1 * norm2(c) / norm2(dir));
    double next = -kInfinity;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t i = 0; i < M; ++i) trial[i] = c[i] + step * dir[i];
      next = prob.log_ratio(trial, grad_new);
      if (std::isfinite(next) && next >= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      r.converged = true;
      break;
    }
    prob.commit_warm();
    first = false;
    double sy = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      s[i] = trial[i] - c[i];
      // Maximizing, so curvature pairs use the negated gradient.
      yv[i] = grad[i] - grad_new[i];
      sy += s[i] * yv[i];
    }
    if (sy > 1e-16 * norm2(s) * norm2(yv)) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      std::vector<double> hy(M, 0.0);
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) hy[i] += H[i * M + j] * yv[j];
      double yhy = 0.0;
      for (std::size_t i = 0; i < M; ++i) yhy += yv[i] * hy[i];
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
          H[i * M + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) +
                          (rho * rho * yhy + rho) * s[i] * s[j];
    }
    const double gain = next - value;
    c = trial;
    grad = grad_new;
    value = next;
    quiet = (gain <= opts.tol) ? quiet + 1 : 0;
    if (quiet >= 3) {
      r.converged = true;
      break;
    }
  }
  r.c = std::move(c);
  r.log_value = value;
  return r;
}

NormEstimate fnorm_22(const Kernel& theta, double p, Denominator kind,
                      const RatioOptions& opts,
                      std::span<const std::pair<GridFunction, GridFunction>> warm) {
  conjugate_exponent(p);
  const RulePtr& rule = theta.rule();
  const double scale = std::max(1.0, theta.max_abs());
  if (!is_antisymmetric(theta, 1e-10 * scale))
    throw Error(ErrorKind::Domain,
                "kernel is not antisymmetric: bilinear functionals bounded with "
                "respect to a 2-norm must be antisymmetric");
  NormEstimate est;
  est.is_lower_bound = true;
  if (theta.max_abs() == 0.0) {
    est.value = 0.0;
    est.maximizers = {sample(rule, [](double) { return 1.0; }),
                      sample(rule, [](double t) { return t; })};
    return est;
  }

  RatioProblem prob(theta, p, kind, search_basis(rule, opts.modes));
  const int dim = prob.dim();
  const int k = dim / 2;

  std::vector<std::vector<double>> starts;
  for (const auto& [x, y] : warm) {
    require_same_grid(theta, x);
    require_same_grid(theta, y);
    starts.push_back(prob.analyze(x, y));
  }
  // Invariant planes of the coefficient matrix: for antisymmetric M the
  // eigenvectors v of M^T M pair with M v / sigma; these are the exact optima
  // at p = 2.
  {
    const auto M = prob.coefficient_matrix();
    std::vector<double> mtm(static_cast<std::size_t>(k * k), 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        double acc = 0.0;
        for (int l = 0; l < k; ++l)
          acc += M[static_cast<std::size_t>(l * k + i)] * M[static_cast<std::size_t>(l * k + j)];
        mtm[static_cast<std::size_t>(i * k + j)] = acc;
      }
    std::vector<double> values, vectors;
    jacobi_eigen(mtm, k, values, vectors);
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    });
    const int planes = std::min(4, k);
    for (int r = 0; r < planes; ++r) {
      const int col = order[static_cast<std::size_t>(r)];
      if (values[static_cast<std::size_t>(col)] <= 1e-24 * values[static_cast<std::size_t>(order[0])])
        break;
      std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
      for (int i = 0; i < k; ++i) {
        const double v = vectors[static_cast<std::size_t>(i * k + col)];
        c[static_cast<std::size_t>(k + i)] = v;  // y = v
        for (int l = 0; l < k; ++l)              // x = M v
          c[static_cast<std::size_t>(l)] += M[static_cast<std::size_t>(l * k + i)] * v;
      }
      starts.push_back(std::move(c));
    }
  }
  SplitMix64 g(mix_seed(opts.seed, kind == Denominator::Gahler ? 0x4722ULL : 0x4822ULL));
  while (static_cast<int>(starts.size()) < opts.starts + static_cast<int>(warm.size())) {
    std::vector<double> c(static_cast<std::size_t>(dim));
    for (double& v : c) v = g.uniform(-1.0, 1.0);
    starts.push_back(std::move(c));
  }

  est.value = -1.0;
  GridFunction x(rule), y(rule);
  for (auto& start : starts) {
    ++est.starts;
    LocalResult local = maximize(prob, std::move(start), opts);
    if (!std::isfinite(local.log_value)) continue;
    prob.synthesize(local.c, x, y);
    // Certify: re-evaluate the ratio at the end point from scratch.
    const double f = std::abs(eval_f(theta, x, y));
    double denom;
    if (kind == Denominator::Gunawan) {
      denom = gunawan_norm(x, y, p);
    } else {
      denom = gahler_norm(x, y, p, opts.gahler, prob.warm()).value;
    }
    if (!(denom > 0.0)) continue;
    const double value = f / denom;
    if (value > est.value) {
      est.value = value;
      est.converged = local.converged;
      est.iterations = local.iterations;
      est.maximizers = {x, y};
    }
  }
  if (est.value < 0.0) {
    est.value = 0.0;
    est.converged = false;
    est.maximizers = {x, y};
  }
  return est;
}

}  // namespace

NormEstimate fnorm_22_G(const Kernel& theta, double p, const RatioOptions& opts,
                        std::span<const std::pair<GridFunction, GridFunction>> warm) {
  return fnorm_22(theta, p, Denominator::Gahler, opts, warm);
}

NormEstimate fnorm_22_H(const Kernel& theta, double p, const RatioOptions& opts,
                        std::span<const std::pair<GridFunction, GridFunction>> warm) {
  return fnorm_22(theta, p, Denominator::Gunawan, opts, warm);
}

}  // namespace twonorm
