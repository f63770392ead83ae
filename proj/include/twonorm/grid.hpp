#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "twonorm/error.hpp"

namespace twonorm {

enum class RuleKind { Midpoint, Trapezoid, GaussComposite };

/// Quadrature rule on [0,1]. Nodes strictly increasing, weights positive and
/// summing to one. Immutable once built; shared between the grid functions
/// sampled on it.
class QuadratureRule {
 public:
  RuleKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Nodes per Gauss panel (1 for the Newton-Cotes style rules).
  std::size_t nodes_per_panel() const noexcept { return per_panel_; }
  /// Stable identifier of (kind, size), e.g. "midpoint:256" or "gauss:16x4".
  const std::string& digest() const noexcept { return digest_; }

  friend std::shared_ptr<const QuadratureRule> make_rule(RuleKind, std::size_t);
  friend std::shared_ptr<const QuadratureRule> make_gauss_rule(std::size_t,
                                                               std::size_t);

 private:
  QuadratureRule() = default;

  RuleKind kind_ = RuleKind::Midpoint;
  std::size_t per_panel_ = 1;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::string digest_;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

/// Builds a rule with `n` total nodes. Gauss rules use 4 nodes per panel and
/// need n divisible by 4. Throws InvalidSize for n < 2.
RulePtr make_rule(RuleKind kind, std::size_t n);
RulePtr make_gauss_rule(std::size_t panel_count, std::size_t nodes_per_panel);

/// Parses "midpoint", "trapezoid", "gauss" or "gauss:<nodes per panel>" and
/// builds a rule with n total nodes.
RulePtr make_rule(const std::string& kind, std::size_t n);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(std::size_t m, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// A member of the discretized L^p[0,1]: one sample per rule node.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(RulePtr rule, std::vector<double> samples);
  /// The zero function on `rule`.
  explicit GridFunction(RulePtr rule);

  const RulePtr& rule() const noexcept { return rule_; }
  const std::string& rule_digest() const { return rule_->digest(); }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double alpha);

  bool is_zero() const noexcept;

 private:
  RulePtr rule_;
  std::vector<double> samples_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double alpha, GridFunction a);

/// Bivariate samples, entry (i, j) = theta(u_i, v_j), row-major.
class Kernel {
 public:
  Kernel() = default;
  Kernel(RulePtr rule, std::vector<double> samples);
  explicit Kernel(RulePtr rule);

  const RulePtr& rule() const noexcept { return rule_; }
  const std::string& rule_digest() const { return rule_->digest(); }
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return samples_[i * n_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return samples_[i * n_ + j];
  }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(samples_).subspan(i * n_, n_);
  }
  Kernel transposed() const;
  double max_abs() const noexcept;

 private:
  RulePtr rule_;
  std::size_t n_ = 0;
  std::vector<double> samples_;
};

/// Throws IncompatibleGrid when the two digests differ.
void require_same_grid(const GridFunction& a, const GridFunction& b);
void require_same_grid(const Kernel& k, const GridFunction& f);

/// Sum of w_i f(u_i).
double integrate(const QuadratureRule& rule, const GridFunction& f);

/// Nodal indicator e_i (1 at node i, 0 elsewhere).
GridFunction indicator(const RulePtr& rule, std::size_t i);

/// Samples a callable at the nodes.
template <class F>
GridFunction sample(const RulePtr& rule, F&& f) {
  std::vector<double> s(rule->size());
  auto t = rule->nodes();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(t[i]);
  return GridFunction(rule, std::move(s));
}

template <class F>
Kernel sample2(const RulePtr& rule, F&& f) {
  const std::size_t n = rule->size();
  std::vector<double> s(n * n);
  auto t = rule->nodes();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i * n + j] = f(t[i], t[j]);
  return Kernel(rule, std::move(s));
}

/// FNV-1a over the raw sample bytes; used to fingerprint generated inputs.
std::uint64_t sample_digest(std::span<const double> samples) noexcept;

}  // namespace twonorm
