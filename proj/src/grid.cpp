#include "twonorm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

namespace twonorm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::IncompatibleGrid: return "incompatible-grid";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::SingularGram: return "singular-gram";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::UnknownSuite: return "unknown-suite";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void gauss_legendre(std::size_t m, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  if (m == 1) {
    weights[0] = 2.0;
    return;
  }
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_m.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(m) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) nodes[m / 2] = 0.0;
}

RulePtr make_gauss_rule(std::size_t panel_count, std::size_t nodes_per_panel) {
  if (panel_count < 1 || nodes_per_panel < 1 ||
      panel_count * nodes_per_panel < 2)
    throw Error(ErrorKind::InvalidSize, "gauss rule needs at least 2 nodes");
  std::vector<double> x, w;
  gauss_legendre(nodes_per_panel, x, w);
  std::shared_ptr<QuadratureRule> rule(new QuadratureRule());
  rule->kind_ = RuleKind::GaussComposite;
  rule->per_panel_ = nodes_per_panel;
  const double h = 1.0 / static_cast<double>(panel_count);
  for (std::size_t p = 0; p < panel_count; ++p) {
    const double a = h * static_cast<double>(p);
    for (std::size_t k = 0; k < nodes_per_panel; ++k) {
      rule->nodes_.push_back(a + 0.5 * h * (x[k] + 1.0));
      rule->weights_.push_back(0.5 * h * w[k]);
    }
  }
  rule->digest_ = "gauss:" + std::to_string(panel_count) + "x" +
                  std::to_string(nodes_per_panel);
  return rule;
}

RulePtr make_rule(RuleKind kind, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "rule needs at least 2 nodes");
  if (kind == RuleKind::GaussComposite) {
    constexpr std::size_t per_panel = 4;
    if (n % per_panel != 0)
      throw Error(ErrorKind::InvalidSize,
                  "gauss rule size must be a multiple of 4");
    return make_gauss_rule(n / per_panel, per_panel);
  }
  std::shared_ptr<QuadratureRule> rule(new QuadratureRule());
  rule->kind_ = kind;
  rule->nodes_.resize(n);
  rule->weights_.resize(n);
  const double dn = static_cast<double>(n);
  if (kind == RuleKind::Midpoint) {
    for (std::size_t i = 0; i < n; ++i) {
      rule->nodes_[i] = (static_cast<double>(i) + 0.5) / dn;
      rule->weights_[i] = 1.0 / dn;
    }
    rule->digest_ = "midpoint:" + std::to_string(n);
  } else {
    const double h = 1.0 / (dn - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      rule->nodes_[i] = static_cast<double>(i) * h;
      rule->weights_[i] = h;
    }
    rule->nodes_.back() = 1.0;
    rule->weights_.front() = rule->weights_.back() = 0.5 * h;
    rule->digest_ = "trapezoid:" + std::to_string(n);
  }
  return rule;
}

RulePtr make_rule(const std::string& kind, std::size_t n) {
  if (kind == "midpoint") return make_rule(RuleKind::Midpoint, n);
  if (kind == "trapezoid") return make_rule(RuleKind::Trapezoid, n);
  if (kind == "gauss") return make_rule(RuleKind::GaussComposite, n);
  if (kind.rfind("gauss:", 0) == 0) {
    std::size_t per_panel = 0;
    try {
      per_panel = std::stoul(kind.substr(6));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad gauss rule '" + kind + "'");
    }
    if (per_panel == 0 || n % per_panel != 0)
      throw Error(ErrorKind::InvalidSize,
                  "gauss rule size must be a multiple of nodes per panel");
    return make_gauss_rule(n / per_panel, per_panel);
  }
  throw Error(ErrorKind::Parse, "unknown rule kind '" + kind + "'");
}

GridFunction::GridFunction(RulePtr rule, std::vector<double> samples)
    : rule_(std::move(rule)), samples_(std::move(samples)) {
  if (!rule_) throw Error(ErrorKind::InvalidSize, "grid function without rule");
  if (samples_.size() != rule_->size())
    throw Error(ErrorKind::IncompatibleGrid,
                "sample count " + std::to_string(samples_.size()) +
                    " does not match rule " + rule_->digest());
  for (double s : samples_)
    if (!std::isfinite(s))
      throw Error(ErrorKind::Domain, "non-finite grid function sample");
}

GridFunction::GridFunction(RulePtr rule)
    : rule_(std::move(rule)), samples_(rule_ ? rule_->size() : 0, 0.0) {}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double alpha) {
  for (double& s : samples_) s *= alpha;
  return *this;
}

bool GridFunction::is_zero() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double s) { return s == 0.0; });
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double alpha, GridFunction a) { return a *= alpha; }

Kernel::Kernel(RulePtr rule, std::vector<double> samples)
    : rule_(std::move(rule)), n_(rule_ ? rule_->size() : 0),
      samples_(std::move(samples)) {
  if (!rule_) throw Error(ErrorKind::InvalidSize, "kernel without rule");
  if (samples_.size() != n_ * n_)
    throw Error(ErrorKind::IncompatibleGrid,
                "kernel is not " + std::to_string(n_) + "x" + std::to_string(n_));
  for (double s : samples_)
    if (!std::isfinite(s)) throw Error(ErrorKind::Domain, "non-finite kernel entry");
}

Kernel::Kernel(RulePtr rule)
    : rule_(std::move(rule)), n_(rule_ ? rule_->size() : 0),
      samples_(n_ * n_, 0.0) {}

Kernel Kernel::transposed() const {
  Kernel t(rule_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Kernel::max_abs() const noexcept {
  double m = 0.0;
  for (double s : samples_) m = std::max(m, std::abs(s));
  return m;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!a.rule() || !b.rule() || a.rule_digest() != b.rule_digest())
    throw Error(ErrorKind::IncompatibleGrid,
                "grid functions live on different rules");
}

void require_same_grid(const Kernel& k, const GridFunction& f) {
  if (!k.rule() || !f.rule() || k.rule_digest() != f.rule_digest())
    throw Error(ErrorKind::IncompatibleGrid,
                "kernel and grid function live on different rules");
}

double integrate(const QuadratureRule& rule, const GridFunction& f) {
  if (!f.rule() || f.rule_digest() != rule.digest())
    throw Error(ErrorKind::IncompatibleGrid, "integrand sampled on another rule");
  auto w = rule.weights();
  auto s = f.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * s[i];
  return acc;
}

GridFunction indicator(const RulePtr& rule, std::size_t i) {
  GridFunction e(rule);
  e[i] = 1.0;
  return e;
}

std::uint64_t sample_digest(std::span<const double> samples) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double s : samples) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &s, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace twonorm
