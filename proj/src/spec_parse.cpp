#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "twonorm/rng.hpp"
#include "twonorm/spec.hpp"

namespace twonorm {

namespace {

double parse_real(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  while (ptr != last && (*ptr == ' ' || *ptr == '\r')) ++ptr;
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(v))
    throw Error(ErrorKind::Parse, "bad number '" + s + "' in " + context);
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& context) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::Parse, "bad integer '" + s + "' in " + context);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::pair<std::string, std::string> head_tail(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::Parse, "spec '" + text + "' lacks a ':'");
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::pair<std::uint64_t, int> seed_modes(const std::string& args,
                                         const std::string& text) {
  auto parts = split(args, ',');
  if (parts.size() != 2)
    throw Error(ErrorKind::Parse, "expected <seed>,<K> in '" + text + "'");
  const auto seed = parse_uint(parts[0], text);
  const auto modes = parse_uint(parts[1], text);
  if (modes > 64) throw Error(ErrorKind::Parse, "too many modes in '" + text + "'");
  return {seed, static_cast<int>(modes)};
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_real(v[i]);
  }
  return s;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

FunctionSpec parse_function_spec(const std::string& text) {
  auto [head, args] = head_tail(text);
  if (head == "const") return fspec::Const{parse_real(args, text)};
  if (head == "poly") {
    fspec::Poly p;
    for (const auto& c : split(args, ',')) p.coeffs.push_back(parse_real(c, text));
    return p;
  }
  if (head == "fourier") {
    auto [seed, modes] = seed_modes(args, text);
    return fspec::Fourier{seed, modes};
  }
  if (head == "csv") {
    if (args.empty()) throw Error(ErrorKind::Parse, "csv spec without path");
    return fspec::Csv{args};
  }
  throw Error(ErrorKind::Parse, "unknown function spec '" + text + "'");
}

KernelSpec parse_kernel_spec(const std::string& text) {
  auto [head, args] = head_tail(text);
  if (head == "wedge") {
    const auto bar = args.find('|');
    if (bar == std::string::npos)
      throw Error(ErrorKind::Parse, "wedge spec needs '<a>|<b>': '" + text + "'");
    return KernelSpec{kspec::Wedge{parse_function_spec(args.substr(0, bar)),
                                   parse_function_spec(args.substr(bar + 1))}};
  }
  if (head == "randsmooth") {
    auto [seed, modes] = seed_modes(args, text);
    return KernelSpec{kspec::RandSmooth{seed, modes}};
  }
  if (head == "antisym")
    return KernelSpec{
        kspec::Antisym{std::make_shared<const KernelSpec>(parse_kernel_spec(args))}};
  if (head == "csv") {
    if (args.empty()) throw Error(ErrorKind::Parse, "csv spec without path");
    return KernelSpec{kspec::Csv{args}};
  }
  throw Error(ErrorKind::Parse, "unknown kernel spec '" + text + "'");
}

std::string to_string(const FunctionSpec& spec) {
  struct V {
    std::string operator()(const fspec::Const& c) const {
      return "const:" + format_real(c.c);
    }
    std::string operator()(const fspec::Poly& p) const {
      return "poly:" + join_reals(p.coeffs);
    }
    std::string operator()(const fspec::Fourier& f) const {
      return "fourier:" + std::to_string(f.seed) + "," + std::to_string(f.modes);
    }
    std::string operator()(const fspec::Csv& c) const { return "csv:" + c.path; }
  };
  return std::visit(V{}, spec);
}

std::string to_string(const KernelSpec& spec) {
  struct V {
    std::string operator()(const kspec::Wedge& w) const {
      return "wedge:" + to_string(w.a) + "|" + to_string(w.b);
    }
    std::string operator()(const kspec::RandSmooth& r) const {
      return "randsmooth:" + std::to_string(r.seed) + "," + std::to_string(r.modes);
    }
    std::string operator()(const kspec::Antisym& a) const {
      return "antisym:" + to_string(*a.inner);
    }
    std::string operator()(const kspec::Csv& c) const { return "csv:" + c.path; }
  };
  return std::visit(V{}, spec.v);
}

double trig_mode(int index, double t) {
  if (index == 0) return 1.0;
  const int k = (index + 1) / 2;
  const double arg = k * std::numbers::pi * t;
  return (index % 2 == 1) ? std::cos(arg) : std::sin(arg);
}

GridFunction sample_function(const RulePtr& rule, const FunctionSpec& spec) {
  struct V {
    const RulePtr& rule;
    GridFunction operator()(const fspec::Const& c) const {
      return sample(rule, [&](double) { return c.c; });
    }
    GridFunction operator()(const fspec::Poly& p) const {
      return sample(rule, [&](double t) {
        double acc = 0.0;
        for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
          acc = acc * t + *it;
        return acc;
      });
    }
    GridFunction operator()(const fspec::Fourier& f) const {
      SplitMix64 g(f.seed);
      std::vector<double> coef(2 * static_cast<std::size_t>(f.modes) + 1);
      coef[0] = g.uniform(-1.0, 1.0);
      for (int k = 1; k <= f.modes; ++k) {
        const double decay = 1.0 / (static_cast<double>(k) * k);
        coef[2 * k - 1] = g.uniform(-1.0, 1.0) * decay;
        coef[2 * k] = g.uniform(-1.0, 1.0) * decay;
      }
      return sample(rule, [&](double t) {
        double acc = 0.0;
        for (std::size_t m = 0; m < coef.size(); ++m)
          acc += coef[m] * trig_mode(static_cast<int>(m), t);
        return acc;
      });
    }
    GridFunction operator()(const fspec::Csv& c) const {
      return read_function_csv(rule, c.path);
    }
  };
  return std::visit(V{rule}, spec);
}

Kernel sample_kernel(const RulePtr& rule, const KernelSpec& spec) {
  struct V {
    const RulePtr& rule;
    Kernel operator()(const kspec::Wedge& w) const {
      const auto a = sample_function(rule, w.a);
      const auto b = sample_function(rule, w.b);
      const std::size_t n = rule->size();
      Kernel k(rule);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) k(i, j) = a[i] * b[j] - a[j] * b[i];
      return k;
    }
    Kernel operator()(const kspec::RandSmooth& r) const {
      SplitMix64 g(r.seed);
      const int m = 2 * r.modes + 1;
      std::vector<double> coef(static_cast<std::size_t>(m * m));
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          const double ka = 1.0 + (a + 1) / 2;
          const double kb = 1.0 + (b + 1) / 2;
          coef[static_cast<std::size_t>(a * m + b)] =
              g.uniform(-1.0, 1.0) / (ka * ka * kb * kb);
        }
      const std::size_t n = rule->size();
      auto t = rule->nodes();
      std::vector<double> modes(static_cast<std::size_t>(m) * n);
      for (int a = 0; a < m; ++a)
        for (std::size_t i = 0; i < n; ++i)
          modes[static_cast<std::size_t>(a) * n + i] = trig_mode(a, t[i]);
      Kernel k(rule);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              acc += coef[static_cast<std::size_t>(a * m + b)] *
                     modes[static_cast<std::size_t>(a) * n + i] *
                     modes[static_cast<std::size_t>(b) * n + j];
          k(i, j) = acc;
        }
      return k;
    }
    Kernel operator()(const kspec::Antisym& a) const {
      const Kernel inner = sample_kernel(rule, *a.inner);
      const std::size_t n = rule->size();
      Kernel k(rule);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          k(i, j) = 0.5 * (inner(i, j) - inner(j, i));
      return k;
    }
    Kernel operator()(const kspec::Csv& c) const {
      return read_kernel_csv(rule, c.path);
    }
  };
  return std::visit(V{rule}, spec.v);
}

GridFunction read_function_csv(const RulePtr& rule, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    values.push_back(parse_real(line, path));
  }
  if (values.size() != rule->size())
    throw Error(ErrorKind::IncompatibleGrid,
                "'" + path + "' has " + std::to_string(values.size()) +
                    " samples, rule has " + std::to_string(rule->size()));
  return GridFunction(rule, std::move(values));
}

Kernel read_kernel_csv(const RulePtr& rule, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  const std::size_t n = rule->size();
  std::vector<double> values;
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line, ',');
    if (cells.size() != n)
      throw Error(ErrorKind::IncompatibleGrid,
                  "'" + path + "' row " + std::to_string(rows) + " has " +
                      std::to_string(cells.size()) + " columns, expected " +
                      std::to_string(n));
    for (const auto& c : cells) values.push_back(parse_real(c, path));
    ++rows;
  }
  if (rows != n)
    throw Error(ErrorKind::IncompatibleGrid,
                "'" + path + "' has " + std::to_string(rows) + " rows, expected " +
                    std::to_string(n));
  return Kernel(rule, std::move(values));
}

void write_function_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  for (double s : f.samples()) out << format_real(s) << '\n';
}

void write_kernel_csv(const Kernel& k, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (j) out << ',';
      out << format_real(k(i, j));
    }
    out << '\n';
  }
}

}  // namespace twonorm
