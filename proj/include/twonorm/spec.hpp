#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "twonorm/grid.hpp"

namespace twonorm {

// Function generators. Grammar:
//   const:<c> | poly:<c0>,<c1>,... | fourier:<seed>,<K> | csv:<path>
namespace fspec {
struct Const {
  double c = 0.0;
};
struct Poly {
  std::vector<double> coeffs;  // c0 + c1 t + c2 t^2 + ...
};
/// a0 + sum_{k=1..K} (a_k cos(k pi t) + b_k sin(k pi t)) / k^2 with
/// a_k, b_k uniform on [-1, 1] drawn from `seed`.
struct Fourier {
  std::uint64_t seed = 0;
  int modes = 0;
};
struct Csv {
  std::string path;
};
}  // namespace fspec

using FunctionSpec =
    std::variant<fspec::Const, fspec::Poly, fspec::Fourier, fspec::Csv>;

// Kernel generators. Grammar:
//   wedge:<fspec>|<fspec> | randsmooth:<seed>,<K> | antisym:<kspec> | csv:<path>
struct KernelSpec;
namespace kspec {
/// theta(u,v) = a(u) b(v) - a(v) b(u).
struct Wedge {
  FunctionSpec a;
  FunctionSpec b;
};
/// Tensor trigonometric expansion up to K modes per axis, coefficients decaying
/// like 1/((1+k)(1+l))^2.
struct RandSmooth {
  std::uint64_t seed = 0;
  int modes = 0;
};
struct Antisym {
  std::shared_ptr<const KernelSpec> inner;
};
struct Csv {
  std::string path;
};
}  // namespace kspec

struct KernelSpec {
  std::variant<kspec::Wedge, kspec::RandSmooth, kspec::Antisym, kspec::Csv> v;
};

FunctionSpec parse_function_spec(const std::string& text);
KernelSpec parse_kernel_spec(const std::string& text);
std::string to_string(const FunctionSpec& spec);
std::string to_string(const KernelSpec& spec);

GridFunction sample_function(const RulePtr& rule, const FunctionSpec& spec);
Kernel sample_kernel(const RulePtr& rule, const KernelSpec& spec);

/// Trigonometric mode used by the generators: 1, cos(k pi t), sin(k pi t).
/// Index 0 is the constant, 2k-1 is cos(k pi t), 2k is sin(k pi t).
double trig_mode(int index, double t);

// CSV: functions one value per line; kernels n rows of n comma-separated
// values, row i = fixed u_i.
GridFunction read_function_csv(const RulePtr& rule, const std::string& path);
Kernel read_kernel_csv(const RulePtr& rule, const std::string& path);
void write_function_csv(const GridFunction& f, const std::string& path);
void write_kernel_csv(const Kernel& k, const std::string& path);

/// Shortest decimal text that parses back to the same double, always with a
/// decimal point or exponent ("1.0", "0.25", "1e-20").
std::string format_real(double x);

}  // namespace twonorm
