#pragma once

#include <optional>
#include <string>

#include "oul1/time_grid.hpp"
#include "oul1/types.hpp"

namespace oul1 {

enum class KernelType { Fbm, SubFbm, BiFbm, Bm, Tabulated };

/// Covariance kernel of a centered Gaussian driver. The closed-form families
/// are parameterized by Hurst-type exponents; Tabulated wraps a user-supplied
/// covariance matrix on a declared grid.
class Kernel {
 public:
  static Kernel fbm(double hurst);
  static Kernel sub_fbm(double hurst);
  static Kernel bi_fbm(double hurst, double k);
  static Kernel bm();
  static Kernel tabulated(Vector times, Matrix cov);

  KernelType type() const { return type_; }
  double hurst() const { return hurst_; }
  double bifractional_k() const { return bif_k_; }
  const Vector& tabulated_times() const { return tab_times_; }
  const Matrix& tabulated_cov() const { return tab_cov_; }

  /// Hölder roughness exponent of the increment metric, when the family has one
  /// (fbm/subfbm: H, bifbm: H*K, bm: 1/2). Tabulated kernels carry none.
  std::optional<double> roughness() const;

  /// Round-trippable textual form (fbm:H=0.7, bifbm:H=0.7,K=0.8, ...).
  std::string spec_string() const;

 private:
  Kernel() = default;
  KernelType type_ = KernelType::Bm;
  double hurst_ = 0.5;
  double bif_k_ = 1.0;
  Vector tab_times_;
  Matrix tab_cov_;
  std::string tab_source_;  // path echoed by spec_string for tabulated kernels
  friend Kernel parse_kernel_spec(const std::string&);
};

/// Covariance R(s, t). Throws std::domain_error for negative times and for
/// tabulated kernels queried off their declared grid.
double kernel_eval(const Kernel& kernel, double s, double t);

/// Dense covariance matrix M[i][j] = R(t_i, t_j) on the grid.
Matrix covariance_matrix(const Kernel& kernel, const TimeGrid& grid);

/// Parse a CLI/config kernel descriptor: `fbm:H=0.7`, `subfbm:H=0.6`,
/// `bifbm:H=0.7,K=0.8`, `bm`, `tabulated:<csv path>`.
Kernel parse_kernel_spec(const std::string& spec);

}  // namespace oul1
