#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sszd {

/// Power-law step size alpha_k = alpha0 * k^-c and discretization
/// h_k = h0 * k^-r, evaluated for k >= 1.
struct Schedule {
  double alpha0 = 1e-2;
  double c = 0.5 + 1e-10;
  double h0 = 1e-8;
  double r = 0.5;
  std::optional<double> alpha_cap;

  double alpha(std::uint64_t k) const;
  double h(std::uint64_t k) const;

  /// Convex-rate choice: requires 1/2 < c < 1 and r > 1/2.
  static Schedule convex(double alpha0, double c, double h0, double r);
  /// PL-rate choice: requires 1/2 < c <= 1 and r = c/2.
  static Schedule polyak_lojasiewicz(double alpha0, double c, double h0);
  /// alpha_k = scale * (l/d) * k^-(1/2 + 1e-10), h_k = h0 / sqrt(k), the
  /// constants used for the synthetic benchmarks.
  static Schedule synthetic(std::size_t d, std::size_t l, double scale = 1e-2, double h0 = 1e-8);
};

/// Human-readable warnings for a schedule that falls outside the conditions
/// under which the convergence guarantees hold. `lambda` is the smoothness
/// constant of F(., z). Never throws; an empty list means no warning.
std::vector<std::string> validate_schedule(const Schedule& schedule, std::size_t d, std::size_t l,
                                           double lambda);

}  // namespace sszd
