#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sszd::harness {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::pair<std::uint64_t, std::uint64_t> window{0, 0};
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log(value - min_f) against log k over k in `window`
/// (inclusive). The default window is the second half, [k_max/2, k_max].
/// Gaps below 1e-14 and k = 0 are dropped; fewer than 5 remaining points
/// throws InsufficientData.
RateFit fit_rate(const std::vector<std::uint64_t>& k, const std::vector<double>& value, double min_f);
RateFit fit_rate(const std::vector<std::uint64_t>& k, const std::vector<double>& value, double min_f,
                 std::pair<std::uint64_t, std::uint64_t> window);

}  // namespace sszd::harness
