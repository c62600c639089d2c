#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sszd/types.hpp"

namespace sszd {

/// One oracle evaluation: the noiseless objective at the iterate known
/// after that evaluation. Values repeat while a step is in progress.
struct TraceRow {
  std::uint64_t eval = 0;
  std::uint64_t k = 0;
  double f_true = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Iterate snapshot after k completed steps.
struct IterateRecord {
  std::uint64_t k = 0;
  std::uint64_t eval = 0;
  double f_x = 0.0;
  /// f at the step-size weighted average iterate; NaN when not tracked.
  double f_xbar = std::numeric_limits<double>::quiet_NaN();
  /// |x_k - x*|; NaN when the minimizer is unknown.
  double dist = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<IterateRecord> iterates;
  Vector final_x;
  Vector final_x_bar;
  double initial_f = 0.0;
  std::optional<std::string> error;

  std::uint64_t evals() const noexcept { return rows.empty() ? 0 : rows.back().eval; }
  std::uint64_t steps() const noexcept { return iterates.empty() ? 0 : iterates.back().k; }
  double final_f() const noexcept { return rows.empty() ? initial_f : rows.back().f_true; }
};

}  // namespace sszd
