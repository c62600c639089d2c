#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sszd/objective.hpp"
#include "sszd/trace.hpp"

namespace sszd {

/// Stepping interface shared by S-SZD and the baselines.
class Optimizer {
 public:
  virtual ~Optimizer() = default;

  virtual std::string name() const = 0;
  /// Upper bound on the evaluations one step() may consume.
  virtual std::uint64_t max_step_cost() const = 0;
  virtual void step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) = 0;
  virtual const Vector& x() const = 0;
  virtual std::uint64_t iteration() const = 0;
  virtual std::optional<Vector> averaged() const { return std::nullopt; }
};

/// Steps `opt` while a full step still fits in `budget` evaluations.
///
/// One trace row is written per evaluation. The rows of a step carry f at the
/// pre-step iterate except the last, which carries f at the new iterate.
/// Oracle failures end the run; the partial trace is returned with `error` set.
RunTrace run_optimizer(Optimizer& opt, const StochasticObjective& obj, std::uint64_t budget,
                       Rng& rng);

}  // namespace sszd
