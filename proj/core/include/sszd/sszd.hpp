#pragma once

#include <cstddef>
#include <cstdint>

#include "sszd/directions.hpp"
#include "sszd/optimizer.hpp"
#include "sszd/oracle.hpp"
#include "sszd/schedule.hpp"

namespace sszd {

/// Iterate plus the running sums that define the averaged iterate
/// xbar_k = sum_i alpha_{i+1} x_i / sum_i alpha_{i+1}.
struct OptimizerState {
  Vector x;
  std::uint64_t k = 0;
  Vector weighted_sum;
  double weight_total = 0.0;

  static OptimizerState start(Vector x0);
  /// Averaged iterate; x itself before the first step.
  Vector averaged() const;
};

struct SszdParams {
  DirectionKind kind = DirectionKind::Spherical;
  std::size_t l = 1;
  Schedule schedule;
  OracleOptions oracle;
};

/// x_{k+1} = x_k - alpha(k+1) P D_{(P,h(k+1))}F(x_k, z) for a given P and z.
OptimizerState sszd_step_with(const OptimizerState& state, const StochasticObjective& obj,
                              const DirectionMatrix& p, const NoiseSample& z,
                              const Schedule& schedule, EvalCounter& counter,
                              const OracleOptions& options = {});

/// One S-SZD iteration: draws P_k, then z_k, then applies sszd_step_with.
OptimizerState sszd_step(const OptimizerState& state, const StochasticObjective& obj,
                         DirectionKind kind, std::size_t l, const Schedule& schedule, Rng& rng,
                         EvalCounter& counter, const OracleOptions& options = {});

class SszdOptimizer final : public Optimizer {
 public:
  SszdOptimizer(SszdParams params, Vector x0);

  std::string name() const override;
  std::uint64_t max_step_cost() const override { return params_.l + 1; }
  void step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) override;
  const Vector& x() const override { return state_.x; }
  std::uint64_t iteration() const override { return state_.k; }
  std::optional<Vector> averaged() const override { return state_.averaged(); }

  const OptimizerState& state() const noexcept { return state_; }

 private:
  SszdParams params_;
  OptimizerState state_;
};

/// Runs S-SZD from obj.initial_point() with an Rng seeded by `seed`.
RunTrace run(const StochasticObjective& obj, const SszdParams& params, std::uint64_t budget,
             std::uint64_t seed);

}  // namespace sszd
