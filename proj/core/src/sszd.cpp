#include "sszd/sszd.hpp"

#include <string>

#include "sszd/errors.hpp"

namespace sszd {

OptimizerState OptimizerState::start(Vector x0) {
  OptimizerState s;
  s.weighted_sum = Vector::Zero(x0.size());
  s.x = std::move(x0);
  return s;
}

Vector OptimizerState::averaged() const {
  if (weight_total > 0.0) return weighted_sum / weight_total;
  return x;
}

OptimizerState sszd_step_with(const OptimizerState& state, const StochasticObjective& obj,
                              const DirectionMatrix& p, const NoiseSample& z,
                              const Schedule& schedule, EvalCounter& counter,
                              const OracleOptions& options) {
  const std::uint64_t k = state.k + 1;
  const double alpha = schedule.alpha(k);
  const SurrogateGradient g = finite_differences(obj, state.x, z, p, schedule.h(k), counter, options);

  OptimizerState next;
  next.k = k;
  next.weighted_sum = state.weighted_sum + alpha * state.x;
  next.weight_total = state.weight_total + alpha;
  next.x = state.x - alpha * g.vector;
  return next;
}

OptimizerState sszd_step(const OptimizerState& state, const StochasticObjective& obj,
                         DirectionKind kind, std::size_t l, const Schedule& schedule, Rng& rng,
                         EvalCounter& counter, const OracleOptions& options) {
  const DirectionMatrix p = make_directions(kind, obj.dim(), l, rng);
  const NoiseSample z = obj.sample_noise(rng);
  return sszd_step_with(state, obj, p, z, schedule, counter, options);
}

SszdOptimizer::SszdOptimizer(SszdParams params, Vector x0)
    : params_(std::move(params)), state_(OptimizerState::start(std::move(x0))) {
  const auto d = static_cast<std::size_t>(state_.x.size());
  if (params_.l == 0 || params_.l > d) {
    throw InvalidDimension("S-SZD needs 1 <= l <= d, got l=" + std::to_string(params_.l) +
                           ", d=" + std::to_string(d));
  }
}

std::string SszdOptimizer::name() const {
  return "sszd-" + std::string(to_string(params_.kind)) + "-l" + std::to_string(params_.l);
}

void SszdOptimizer::step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) {
  state_ = sszd_step(state_, obj, params_.kind, params_.l, params_.schedule, rng, counter,
                     params_.oracle);
}

RunTrace run(const StochasticObjective& obj, const SszdParams& params, std::uint64_t budget,
             std::uint64_t seed) {
  SszdOptimizer opt(params, obj.initial_point());
  Rng rng(seed);
  return run_optimizer(opt, obj, budget, rng);
}

}  // namespace sszd
