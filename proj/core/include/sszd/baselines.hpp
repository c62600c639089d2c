#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "sszd/optimizer.hpp"
#include "sszd/oracle.hpp"
#include "sszd/schedule.hpp"
#include "sszd/sszd.hpp"

namespace sszd {

enum class BaselineKind {
  Stp,
  ProbDsIndependent,
  ProbDsOrthogonal,
  ProbDsTwoDirections,
  ProbDsRdIndependent,
  ProbDsRdOrthogonal,
  FdGaussianSingle,
  FdGaussianMulti,
  FdSphericalSingle,
};

std::string_view to_string(BaselineKind kind) noexcept;
BaselineKind parse_baseline_kind(std::string_view name);
bool is_finite_difference(BaselineKind kind) noexcept;

/// How a poll set (or a sketch) is generated.
enum class PollKind { Independent, Orthogonal };

/// rho(alpha, g) = min{c1, c2 alpha^2 |g|^2}.
struct ForcingFunction {
  double c1 = 1e-5;
  double c2 = 1e-5;

  double operator()(double alpha, double dir_norm2) const noexcept;
};

struct DirectSearchParams {
  ForcingFunction forcing;
  double expansion = 2.0;
  double contraction = 0.5;
  double step_max = 5.0;
};

struct DirectSearchState {
  Vector x;
  double step = 1.0;
  std::uint64_t k = 0;
};

// ---------------------------------------------------------------------------
// Stochastic three points

/// Polls x and x +/- alpha s with alpha = alpha0 / (k + 1) and one shared z,
/// then moves to the candidate with the smallest F. Costs 3 evaluations.
DirectSearchState stp_step_with(const DirectSearchState& state, const StochasticObjective& obj,
                                const NoiseSample& z, const Vector& s, double alpha0,
                                EvalCounter& counter);
DirectSearchState stp_step(const DirectSearchState& state, const StochasticObjective& obj,
                           double alpha0, Rng& rng, EvalCounter& counter);

// ---------------------------------------------------------------------------
// Probabilistic direct search

/// Opportunistic poll over the columns of `poll` in order. The first column g
/// with F(x + step g, z) < F(x, z) - rho(step, g) is accepted and the step
/// expands (capped at step_max); otherwise x stays and the step contracts.
/// Costs 1 + (number of columns evaluated).
DirectSearchState poll_step(const DirectSearchState& state, const StochasticObjective& obj,
                            const Matrix& poll, const DirectSearchParams& params,
                            const NoiseSample& z, EvalCounter& counter);

/// `pool_size` unit directions: i.i.d. uniform on the sphere, or the columns
/// of a Haar orthogonal matrix followed by their negatives.
Matrix make_pool(std::size_t d, std::size_t pool_size, PollKind kind, Rng& rng);

DirectSearchState probds_step(const DirectSearchState& state, const StochasticObjective& obj,
                              std::size_t pool_size, PollKind kind,
                              const DirectSearchParams& params, Rng& rng, EvalCounter& counter);

/// d x l sketch with unit columns (independent or orthonormal).
Matrix make_sketch(std::size_t d, std::size_t l, PollKind kind, Rng& rng);

/// Polls the 2l directions [Q, -Q] of a fresh d x l sketch Q.
DirectSearchState probds_rd_step(const DirectSearchState& state, const StochasticObjective& obj,
                                 std::size_t l, PollKind kind, const DirectSearchParams& params,
                                 Rng& rng, EvalCounter& counter);

// ---------------------------------------------------------------------------
// Unstructured finite-difference descent

/// x_{k+1} = x_k - alpha(k+1) g_hat, with g_hat the forward-difference
/// estimator over m Gaussian directions (FdGaussian*) or one direction
/// uniform on the sphere of radius sqrt(d) (FdSphericalSingle).
/// Costs m + 1 evaluations.
OptimizerState fd_baseline_step(const OptimizerState& state, const StochasticObjective& obj,
                                BaselineKind kind, std::size_t m, const Schedule& schedule,
                                Rng& rng, EvalCounter& counter, const OracleOptions& options = {});

/// Directions per step that `kind` uses in dimension d (1 or d).
std::size_t default_fd_directions(BaselineKind kind, std::size_t d);

// ---------------------------------------------------------------------------
// Optimizer adapters

class StpOptimizer final : public Optimizer {
 public:
  StpOptimizer(double alpha0, Vector x0);
  std::string name() const override { return "stp"; }
  std::uint64_t max_step_cost() const override { return 3; }
  void step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) override;
  const Vector& x() const override { return state_.x; }
  std::uint64_t iteration() const override { return state_.k; }
  const DirectSearchState& state() const noexcept { return state_; }

 private:
  double alpha0_;
  DirectSearchState state_;
};

class ProbDsOptimizer final : public Optimizer {
 public:
  /// kind must be one of the ProbDs* baseline kinds. `width` is the pool size
  /// for full-space variants and the sketch width l for the RD variants.
  ProbDsOptimizer(BaselineKind kind, std::size_t width, DirectSearchParams params,
                  double initial_step, Vector x0);
  std::string name() const override;
  std::uint64_t max_step_cost() const override;
  void step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) override;
  const Vector& x() const override { return state_.x; }
  std::uint64_t iteration() const override { return state_.k; }
  const DirectSearchState& state() const noexcept { return state_; }

 private:
  BaselineKind kind_;
  std::size_t width_;
  DirectSearchParams params_;
  DirectSearchState state_;
};

class FdOptimizer final : public Optimizer {
 public:
  FdOptimizer(BaselineKind kind, std::size_t m, Schedule schedule, Vector x0,
              OracleOptions options = {});
  std::string name() const override;
  std::uint64_t max_step_cost() const override { return m_ + 1; }
  void step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) override;
  const Vector& x() const override { return state_.x; }
  std::uint64_t iteration() const override { return state_.k; }
  std::optional<Vector> averaged() const override { return state_.averaged(); }

 private:
  BaselineKind kind_;
  std::size_t m_;
  Schedule schedule_;
  OracleOptions options_;
  OptimizerState state_;
};

}  // namespace sszd
