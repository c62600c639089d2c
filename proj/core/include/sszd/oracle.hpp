#pragma once

#include <cstddef>

#include "sszd/directions.hpp"
#include "sszd/objective.hpp"

namespace sszd {

struct OracleOptions {
  /// Forward differences with h at or below this are rejected.
  double h_floor = 1e-12;
};

/// Finite-difference surrogate of the stochastic gradient restricted to span(P).
struct SurrogateGradient {
  Vector vector;     ///< P * fd_coeffs
  Vector fd_coeffs;  ///< (F(x + h p_i, z) - F(x, z)) / h
  double base_value = 0.0;  ///< F(x, z)
};

/// Costs exactly l + 1 evaluations: F(x, z) is computed once and shared.
SurrogateGradient finite_differences(const StochasticObjective& obj, const Vector& x,
                                     const NoiseSample& z, const DirectionMatrix& p, double h,
                                     EvalCounter& counter, const OracleOptions& options = {});

/// (1/m) sum_j [(F(x + h g_j, z) - F(x, z)) / h] g_j over the columns g_j of
/// `directions`. Costs m + 1 evaluations.
Vector averaged_forward_differences(const StochasticObjective& obj, const Vector& x,
                                    const NoiseSample& z, double h, const Matrix& directions,
                                    EvalCounter& counter, const OracleOptions& options = {});

/// Gaussian-smoothing estimator with m i.i.d. N(0, I) directions.
Vector smoothed_gradient_gaussian(const StochasticObjective& obj, const Vector& x,
                                  const NoiseSample& z, double h, std::size_t num_dirs, Rng& rng,
                                  EvalCounter& counter, const OracleOptions& options = {});

/// P P^T grad F(x, z) from the analytic gradient. Throws Unsupported when the
/// objective has none.
Vector exact_directional_projection(const StochasticObjective& obj, const Vector& x,
                                    const NoiseSample& z, const DirectionMatrix& p);

}  // namespace sszd
