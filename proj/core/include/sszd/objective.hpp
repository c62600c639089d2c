#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sszd/rng.hpp"
#include "sszd/types.hpp"

namespace sszd {

/// One realization z of the noise variable. Its meaning is objective specific:
/// a row of A, a data point, or a validation mini-batch.
struct NoiseSample {
  std::vector<std::size_t> indices;

  friend bool operator==(const NoiseSample&, const NoiseSample&) = default;
};

/// Counts calls to StochasticObjective::eval made on behalf of one run.
class EvalCounter {
 public:
  void tick(std::uint64_t n = 1) noexcept { count_ += n; }
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_ = 0;
};

/// f(x) = E_Z[F(x, Z)].
///
/// Implementations must be immutable after construction: eval() and the other
/// const members may be called concurrently from several runs.
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;

  virtual NoiseSample sample_noise(Rng& rng) const = 0;
  /// F(x, z).
  virtual double eval(const Vector& x, const NoiseSample& z) const = 0;
  /// Noiseless f(x). Used for traces and tests, never by the optimizers.
  virtual double true_value(const Vector& x) const = 0;
  virtual Vector initial_point() const = 0;

  /// grad_x F(x, z), when available in closed form.
  virtual std::optional<Vector> analytic_grad(const Vector& x, const NoiseSample& z) const;
  /// grad f(x), when available in closed form.
  virtual std::optional<Vector> true_grad(const Vector& x) const;
  virtual std::optional<double> min_value() const;
  virtual std::optional<Vector> minimizer() const;
  /// Lipschitz constant of grad_x F(., z), uniform over z.
  virtual std::optional<double> smoothness() const;
};

/// Calls obj.eval and ticks the counter. Throws OracleFailure on a non-finite
/// value, tagging it with `direction` (OracleFailure::kBasePoint for F(x, z)).
double counted_eval(const StochasticObjective& obj, const Vector& x, const NoiseSample& z,
                    EvalCounter& counter, std::size_t direction);

}  // namespace sszd
