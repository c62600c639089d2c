#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sszd/objective.hpp"

namespace sszd {

/// f(x) = (1/d) |A x|^2 sampled one row at a time: F(x, i) = (a_i^T x)^2 with
/// i uniform, so E_Z F(x, Z) = f(x).
class QuadraticObjective final : public StochasticObjective {
 public:
  QuadraticObjective(std::string name, Matrix a, bool unique_minimizer);

  std::string name() const override { return name_; }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  NoiseSample sample_noise(Rng& rng) const override;
  double eval(const Vector& x, const NoiseSample& z) const override;
  double true_value(const Vector& x) const override;
  Vector initial_point() const override;
  std::optional<Vector> analytic_grad(const Vector& x, const NoiseSample& z) const override;
  std::optional<Vector> true_grad(const Vector& x) const override;
  std::optional<double> min_value() const override { return 0.0; }
  std::optional<Vector> minimizer() const override;
  /// 2 max_i |a_i|^2: the Lipschitz constant of grad F(., i) for every row.
  std::optional<double> smoothness() const override { return sample_smoothness_; }

  /// 2 sigma_max(A)^2 / d: the Lipschitz constant of grad f.
  double mean_smoothness() const noexcept { return mean_smoothness_; }
  const Matrix& matrix() const noexcept { return a_; }

 private:
  std::string name_;
  Matrix a_;
  bool unique_minimizer_;
  double sample_smoothness_;
  double mean_smoothness_;
};

/// f(x) = (1/d) |A x|^2 + 3 sin^2(c^T x) with A c = c. The quadratic part is
/// row-sampled as in QuadraticObjective; the sine term is deterministic.
class PLNonConvexObjective final : public StochasticObjective {
 public:
  PLNonConvexObjective(Matrix a, Vector c);

  std::string name() const override { return "F3"; }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  NoiseSample sample_noise(Rng& rng) const override;
  double eval(const Vector& x, const NoiseSample& z) const override;
  double true_value(const Vector& x) const override;
  Vector initial_point() const override;
  std::optional<Vector> analytic_grad(const Vector& x, const NoiseSample& z) const override;
  std::optional<Vector> true_grad(const Vector& x) const override;
  std::optional<double> min_value() const override { return 0.0; }
  std::optional<Vector> minimizer() const override;
  std::optional<double> smoothness() const override { return sample_smoothness_; }

  const Matrix& matrix() const noexcept { return a_; }
  const Vector& eigvec() const noexcept { return c_; }

 private:
  Matrix a_;
  Vector c_;
  double sample_smoothness_;
};

/// Mean logistic loss log(1 + exp(-y_i w^T x_i)); z is one data index.
class LogisticObjective final : public StochasticObjective {
 public:
  /// features is n x d, labels are +1 / -1.
  LogisticObjective(Matrix features, Vector labels);

  std::string name() const override { return "logistic"; }
  std::size_t dim() const override { return static_cast<std::size_t>(x_.cols()); }
  NoiseSample sample_noise(Rng& rng) const override;
  double eval(const Vector& w, const NoiseSample& z) const override;
  double true_value(const Vector& w) const override;
  Vector initial_point() const override;
  std::optional<Vector> analytic_grad(const Vector& w, const NoiseSample& z) const override;
  std::optional<Vector> true_grad(const Vector& w) const override;
  std::optional<double> smoothness() const override { return sample_smoothness_; }

  const Matrix& features() const noexcept { return x_; }
  const Vector& labels() const noexcept { return y_; }

 private:
  Matrix x_;
  Vector y_;
  double sample_smoothness_;
};

/// Mean squared error (w^T x_i - y_i)^2; z is one data index.
class LinRegObjective final : public StochasticObjective {
 public:
  LinRegObjective(Matrix features, Vector targets, Vector ground_truth);

  std::string name() const override { return "linreg"; }
  std::size_t dim() const override { return static_cast<std::size_t>(x_.cols()); }
  NoiseSample sample_noise(Rng& rng) const override;
  double eval(const Vector& w, const NoiseSample& z) const override;
  double true_value(const Vector& w) const override;
  Vector initial_point() const override;
  std::optional<Vector> analytic_grad(const Vector& w, const NoiseSample& z) const override;
  std::optional<Vector> true_grad(const Vector& w) const override;
  /// Least-squares optimum of the sample (not the ground truth).
  std::optional<double> min_value() const override { return min_value_; }
  std::optional<Vector> minimizer() const override { return w_ls_; }
  std::optional<double> smoothness() const override { return sample_smoothness_; }

  const Matrix& features() const noexcept { return x_; }
  const Vector& targets() const noexcept { return y_; }
  const Vector& ground_truth() const noexcept { return w_true_; }

 private:
  Matrix x_;
  Vector y_;
  Vector w_true_;
  Vector w_ls_;
  double min_value_;
  double sample_smoothness_;
};

/// Hold-out tuning of a feature-scaled ridge regression.
///
/// Variables theta = (log sigma_1..log sigma_p, log lambda). The inner model
/// w(theta) minimizes |X_s w - y|^2 + lambda |w|^2 over the training split with
/// X_s = X diag(1/sigma), solved in closed form. F(theta, z) is the squared
/// error on the validation points listed in z; f is the full validation MSE.
class HoldoutTuneObjective final : public StochasticObjective {
 public:
  static constexpr double kRegularizerFloor = 1e-10;
  static constexpr double kLogClip = 50.0;

  HoldoutTuneObjective(Matrix train_x, Vector train_y, Matrix val_x, Vector val_y,
                       std::size_t batch_size = 5);

  std::string name() const override { return "ridge-tune"; }
  std::size_t dim() const override { return static_cast<std::size_t>(train_x_.cols()) + 1; }
  NoiseSample sample_noise(Rng& rng) const override;
  double eval(const Vector& theta, const NoiseSample& z) const override;
  double true_value(const Vector& theta) const override;
  /// theta = 0: unit scales and unit regularizer.
  Vector initial_point() const override;

  /// Inner ridge weights, expressed on the unscaled features.
  Vector fit(const Vector& theta) const;
  std::size_t batch_size() const noexcept { return batch_size_; }
  const Vector& validation_targets() const noexcept { return val_y_; }

 private:
  Matrix train_x_;
  Vector train_y_;
  Matrix val_x_;
  Vector val_y_;
  std::size_t batch_size_;
};

/// Singular-value profile of the synthetic quadratic matrices: `spikes`
/// leading singular values equal to 1, the rest equal to `tail`, with Haar
/// singular vectors, rescaled so that |A|_F^2 = d^2 (mean squared row norm d).
struct Spectrum {
  std::size_t spikes = 5;
  double tail = 1e-2;
};

/// Full-rank n x n matrix U diag(s) V^T with the given spectrum.
Matrix spiked_matrix(std::size_t n, const Spectrum& spectrum, Rng& rng);

std::unique_ptr<QuadraticObjective> make_f1(std::size_t d, Rng& rng, const Spectrum& spectrum = {});
/// A = B P with B Gaussian and P an orthogonal projector of rank `rank`
/// (rank == 0 selects d/2).
std::unique_ptr<QuadraticObjective> make_f2(std::size_t d, std::size_t rank, Rng& rng);
/// A = c c^T + U M U^T with U spanning the complement of c and M spiked.
std::unique_ptr<PLNonConvexObjective> make_f3(std::size_t d, Rng& rng, const Spectrum& spectrum = {});
/// Two Gaussian blobs of 500 points each in 20 dimensions (d != 0 overrides).
std::unique_ptr<LogisticObjective> make_logistic(Rng& rng, std::size_t d = 20);
/// N = 1000 points in 100 dimensions, y = w^T x + eps, eps ~ N(0, 0.01).
std::unique_ptr<LinRegObjective> make_linreg(Rng& rng, std::size_t d = 100);
/// 100 samples of a 5-feature regression problem with mismatched feature
/// scales, split 80/20 into train and validation (d != 0 overrides p).
std::unique_ptr<HoldoutTuneObjective> make_holdout_tune(Rng& rng, std::size_t features = 5);

/// Registry entry: d == 0 and rank == 0 select each objective's defaults.
struct ObjectiveSpec {
  std::string name = "F1";
  std::size_t d = 0;
  std::size_t rank = 0;
  Spectrum spectrum;
  std::uint64_t seed = 0;
};

/// Names accepted by make_objective: F1 F2 F3 logistic linreg ridge-tune.
const std::vector<std::string>& registered_objectives();
std::unique_ptr<StochasticObjective> make_objective(const ObjectiveSpec& spec);

}  // namespace sszd
