#pragma once

#include <cmath>
#include <string>

#include "sszd/objective.hpp"

namespace sszd::test {

/// F(x, z) = 1/2 x^T A x, noise ignored.
class HalfQuadratic final : public StochasticObjective {
 public:
  explicit HalfQuadratic(Matrix a) : a_(std::move(a)) {}
  std::string name() const override { return "half-quadratic"; }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  NoiseSample sample_noise(Rng&) const override { return {}; }
  double eval(const Vector& x, const NoiseSample&) const override { return 0.5 * x.dot(a_ * x); }
  double true_value(const Vector& x) const override { return 0.5 * x.dot(a_ * x); }
  Vector initial_point() const override { return Vector::Ones(a_.cols()); }
  std::optional<Vector> analytic_grad(const Vector& x, const NoiseSample&) const override {
    return Vector(a_ * x);
  }
  std::optional<double> min_value() const override { return 0.0; }
  std::optional<Vector> minimizer() const override { return Vector::Zero(a_.cols()); }
  const Matrix& matrix() const { return a_; }

 private:
  Matrix a_;
};

/// F(x, z) = c^T x.
class Linear final : public StochasticObjective {
 public:
  explicit Linear(Vector c) : c_(std::move(c)) {}
  std::string name() const override { return "linear"; }
  std::size_t dim() const override { return static_cast<std::size_t>(c_.size()); }
  NoiseSample sample_noise(Rng&) const override { return {}; }
  double eval(const Vector& x, const NoiseSample&) const override { return c_.dot(x); }
  double true_value(const Vector& x) const override { return c_.dot(x); }
  Vector initial_point() const override { return Vector::Zero(c_.size()); }
  std::optional<Vector> analytic_grad(const Vector&, const NoiseSample&) const override { return c_; }

 private:
  Vector c_;
};

/// Returns NaN once x[0] exceeds `limit`.
class Cliff final : public StochasticObjective {
 public:
  Cliff(std::size_t d, double limit) : d_(d), limit_(limit) {}
  std::string name() const override { return "cliff"; }
  std::size_t dim() const override { return d_; }
  NoiseSample sample_noise(Rng&) const override { return {}; }
  double eval(const Vector& x, const NoiseSample&) const override {
    return x[0] > limit_ ? std::nan("") : x.squaredNorm();
  }
  double true_value(const Vector& x) const override { return x.squaredNorm(); }
  Vector initial_point() const override { return Vector::Ones(static_cast<Eigen::Index>(d_)); }

 private:
  std::size_t d_;
  double limit_;
};

inline Vector random_vector(std::size_t d, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = rng.normal();
  return v;
}

inline Matrix random_spd(std::size_t d, Rng& rng) {
  Matrix b(d, d);
  for (auto& x : b.reshaped()) x = rng.normal();
  return b * b.transpose() + Matrix::Identity(d, d);
}

}  // namespace sszd::test
