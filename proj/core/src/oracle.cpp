#include "sszd/oracle.hpp"

#include <string>

#include "sszd/errors.hpp"

namespace sszd {
namespace {

void check_step(double h, const OracleOptions& options) {
  if (!(h > options.h_floor)) {
    throw DiscretizationUnderflow("discretization h=" + std::to_string(h) +
                                  " is not above the floor " + std::to_string(options.h_floor));
  }
}

void check_dim(const StochasticObjective& obj, Eigen::Index rows) {
  if (static_cast<std::size_t>(rows) != obj.dim()) {
    throw InvalidDimension("directions have " + std::to_string(rows) + " rows but " + obj.name() +
                           " has dimension " + std::to_string(obj.dim()));
  }
}

}  // namespace

SurrogateGradient finite_differences(const StochasticObjective& obj, const Vector& x,
                                     const NoiseSample& z, const DirectionMatrix& p, double h,
                                     EvalCounter& counter, const OracleOptions& options) {
  check_step(h, options);
  check_dim(obj, p.entries().rows());

  SurrogateGradient out;
  out.base_value = counted_eval(obj, x, z, counter, OracleFailure::kBasePoint);
  out.fd_coeffs.resize(static_cast<Eigen::Index>(p.count()));
  Vector probe(x.size());
  for (std::size_t i = 0; i < p.count(); ++i) {
    probe = x + h * p.column(i);
    const double value = counted_eval(obj, probe, z, counter, i);
    out.fd_coeffs(static_cast<Eigen::Index>(i)) = (value - out.base_value) / h;
  }
  out.vector = p.entries() * out.fd_coeffs;
  return out;
}

Vector averaged_forward_differences(const StochasticObjective& obj, const Vector& x,
                                    const NoiseSample& z, double h, const Matrix& directions,
                                    EvalCounter& counter, const OracleOptions& options) {
  check_step(h, options);
  check_dim(obj, directions.rows());
  if (directions.cols() == 0) throw InvalidDimension("at least one direction is required");

  const double base = counted_eval(obj, x, z, counter, OracleFailure::kBasePoint);
  Vector estimate = Vector::Zero(x.size());
  Vector probe(x.size());
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    probe = x + h * directions.col(j);
    const double value = counted_eval(obj, probe, z, counter, static_cast<std::size_t>(j));
    estimate += ((value - base) / h) * directions.col(j);
  }
  return estimate / static_cast<double>(directions.cols());
}

Vector smoothed_gradient_gaussian(const StochasticObjective& obj, const Vector& x,
                                  const NoiseSample& z, double h, std::size_t num_dirs, Rng& rng,
                                  EvalCounter& counter, const OracleOptions& options) {
  if (num_dirs == 0) throw InvalidDimension("Gaussian smoothing needs m >= 1 directions");
  check_step(h, options);
  Matrix g(static_cast<Eigen::Index>(obj.dim()), static_cast<Eigen::Index>(num_dirs));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  }
  return averaged_forward_differences(obj, x, z, h, g, counter, options);
}

Vector exact_directional_projection(const StochasticObjective& obj, const Vector& x,
                                    const NoiseSample& z, const DirectionMatrix& p) {
  check_dim(obj, p.entries().rows());
  const auto grad = obj.analytic_grad(x, z);
  if (!grad) throw Unsupported(obj.name() + " does not provide an analytic gradient");
  return p.entries() * (p.entries().transpose() * *grad);
}

}  // namespace sszd
