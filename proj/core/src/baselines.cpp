#include "sszd/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "sszd/directions.hpp"
#include "sszd/errors.hpp"

namespace sszd {
namespace {

struct KindName {
  BaselineKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 9> kKindNames{{
    {BaselineKind::Stp, "stp"},
    {BaselineKind::ProbDsIndependent, "probds-independent"},
    {BaselineKind::ProbDsOrthogonal, "probds-orthogonal"},
    {BaselineKind::ProbDsTwoDirections, "probds-2d"},
    {BaselineKind::ProbDsRdIndependent, "probds-rd-independent"},
    {BaselineKind::ProbDsRdOrthogonal, "probds-rd-orthogonal"},
    {BaselineKind::FdGaussianSingle, "fd-gaussian-single"},
    {BaselineKind::FdGaussianMulti, "fd-gaussian-multi"},
    {BaselineKind::FdSphericalSingle, "fd-spherical-single"},
}};

Vector unit_sphere(std::size_t d, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(d));
  for (;;) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    const double n = v.norm();
    if (n > 0.0) return v / n;
  }
}

bool is_rd(BaselineKind kind) {
  return kind == BaselineKind::ProbDsRdIndependent || kind == BaselineKind::ProbDsRdOrthogonal;
}

PollKind poll_kind_of(BaselineKind kind) {
  return (kind == BaselineKind::ProbDsOrthogonal || kind == BaselineKind::ProbDsRdOrthogonal)
             ? PollKind::Orthogonal
             : PollKind::Independent;
}

}  // namespace

std::string_view to_string(BaselineKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

BaselineKind parse_baseline_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

bool is_finite_difference(BaselineKind kind) noexcept {
  return kind == BaselineKind::FdGaussianSingle || kind == BaselineKind::FdGaussianMulti ||
         kind == BaselineKind::FdSphericalSingle;
}

double ForcingFunction::operator()(double alpha, double dir_norm2) const noexcept {
  return std::min(c1, c2 * alpha * alpha * dir_norm2);
}

DirectSearchState stp_step_with(const DirectSearchState& state, const StochasticObjective& obj,
                                const NoiseSample& z, const Vector& s, double alpha0,
                                EvalCounter& counter) {
  const double alpha = alpha0 / static_cast<double>(state.k + 1);
  const Vector plus = state.x + alpha * s;
  const Vector minus = state.x - alpha * s;
  const double f0 = counted_eval(obj, state.x, z, counter, OracleFailure::kBasePoint);
  const double fp = counted_eval(obj, plus, z, counter, 0);
  const double fm = counted_eval(obj, minus, z, counter, 1);

  DirectSearchState next{state.x, alpha, state.k + 1};
  // Ties keep the current point, then prefer +s.
  if (fp < f0 && fp <= fm) {
    next.x = plus;
  } else if (fm < f0 && fm < fp) {
    next.x = minus;
  }
  return next;
}

DirectSearchState stp_step(const DirectSearchState& state, const StochasticObjective& obj,
                           double alpha0, Rng& rng, EvalCounter& counter) {
  const Vector s = unit_sphere(obj.dim(), rng);
  const NoiseSample z = obj.sample_noise(rng);
  return stp_step_with(state, obj, z, s, alpha0, counter);
}

DirectSearchState poll_step(const DirectSearchState& state, const StochasticObjective& obj,
                            const Matrix& poll, const DirectSearchParams& params,
                            const NoiseSample& z, EvalCounter& counter) {
  if (poll.cols() == 0) throw InvalidDimension("poll set is empty");
  const double base = counted_eval(obj, state.x, z, counter, OracleFailure::kBasePoint);
  DirectSearchState next{state.x, state.step, state.k + 1};
  Vector trial(state.x.size());
  for (Eigen::Index j = 0; j < poll.cols(); ++j) {
    trial = state.x + state.step * poll.col(j);
    const double value = counted_eval(obj, trial, z, counter, static_cast<std::size_t>(j));
    if (value < base - params.forcing(state.step, poll.col(j).squaredNorm())) {
      next.x = trial;
      next.step = std::min(state.step * params.expansion, params.step_max);
      return next;
    }
  }
  next.step = std::max(state.step * params.contraction, std::numeric_limits<double>::min());
  return next;
}

Matrix make_pool(std::size_t d, std::size_t pool_size, PollKind kind, Rng& rng) {
  if (pool_size == 0) throw InvalidDimension("pool size must be at least 1");
  const auto rows = static_cast<Eigen::Index>(d);
  Matrix pool(rows, static_cast<Eigen::Index>(pool_size));
  if (kind == PollKind::Independent) {
    for (Eigen::Index j = 0; j < pool.cols(); ++j) pool.col(j) = unit_sphere(d, rng);
    return pool;
  }
  Eigen::Index filled = 0;
  while (filled < pool.cols()) {
    const Matrix q = haar_orthonormal_columns(d, d, rng);
    for (Eigen::Index j = 0; j < rows && filled < pool.cols(); ++j) pool.col(filled++) = q.col(j);
    for (Eigen::Index j = 0; j < rows && filled < pool.cols(); ++j) pool.col(filled++) = -q.col(j);
  }
  return pool;
}

DirectSearchState probds_step(const DirectSearchState& state, const StochasticObjective& obj,
                              std::size_t pool_size, PollKind kind,
                              const DirectSearchParams& params, Rng& rng, EvalCounter& counter) {
  const Matrix pool = make_pool(obj.dim(), pool_size, kind, rng);
  const NoiseSample z = obj.sample_noise(rng);
  return poll_step(state, obj, pool, params, z, counter);
}

Matrix make_sketch(std::size_t d, std::size_t l, PollKind kind, Rng& rng) {
  if (l == 0 || l > d) {
    throw InvalidDimension("sketch width must satisfy 1 <= l <= d");
  }
  if (kind == PollKind::Orthogonal) return haar_orthonormal_columns(d, l, rng);
  Matrix q(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(l));
  for (Eigen::Index j = 0; j < q.cols(); ++j) q.col(j) = unit_sphere(d, rng);
  return q;
}

DirectSearchState probds_rd_step(const DirectSearchState& state, const StochasticObjective& obj,
                                 std::size_t l, PollKind kind, const DirectSearchParams& params,
                                 Rng& rng, EvalCounter& counter) {
  const Matrix q = make_sketch(obj.dim(), l, kind, rng);
  Matrix poll(q.rows(), 2 * q.cols());
  poll << q, -q;
  const NoiseSample z = obj.sample_noise(rng);
  return poll_step(state, obj, poll, params, z, counter);
}

std::size_t default_fd_directions(BaselineKind kind, std::size_t d) {
  return kind == BaselineKind::FdGaussianMulti ? d : 1;
}

OptimizerState fd_baseline_step(const OptimizerState& state, const StochasticObjective& obj,
                                BaselineKind kind, std::size_t m, const Schedule& schedule,
                                Rng& rng, EvalCounter& counter, const OracleOptions& options) {
  if (!is_finite_difference(kind)) {
    throw ConfigError(std::string(to_string(kind)) + " is not a finite-difference baseline");
  }
  if (m == 0) throw InvalidDimension("finite-difference baselines need m >= 1");
  const std::uint64_t k = state.k + 1;
  const double alpha = schedule.alpha(k);
  const double h = schedule.h(k);
  const auto d = obj.dim();

  Matrix dirs(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
  if (kind == BaselineKind::FdSphericalSingle) {
    const double radius = std::sqrt(static_cast<double>(d));
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) dirs.col(j) = radius * unit_sphere(d, rng);
  } else {
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
      for (Eigen::Index i = 0; i < dirs.rows(); ++i) dirs(i, j) = rng.normal();
    }
  }
  const NoiseSample z = obj.sample_noise(rng);
  const Vector g = averaged_forward_differences(obj, state.x, z, h, dirs, counter, options);

  OptimizerState next;
  next.k = k;
  next.weighted_sum = state.weighted_sum + alpha * state.x;
  next.weight_total = state.weight_total + alpha;
  next.x = state.x - alpha * g;
  return next;
}

StpOptimizer::StpOptimizer(double alpha0, Vector x0)
    : alpha0_(alpha0), state_{std::move(x0), alpha0, 0} {
  if (!(alpha0 > 0.0)) throw ConfigError("STP initial step must be positive");
}

void StpOptimizer::step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) {
  state_ = stp_step(state_, obj, alpha0_, rng, counter);
}

ProbDsOptimizer::ProbDsOptimizer(BaselineKind kind, std::size_t width, DirectSearchParams params,
                                 double initial_step, Vector x0)
    : kind_(kind), width_(width), params_(params), state_{std::move(x0), initial_step, 0} {
  const auto d = static_cast<std::size_t>(state_.x.size());
  switch (kind) {
    case BaselineKind::ProbDsIndependent:
    case BaselineKind::ProbDsOrthogonal:
      if (width_ == 0) throw InvalidDimension("ProbDS pool size must be at least 1");
      break;
    case BaselineKind::ProbDsTwoDirections:
      width_ = 2;
      break;
    case BaselineKind::ProbDsRdIndependent:
    case BaselineKind::ProbDsRdOrthogonal:
      if (width_ == 0 || width_ > d) throw InvalidDimension("ProbDS-RD needs 1 <= l <= d");
      break;
    default:
      throw ConfigError(std::string(to_string(kind)) + " is not a direct-search baseline");
  }
  if (!(params_.step_max > 0.0) || !(initial_step > 0.0) || initial_step > params_.step_max) {
    throw ConfigError("direct search needs 0 < initial step <= step_max");
  }
  if (!(params_.expansion >= 1.0) || !(params_.contraction > 0.0 && params_.contraction < 1.0)) {
    throw ConfigError("direct search needs expansion >= 1 and 0 < contraction < 1");
  }
}

std::string ProbDsOptimizer::name() const { return std::string(to_string(kind_)); }

std::uint64_t ProbDsOptimizer::max_step_cost() const {
  return 1 + (is_rd(kind_) ? 2 * width_ : width_);
}

void ProbDsOptimizer::step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) {
  if (is_rd(kind_)) {
    state_ = probds_rd_step(state_, obj, width_, poll_kind_of(kind_), params_, rng, counter);
  } else if (kind_ == BaselineKind::ProbDsTwoDirections) {
    const Vector u = unit_sphere(obj.dim(), rng);
    Matrix poll(u.size(), 2);
    poll << u, -u;
    const NoiseSample z = obj.sample_noise(rng);
    state_ = poll_step(state_, obj, poll, params_, z, counter);
  } else {
    state_ = probds_step(state_, obj, width_, poll_kind_of(kind_), params_, rng, counter);
  }
}

FdOptimizer::FdOptimizer(BaselineKind kind, std::size_t m, Schedule schedule, Vector x0,
                         OracleOptions options)
    : kind_(kind),
      m_(m),
      schedule_(schedule),
      options_(options),
      state_(OptimizerState::start(std::move(x0))) {
  if (!is_finite_difference(kind)) {
    throw ConfigError(std::string(to_string(kind)) + " is not a finite-difference baseline");
  }
  if (m_ == 0) throw InvalidDimension("finite-difference baselines need m >= 1");
}

std::string FdOptimizer::name() const {
  return std::string(to_string(kind_)) + "-m" + std::to_string(m_);
}

void FdOptimizer::step(const StochasticObjective& obj, Rng& rng, EvalCounter& counter) {
  state_ = fd_baseline_step(state_, obj, kind_, m_, schedule_, rng, counter, options_);
}

}  // namespace sszd
