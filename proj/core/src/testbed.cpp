#include "sszd/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sszd/directions.hpp"
#include "sszd/errors.hpp"

namespace sszd {
namespace {


Matrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

constexpr double kMaxCondition = 1e4;

double sigma_max(const Matrix& a) { return Eigen::JacobiSVD<Matrix>(a).singularValues()(0); }

NoiseSample uniform_index(std::size_t n, Rng& rng) {
  return NoiseSample{{rng.uniform_index(0, n - 1)}};
}

std::size_t single_index(const NoiseSample& z, std::size_t n) {
  if (z.indices.size() != 1 || z.indices.front() >= n) {
    throw InvalidDimension("noise sample must hold one index below " + std::to_string(n));
  }
  return z.indices.front();
}

/// log(1 + exp(-m)) without overflow.
double softplus_neg(double m) {
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

/// 1 / (1 + exp(m)).
double sigmoid_neg(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

// ---------------------------------------------------------------------------

QuadraticObjective::QuadraticObjective(std::string name, Matrix a, bool unique_minimizer)
    : name_(std::move(name)), a_(std::move(a)), unique_minimizer_(unique_minimizer) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) throw InvalidDimension("A must be square");
  sample_smoothness_ = 2.0 * a_.rowwise().squaredNorm().maxCoeff();
  const double s = sigma_max(a_);
  mean_smoothness_ = 2.0 * s * s / static_cast<double>(dim());
}

NoiseSample QuadraticObjective::sample_noise(Rng& rng) const { return uniform_index(dim(), rng); }

double QuadraticObjective::eval(const Vector& x, const NoiseSample& z) const {
  const double r = a_.row(static_cast<Eigen::Index>(single_index(z, dim()))).dot(x);
  return r * r;
}

double QuadraticObjective::true_value(const Vector& x) const {
  return (a_ * x).squaredNorm() / static_cast<double>(dim());
}

Vector QuadraticObjective::initial_point() const { return Vector::Ones(a_.cols()); }

std::optional<Vector> QuadraticObjective::analytic_grad(const Vector& x, const NoiseSample& z) const {
  const auto row = a_.row(static_cast<Eigen::Index>(single_index(z, dim())));
  return Vector(2.0 * row.dot(x) * row.transpose());
}

std::optional<Vector> QuadraticObjective::true_grad(const Vector& x) const {
  return Vector((2.0 / static_cast<double>(dim())) * (a_.transpose() * (a_ * x)));
}

std::optional<Vector> QuadraticObjective::minimizer() const {
  if (!unique_minimizer_) return std::nullopt;
  return Vector::Zero(a_.cols());
}

// ---------------------------------------------------------------------------

PLNonConvexObjective::PLNonConvexObjective(Matrix a, Vector c) : a_(std::move(a)), c_(std::move(c)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols() || c_.size() != a_.cols()) {
    throw InvalidDimension("F3 needs a square A and a matching c");
  }
  sample_smoothness_ = 2.0 * a_.rowwise().squaredNorm().maxCoeff() + 6.0 * c_.squaredNorm();
}

NoiseSample PLNonConvexObjective::sample_noise(Rng& rng) const { return uniform_index(dim(), rng); }

double PLNonConvexObjective::eval(const Vector& x, const NoiseSample& z) const {
  const double r = a_.row(static_cast<Eigen::Index>(single_index(z, dim()))).dot(x);
  const double s = std::sin(c_.dot(x));
  return r * r + 3.0 * s * s;
}

double PLNonConvexObjective::true_value(const Vector& x) const {
  const double s = std::sin(c_.dot(x));
  return (a_ * x).squaredNorm() / static_cast<double>(dim()) + 3.0 * s * s;
}

Vector PLNonConvexObjective::initial_point() const { return Vector::Ones(a_.cols()); }

std::optional<Vector> PLNonConvexObjective::analytic_grad(const Vector& x,
                                                          const NoiseSample& z) const {
  const auto row = a_.row(static_cast<Eigen::Index>(single_index(z, dim())));
  return Vector(2.0 * row.dot(x) * row.transpose() + 3.0 * std::sin(2.0 * c_.dot(x)) * c_);
}

std::optional<Vector> PLNonConvexObjective::true_grad(const Vector& x) const {
  return Vector((2.0 / static_cast<double>(dim())) * (a_.transpose() * (a_ * x)) +
                3.0 * std::sin(2.0 * c_.dot(x)) * c_);
}

std::optional<Vector> PLNonConvexObjective::minimizer() const { return Vector::Zero(a_.cols()); }

// ---------------------------------------------------------------------------

LogisticObjective::LogisticObjective(Matrix features, Vector labels)
    : x_(std::move(features)), y_(std::move(labels)) {
  if (x_.rows() == 0 || x_.rows() != y_.size()) throw InvalidDimension("one label per row required");
  sample_smoothness_ = 0.25 * x_.rowwise().squaredNorm().maxCoeff();
}

NoiseSample LogisticObjective::sample_noise(Rng& rng) const {
  return uniform_index(static_cast<std::size_t>(x_.rows()), rng);
}

double LogisticObjective::eval(const Vector& w, const NoiseSample& z) const {
  const auto i = static_cast<Eigen::Index>(single_index(z, static_cast<std::size_t>(x_.rows())));
  return softplus_neg(y_(i) * x_.row(i).dot(w));
}

double LogisticObjective::true_value(const Vector& w) const {
  const Vector margins = y_.cwiseProduct(x_ * w);
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) total += softplus_neg(margins(i));
  return total / static_cast<double>(margins.size());
}

Vector LogisticObjective::initial_point() const { return Vector::Zero(x_.cols()); }

std::optional<Vector> LogisticObjective::analytic_grad(const Vector& w, const NoiseSample& z) const {
  const auto i = static_cast<Eigen::Index>(single_index(z, static_cast<std::size_t>(x_.rows())));
  const double m = y_(i) * x_.row(i).dot(w);
  return Vector(-y_(i) * sigmoid_neg(m) * x_.row(i).transpose());
}

std::optional<Vector> LogisticObjective::true_grad(const Vector& w) const {
  const Vector margins = y_.cwiseProduct(x_ * w);
  Vector coeff(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) coeff(i) = -y_(i) * sigmoid_neg(margins(i));
  return Vector(x_.transpose() * coeff / static_cast<double>(margins.size()));
}

// ---------------------------------------------------------------------------

LinRegObjective::LinRegObjective(Matrix features, Vector targets, Vector ground_truth)
    : x_(std::move(features)), y_(std::move(targets)), w_true_(std::move(ground_truth)) {
  if (x_.rows() == 0 || x_.rows() != y_.size() || w_true_.size() != x_.cols()) {
    throw InvalidDimension("linear regression data shapes do not match");
  }
  w_ls_ = x_.colPivHouseholderQr().solve(y_);
  min_value_ = true_value(w_ls_);
  sample_smoothness_ = 2.0 * x_.rowwise().squaredNorm().maxCoeff();
}

NoiseSample LinRegObjective::sample_noise(Rng& rng) const {
  return uniform_index(static_cast<std::size_t>(x_.rows()), rng);
}

double LinRegObjective::eval(const Vector& w, const NoiseSample& z) const {
  const auto i = static_cast<Eigen::Index>(single_index(z, static_cast<std::size_t>(x_.rows())));
  const double r = x_.row(i).dot(w) - y_(i);
  return r * r;
}

double LinRegObjective::true_value(const Vector& w) const {
  return (x_ * w - y_).squaredNorm() / static_cast<double>(x_.rows());
}

Vector LinRegObjective::initial_point() const { return Vector::Zero(x_.cols()); }

std::optional<Vector> LinRegObjective::analytic_grad(const Vector& w, const NoiseSample& z) const {
  const auto i = static_cast<Eigen::Index>(single_index(z, static_cast<std::size_t>(x_.rows())));
  return Vector(2.0 * (x_.row(i).dot(w) - y_(i)) * x_.row(i).transpose());
}

std::optional<Vector> LinRegObjective::true_grad(const Vector& w) const {
  return Vector((2.0 / static_cast<double>(x_.rows())) * (x_.transpose() * (x_ * w - y_)));
}

// ---------------------------------------------------------------------------

HoldoutTuneObjective::HoldoutTuneObjective(Matrix train_x, Vector train_y, Matrix val_x,
                                           Vector val_y, std::size_t batch_size)
    : train_x_(std::move(train_x)),
      train_y_(std::move(train_y)),
      val_x_(std::move(val_x)),
      val_y_(std::move(val_y)),
      batch_size_(batch_size) {
  if (train_x_.rows() == 0 || val_x_.rows() == 0 || train_x_.rows() != train_y_.size() ||
      val_x_.rows() != val_y_.size() || train_x_.cols() != val_x_.cols() || train_x_.cols() == 0) {
    throw InvalidDimension("hold-out data shapes do not match");
  }
  if (batch_size_ == 0) throw InvalidDimension("validation batch size must be positive");
}

Vector HoldoutTuneObjective::fit(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != dim()) {
    throw InvalidDimension("ridge-tune parameter has the wrong size");
  }
  const Eigen::Index p = train_x_.cols();
  const Vector clipped = theta.cwiseMax(-kLogClip).cwiseMin(kLogClip);
  const Vector inv_scale = (-clipped.head(p)).array().exp();
  const double lambda = std::max(std::exp(clipped(p)), kRegularizerFloor);

  const Matrix xs = train_x_ * inv_scale.asDiagonal();
  Matrix gram = xs.transpose() * xs;
  gram.diagonal().array() += lambda;
  const Vector w_scaled = gram.ldlt().solve(xs.transpose() * train_y_);
  return inv_scale.cwiseProduct(w_scaled);
}

NoiseSample HoldoutTuneObjective::sample_noise(Rng& rng) const {
  NoiseSample z;
  z.indices.reserve(batch_size_);
  const auto n = static_cast<std::size_t>(val_x_.rows());
  for (std::size_t b = 0; b < batch_size_; ++b) z.indices.push_back(rng.uniform_index(0, n - 1));
  return z;
}

double HoldoutTuneObjective::eval(const Vector& theta, const NoiseSample& z) const {
  if (z.indices.empty()) throw InvalidDimension("validation batch is empty");
  const Vector w = fit(theta);
  double total = 0.0;
  for (std::size_t i : z.indices) {
    if (i >= static_cast<std::size_t>(val_x_.rows())) throw InvalidDimension("bad validation index");
    const auto row = static_cast<Eigen::Index>(i);
    const double r = val_x_.row(row).dot(w) - val_y_(row);
    total += r * r;
  }
  return total / static_cast<double>(z.indices.size());
}

double HoldoutTuneObjective::true_value(const Vector& theta) const {
  return (val_x_ * fit(theta) - val_y_).squaredNorm() / static_cast<double>(val_x_.rows());
}

Vector HoldoutTuneObjective::initial_point() const { return Vector::Zero(static_cast<Eigen::Index>(dim())); }

// ---------------------------------------------------------------------------

Matrix spiked_matrix(std::size_t n, const Spectrum& spectrum, Rng& rng) {
  if (n == 0) throw InvalidDimension("matrix size must be positive");
  if (spectrum.spikes == 0) throw ConfigError("spectrum needs at least one spike");
  if (!(spectrum.tail > 0.0 && spectrum.tail <= 1.0 && 1.0 / spectrum.tail <= kMaxCondition)) {
    throw ConfigError("spectrum tail must lie in [1e-4, 1]");
  }
  const auto size = static_cast<Eigen::Index>(n);
  const auto spikes = static_cast<Eigen::Index>(spectrum.spikes);
  Vector s(size);
  for (Eigen::Index j = 0; j < size; ++j) s(j) = j < spikes ? 1.0 : spectrum.tail;
  s *= static_cast<double>(n) / s.norm();
  const Matrix u = haar_orthonormal_columns(n, n, rng);
  const Matrix v = haar_orthonormal_columns(n, n, rng);
  return u * s.asDiagonal() * v.transpose();
}

std::unique_ptr<QuadraticObjective> make_f1(std::size_t d, Rng& rng, const Spectrum& spectrum) {
  if (d == 0) throw InvalidDimension("F1 needs d >= 1");
  return std::make_unique<QuadraticObjective>("F1", spiked_matrix(d, spectrum, rng), true);
}

std::unique_ptr<QuadraticObjective> make_f2(std::size_t d, std::size_t rank, Rng& rng) {
  if (rank == 0) rank = d / 2;
  if (d < 2 || rank == 0 || rank >= d) {
    throw InvalidDimension("F2 needs 1 <= rank < d, got rank=" + std::to_string(rank) +
                           ", d=" + std::to_string(d));
  }
  const auto n = static_cast<Eigen::Index>(d);
  const Matrix b = gaussian(n, n, rng);
  const Matrix u = haar_orthonormal_columns(d, rank, rng);
  return std::make_unique<QuadraticObjective>("F2", b * (u * u.transpose()), false);
}

std::unique_ptr<PLNonConvexObjective> make_f3(std::size_t d, Rng& rng, const Spectrum& spectrum) {
  if (d == 0) throw InvalidDimension("F3 needs d >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  // The first column of a Haar orthogonal matrix is a uniform unit vector c;
  // the remaining columns span its orthogonal complement.
  const Matrix q = haar_orthonormal_columns(d, d, rng);
  const Vector c = q.col(0);
  Matrix a = c * c.transpose();
  if (n > 1) {
    const Matrix u = q.rightCols(n - 1);
    a += u * spiked_matrix(d - 1, spectrum, rng) * u.transpose();
  }
  return std::make_unique<PLNonConvexObjective>(std::move(a), c);
}

std::unique_ptr<LogisticObjective> make_logistic(Rng& rng, std::size_t d) {
  if (d == 0) d = 20;
  constexpr Eigen::Index kPerClass = 500;
  constexpr double kMeanOffset = 0.25;
  const auto p = static_cast<Eigen::Index>(d);
  Matrix x(2 * kPerClass, p);
  Vector y(2 * kPerClass);
  for (Eigen::Index i = 0; i < 2 * kPerClass; ++i) {
    const double label = i < kPerClass ? 1.0 : -1.0;
    y(i) = label;
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = label * kMeanOffset + rng.normal();
  }
  return std::make_unique<LogisticObjective>(std::move(x), std::move(y));
}

std::unique_ptr<LinRegObjective> make_linreg(Rng& rng, std::size_t d) {
  if (d == 0) d = 100;
  constexpr Eigen::Index kSamples = 1000;
  constexpr double kNoiseStd = 0.1;  // variance 0.01
  const auto p = static_cast<Eigen::Index>(d);
  Vector w(p);
  for (Eigen::Index j = 0; j < p; ++j) w(j) = rng.normal();
  Matrix x = gaussian(kSamples, p, rng);
  Vector y = x * w;
  for (Eigen::Index i = 0; i < kSamples; ++i) y(i) += kNoiseStd * rng.normal();
  return std::make_unique<LinRegObjective>(std::move(x), std::move(y), std::move(w));
}

std::unique_ptr<HoldoutTuneObjective> make_holdout_tune(Rng& rng, std::size_t features) {
  if (features == 0) features = 5;
  constexpr Eigen::Index kSamples = 100;
  constexpr Eigen::Index kTrain = 80;
  constexpr double kNoiseStd = 0.3;
  const auto p = static_cast<Eigen::Index>(features);
  Vector scale = Vector::Ones(p);
  Vector w = Vector::Zero(p);
  const double small[] = {0.05, 0.1};
  const double weight[] = {20.0, 10.0, 1.0};
  for (Eigen::Index j = 0; j < p; ++j) {
    if (j < 2) scale(j) = small[j];
    if (j < 3) w(j) = weight[j];
  }
  Matrix x(kSamples, p);
  Vector y(kSamples);
  for (Eigen::Index i = 0; i < kSamples; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = scale(j) * rng.normal();
    y(i) = x.row(i).dot(w) + kNoiseStd * rng.normal();
  }
  return std::make_unique<HoldoutTuneObjective>(x.topRows(kTrain), y.head(kTrain),
                                                x.bottomRows(kSamples - kTrain),
                                                y.tail(kSamples - kTrain));
}

const std::vector<std::string>& registered_objectives() {
  static const std::vector<std::string> names{"F1", "F2", "F3", "logistic", "linreg", "ridge-tune"};
  return names;
}

std::unique_ptr<StochasticObjective> make_objective(const ObjectiveSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t d = spec.d == 0 ? 100 : spec.d;
  if (spec.name == "F1") return make_f1(d, rng, spec.spectrum);
  if (spec.name == "F2") return make_f2(d, spec.rank, rng);
  if (spec.name == "F3") return make_f3(d, rng, spec.spectrum);
  if (spec.name == "logistic") return make_logistic(rng, spec.d);
  if (spec.name == "linreg") return make_linreg(rng, spec.d);
  if (spec.name == "ridge-tune") {
    // d is the optimization dimension: features + 1 regularizer.
    if (spec.d == 1) throw InvalidDimension("ridge-tune needs at least one feature");
    return make_holdout_tune(rng, spec.d == 0 ? 0 : spec.d - 1);
  }
  throw ConfigError("unknown objective '" + spec.name + "'");
}

}  // namespace sszd
