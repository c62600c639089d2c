#include "sszd/directions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sszd/errors.hpp"

namespace sszd {
namespace {

constexpr int kMaxQrAttempts = 5;

void check_dims(std::size_t d, std::size_t l) {
  if (d == 0 || l == 0 || l > d) {
    throw InvalidDimension("direction count l=" + std::to_string(l) +
                           " must satisfy 1 <= l <= d=" + std::to_string(d));
  }
}

}  // namespace

std::string_view to_string(DirectionKind kind) noexcept {
  switch (kind) {
    case DirectionKind::Coordinate:
      return "coordinate";
    case DirectionKind::Spherical:
      return "spherical";
  }
  return "unknown";
}

DirectionKind parse_direction_kind(std::string_view name) {
  if (name == "coordinate") return DirectionKind::Coordinate;
  if (name == "spherical") return DirectionKind::Spherical;
  throw ConfigError("unknown direction kind '" + std::string(name) + "'");
}

DirectionMatrix::DirectionMatrix(Matrix entries) : entries_(std::move(entries)) {
  check_dims(static_cast<std::size_t>(entries_.rows()), static_cast<std::size_t>(entries_.cols()));
}

DirectionMatrix make_coordinate(std::size_t d, std::size_t l, Rng& rng) {
  check_dims(d, l);
  // Partial Fisher-Yates: the first l slots end up a uniform l-subset.
  std::vector<std::size_t> index(d);
  std::iota(index.begin(), index.end(), std::size_t{0});
  const double scale = std::sqrt(static_cast<double>(d) / static_cast<double>(l));
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < l; ++i) {
    std::swap(index[i], index[rng.uniform_index(i, d - 1)]);
    p(static_cast<Eigen::Index>(index[i]), static_cast<Eigen::Index>(i)) = rng.sign() * scale;
  }
  return DirectionMatrix(std::move(p));
}

Matrix haar_orthonormal_columns(std::size_t d, std::size_t l, Rng& rng) {
  check_dims(d, l);
  const auto rows = static_cast<Eigen::Index>(d);
  const auto cols = static_cast<Eigen::Index>(l);
  for (int attempt = 0; attempt < kMaxQrAttempts; ++attempt) {
    Matrix z(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    const Vector diag = qr.matrixQR().diagonal();
    const double floor = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(d)) *
                         z.cwiseAbs().maxCoeff();
    if ((diag.array().abs() <= floor).any()) continue;

    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      // sign(0) := +1; unreachable after the rank check above.
      if (diag(j) < 0.0) q.col(j) *= -1.0;
    }
    return q;
  }
  throw DegenerateSample("Gaussian block was numerically rank deficient " +
                         std::to_string(kMaxQrAttempts) + " times in a row");
}

DirectionMatrix make_spherical(std::size_t d, std::size_t l, Rng& rng) {
  Matrix q = haar_orthonormal_columns(d, l, rng);
  q *= std::sqrt(static_cast<double>(d) / static_cast<double>(l));
  return DirectionMatrix(std::move(q));
}

DirectionMatrix make_directions(DirectionKind kind, std::size_t d, std::size_t l, Rng& rng) {
  switch (kind) {
    case DirectionKind::Coordinate:
      return make_coordinate(d, l, rng);
    case DirectionKind::Spherical:
      return make_spherical(d, l, rng);
  }
  throw ConfigError("unknown direction kind");
}

double structure_error(const DirectionMatrix& p) {
  const Matrix& e = p.entries();
  Matrix gram = e.transpose() * e;
  gram.diagonal().array() -= p.scale2();
  return gram.cwiseAbs().maxCoeff();
}

bool verify_structure(const DirectionMatrix& p, double tol) {
  const double err = structure_error(p);
  return std::isfinite(err) && err <= tol;
}

}  // namespace sszd
