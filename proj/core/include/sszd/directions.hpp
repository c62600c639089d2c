#pragma once

#include <cstddef>
#include <string_view>

#include "sszd/rng.hpp"
#include "sszd/types.hpp"

namespace sszd {

enum class DirectionKind { Coordinate, Spherical };

std::string_view to_string(DirectionKind kind) noexcept;
/// Accepts "coordinate" or "spherical"; throws ConfigError otherwise.
DirectionKind parse_direction_kind(std::string_view name);

/// A d x l matrix whose columns are the search directions of one iteration.
/// Generated matrices satisfy P^T P = (d/l) I and E[P P^T] = I.
class DirectionMatrix {
 public:
  /// Wraps an arbitrary matrix; only the shape is checked (1 <= cols <= rows).
  explicit DirectionMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  /// Target squared column norm d/l.
  double scale2() const noexcept { return static_cast<double>(dim()) / static_cast<double>(count()); }
  auto column(std::size_t i) const { return entries_.col(static_cast<Eigen::Index>(i)); }

 private:
  Matrix entries_;
};

/// l signed, scaled canonical basis vectors on distinct coordinates.
DirectionMatrix make_coordinate(std::size_t d, std::size_t l, Rng& rng);

/// First l columns of a Haar-distributed orthogonal matrix, scaled by sqrt(d/l).
DirectionMatrix make_spherical(std::size_t d, std::size_t l, Rng& rng);

DirectionMatrix make_directions(DirectionKind kind, std::size_t d, std::size_t l, Rng& rng);

/// d x l matrix with orthonormal columns drawn from the Haar measure.
///
/// Uses a thin QR of a d x l Gaussian block with the sign of each column fixed
/// so that diag(R) > 0. Column j of a QR factor depends only on the first j
/// columns of the input, so this equals the first l columns of the
/// sign-corrected full d x d factorization of the same draws.
Matrix haar_orthonormal_columns(std::size_t d, std::size_t l, Rng& rng);

/// max |P^T P - (d/l) I| over all entries.
double structure_error(const DirectionMatrix& p);
bool verify_structure(const DirectionMatrix& p, double tol);

}  // namespace sszd
