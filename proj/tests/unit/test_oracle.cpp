#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sszd/errors.hpp"
#include "sszd/oracle.hpp"
#include "sszd/testbed.hpp"

using namespace sszd;
using sszd::test::HalfQuadratic;
using sszd::test::Linear;

TEST_SUITE("oracle") {

TEST_CASE("forward differences on 1/2 x^T A x match the closed form") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = rng.uniform_index(1, 12);
    const std::size_t l = rng.uniform_index(1, d);
    const HalfQuadratic q(test::random_spd(d, rng));
    const Vector x = test::random_vector(d, rng);
    const auto p = make_spherical(d, l, rng);
    const double h = 1e-3;
    EvalCounter counter;
    const auto sg = finite_differences(q, x, {}, p, h, counter);
    CHECK(counter.count() == l + 1);
    CHECK(sg.base_value == doctest::Approx(q.true_value(x)).epsilon(1e-14));
    for (std::size_t i = 0; i < l; ++i) {
      const Vector pi = p.column(i);
      const double slope = (q.matrix() * x).dot(pi);
      const double curv = 0.5 * h * pi.dot(q.matrix() * pi);
      CHECK(std::abs(sg.fd_coeffs[i] - (slope + curv)) <= 1e-8 * (std::abs(slope) + std::abs(curv)));
    }
    CHECK((sg.vector - p.entries() * sg.fd_coeffs).norm() < 1e-12);
  }
}

TEST_CASE("error of the surrogate is within lambda d h / (2 sqrt l)") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = rng.uniform_index(2, 25);
    const std::size_t l = rng.uniform_index(1, d);
    Rng inst = rng.split(trial);
    const auto f1 = make_f1(d, inst);
    const double lambda = *f1->smoothness();
    const Vector x = test::random_vector(d, rng);
    const auto z = f1->sample_noise(rng);
    const auto p = make_directions(trial % 2 ? DirectionKind::Coordinate : DirectionKind::Spherical, d, l, rng);
    for (double h : {1e-1, 1e-3, 1e-5}) {
      EvalCounter counter;
      const auto sg = finite_differences(*f1, x, z, p, h, counter);
      const Vector exact = p.entries().transpose() * *f1->analytic_grad(x, z);
      CHECK((sg.fd_coeffs - exact).norm() <= lambda * d * h / (2.0 * std::sqrt(double(l))) + 1e-9);
    }
  }
}

TEST_CASE("discretization at or below the floor is rejected") {
  const Linear lin(Vector::Ones(3));
  Rng rng(13);
  const auto p = make_spherical(3, 2, rng);
  EvalCounter counter;
  CHECK_THROWS_AS(finite_differences(lin, Vector::Zero(3), {}, p, 1e-12, counter), DiscretizationUnderflow);
  CHECK_THROWS_AS(finite_differences(lin, Vector::Zero(3), {}, p, 0.0, counter), DiscretizationUnderflow);
  OracleOptions loose{1e-3};
  CHECK_THROWS_AS(finite_differences(lin, Vector::Zero(3), {}, p, 1e-4, counter, loose), DiscretizationUnderflow);
  CHECK_NOTHROW(finite_differences(lin, Vector::Zero(3), {}, p, 1e-11, counter));
}

TEST_CASE("non-finite values name the failing direction") {
  const test::Cliff cliff(2, 1.5);
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  m(0, 1) = 1.0;
  EvalCounter counter;
  try {
    finite_differences(cliff, Vector::Ones(2), {}, DirectionMatrix(m), 1.0, counter);
    FAIL("expected OracleFailure");
  } catch (const OracleFailure& e) {
    CHECK(e.direction() == 1);
  }
  Vector far = Vector::Ones(2);
  far[0] = 2.0;
  try {
    finite_differences(cliff, far, {}, DirectionMatrix(m), 1.0, counter);
    FAIL("expected OracleFailure");
  } catch (const OracleFailure& e) {
    CHECK(e.direction() == OracleFailure::kBasePoint);
  }
}

TEST_CASE("averaged forward differences on a linear function") {
  Vector c(3);
  c << 1.0, 0.0, 0.0;
  const Linear lin(c);
  EvalCounter counter;
  const Vector g = averaged_forward_differences(lin, Vector::Zero(3), {}, 1e-6, Matrix(Vector(c)), counter);
  CHECK(counter.count() == 2);
  CHECK((g - c).norm() < 1e-9);

  Rng rng(14);
  Vector c5 = test::random_vector(5, rng);
  const Linear lin5(c5);
  EvalCounter many;
  const Vector est = smoothed_gradient_gaussian(lin5, Vector::Zero(5), {}, 1e-6, 40000, rng, many);
  CHECK(many.count() == 40001);
  CHECK((est - c5).norm() / c5.norm() < 0.05);
}

TEST_CASE("Gaussian smoothing on a quadratic approaches the gradient") {
  Rng rng(15);
  const HalfQuadratic q(test::random_spd(5, rng));
  const Vector x = test::random_vector(5, rng);
  EvalCounter counter;
  const Vector est = smoothed_gradient_gaussian(q, x, {}, 1e-6, 10000, rng, counter);
  const Vector grad = q.matrix() * x;
  CHECK((est - grad).norm() / grad.norm() < 0.1);
}

TEST_CASE("exact directional projection") {
  Rng rng(16);
  const HalfQuadratic q(test::random_spd(8, rng));
  const Vector x = test::random_vector(8, rng);
  const Vector grad = q.matrix() * x;

  const auto full = make_spherical(8, 8, rng);
  CHECK((exact_directional_projection(q, x, {}, full) - grad).norm() < 1e-8 * grad.norm());

  Matrix e = Matrix::Zero(8, 1);
  e(0, 0) = std::sqrt(8.0);
  const Vector proj = exact_directional_projection(q, x, {}, DirectionMatrix(e));
  CHECK(proj[0] == doctest::Approx(8.0 * grad[0]));
  CHECK(proj.tail(7).norm() == 0.0);

  const auto p = make_spherical(8, 3, rng);
  EvalCounter counter;
  const auto sg = finite_differences(q, x, {}, p, 1e-7, counter);
  CHECK((sg.vector - exact_directional_projection(q, x, {}, p)).norm() <= 1e-4);

  const test::Cliff no_grad(2, 10.0);
  CHECK_THROWS_AS(exact_directional_projection(no_grad, Vector::Zero(2), {}, make_spherical(2, 1, rng)),
                  Unsupported);
}

TEST_CASE("dimension mismatch is rejected") {
  const Linear lin(Vector::Ones(3));
  Rng rng(17);
  EvalCounter counter;
  CHECK_THROWS_AS(finite_differences(lin, Vector::Zero(3), {}, make_spherical(4, 2, rng), 1e-4, counter),
                  InvalidDimension);
}

}
