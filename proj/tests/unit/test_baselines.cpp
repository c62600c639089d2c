#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "sszd/baselines.hpp"
#include "sszd/errors.hpp"
#include "sszd/testbed.hpp"

using namespace sszd;

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Make>
double median_final(const StochasticObjective& obj, std::uint64_t budget, Make make) {
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto opt = make();
    Rng rng(seed);
    finals.push_back(run_optimizer(*opt, obj, budget, rng).final_f());
  }
  return median_of(finals);
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("names round-trip") {
  for (auto kind : {BaselineKind::Stp, BaselineKind::ProbDsIndependent, BaselineKind::ProbDsOrthogonal,
                    BaselineKind::ProbDsTwoDirections, BaselineKind::ProbDsRdIndependent,
                    BaselineKind::ProbDsRdOrthogonal, BaselineKind::FdGaussianSingle, BaselineKind::FdGaussianMulti,
                    BaselineKind::FdSphericalSingle}) {
    CHECK(parse_baseline_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_baseline_kind("nelder-mead"), ConfigError);
  CHECK(is_finite_difference(BaselineKind::FdGaussianMulti));
  CHECK_FALSE(is_finite_difference(BaselineKind::Stp));
}

TEST_CASE("STP picks the best of three points") {
  const test::HalfQuadratic sq(2.0 * Matrix::Identity(2, 2));
  DirectSearchState st{Vector::Unit(2, 0), 1.0, 0};
  EvalCounter counter;
  const auto next = stp_step_with(st, sq, {}, Vector::Unit(2, 0), 0.5, counter);
  CHECK(counter.count() == 3);
  CHECK(next.x[0] == doctest::Approx(0.5));
  CHECK(next.x[1] == 0.0);
  CHECK(next.k == 1);
}

TEST_CASE("STP step size is alpha0 / (k + 1)") {
  const test::Linear lin(Vector::Unit(3, 1));
  DirectSearchState st{Vector::Zero(3), 1.0, 9};
  EvalCounter counter;
  const auto next = stp_step_with(st, lin, {}, Vector::Unit(3, 1), 1.0, counter);
  CHECK(next.x[1] == doctest::Approx(-0.1));
}

TEST_CASE("forcing function") {
  const ForcingFunction rho{1e-5, 1e-5};
  CHECK(rho(1.0, 1.0) == doctest::Approx(1e-5));
  CHECK(rho(0.1, 1.0) == doctest::Approx(1e-7));
}

TEST_CASE("poll accepts a descent direction and expands") {
  Rng rng(31);
  const test::HalfQuadratic q(test::random_spd(4, rng));
  const Vector x = test::random_vector(4, rng);
  const Vector g = q.matrix() * x;
  DirectSearchParams params;
  DirectSearchState st{x, 1e-3, 0};
  EvalCounter counter;
  const auto next = poll_step(st, q, Matrix(Vector(-g / g.norm())), params, {}, counter);
  CHECK(counter.count() == 2);
  CHECK(next.step == doctest::Approx(2e-3));
  CHECK(q.true_value(next.x) < q.true_value(x));
}

TEST_CASE("all-ascent poll contracts and stays") {
  const test::HalfQuadratic q(Matrix::Identity(2, 2));
  Matrix poll(2, 2);
  poll << 1.0, 0.0, 0.0, 1.0;
  DirectSearchParams params;
  DirectSearchState st{Vector::Ones(2), 0.5, 0};
  EvalCounter counter;
  const auto next = poll_step(st, q, poll, params, {}, counter);
  CHECK(counter.count() == 3);
  CHECK(next.x == st.x);
  CHECK(next.step == doctest::Approx(0.25));
}

TEST_CASE("expansion is capped at step_max") {
  const test::Linear lin(Vector::Unit(2, 0));
  DirectSearchParams params;
  params.step_max = 1.5;
  DirectSearchState st{Vector::Zero(2), 1.0, 0};
  EvalCounter counter;
  const auto next = poll_step(st, lin, Matrix(Vector(-Vector::Unit(2, 0))), params, {}, counter);
  CHECK(next.step == 1.5);
}

TEST_CASE("pools and sketches have unit columns") {
  Rng rng(32);
  const Matrix ind = make_pool(6, 12, PollKind::Independent, rng);
  CHECK(ind.cols() == 12);
  CHECK((ind.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
  const Matrix orth = make_pool(6, 12, PollKind::Orthogonal, rng);
  CHECK((orth.leftCols(6).transpose() * orth.leftCols(6) - Matrix::Identity(6, 6)).norm() < 1e-12);
  CHECK((orth.rightCols(6) + orth.leftCols(6)).norm() == 0.0);
  const Matrix sk = make_sketch(10, 4, PollKind::Orthogonal, rng);
  CHECK((sk.transpose() * sk - Matrix::Identity(4, 4)).norm() < 1e-12);
  const Matrix ski = make_sketch(10, 4, PollKind::Independent, rng);
  CHECK((ski.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("ProbDS with a 2d pool spends between 2 and 2d+1 evaluations per step") {
  Rng inst(33);
  const auto f1 = make_f1(100, inst);
  ProbDsOptimizer opt(BaselineKind::ProbDsOrthogonal, 200, {}, 1.0, f1->initial_point());
  CHECK(opt.max_step_cost() == 201);
  Rng rng(1);
  EvalCounter counter;
  for (int i = 0; i < 30; ++i) {
    const auto before = counter.count();
    opt.step(*f1, rng, counter);
    const auto used = counter.count() - before;
    CHECK(used >= 2);
    CHECK(used <= 201);
  }
  ProbDsOptimizer rd(BaselineKind::ProbDsRdIndependent, 50, {}, 1.0, f1->initial_point());
  CHECK(rd.max_step_cost() == 101);
  CHECK_THROWS(ProbDsOptimizer(BaselineKind::Stp, 10, {}, 1.0, f1->initial_point()));
}

TEST_CASE("single-direction finite differences on a linear function are unbiased") {
  Rng rng(34);
  const Vector c = test::random_vector(4, rng);
  const test::Linear lin(c);
  Schedule s;
  s.alpha0 = 0.1;
  s.c = 0.0;
  s.h0 = 1e-6;
  s.r = 0.0;
  Vector mean = Vector::Zero(4);
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    EvalCounter counter;
    const auto next = fd_baseline_step(OptimizerState::start(Vector::Zero(4)), lin, BaselineKind::FdGaussianSingle,
                                       1, s, rng, counter);
    CHECK(counter.count() == 2);
    mean += next.x;
  }
  mean /= n;
  CHECK((mean + 0.1 * c).norm() < 0.05 * 0.1 * c.norm() * 2.0);
}

TEST_CASE("spherical single-direction radius is sqrt(d)") {
  const test::Linear lin(Vector::Unit(9, 0));
  Schedule s;
  s.alpha0 = 1.0;
  s.c = 0.0;
  s.h0 = 1e-6;
  s.r = 0.0;
  Rng rng(35);
  EvalCounter counter;
  // x1 = -(c^T g) g = -g_0 g, so x1_0 = -g_0^2 and |x1| = |g_0| |g|.
  const auto next =
      fd_baseline_step(OptimizerState::start(Vector::Zero(9)), lin, BaselineKind::FdSphericalSingle, 1, s, rng, counter);
  CHECK(next.x[0] <= 0.0);
  CHECK(next.x.norm() == doctest::Approx(3.0 * std::sqrt(-next.x[0])).epsilon(1e-6));
  CHECK(default_fd_directions(BaselineKind::FdGaussianMulti, 9) == 9);
  CHECK(default_fd_directions(BaselineKind::FdSphericalSingle, 9) == 1);
}

TEST_CASE("finite-difference baselines decrease linreg") {
  Rng inst(36);
  const auto lr = make_linreg(inst);
  const double f0 = lr->true_value(lr->initial_point());
  for (auto kind : {BaselineKind::FdGaussianSingle, BaselineKind::FdGaussianMulti, BaselineKind::FdSphericalSingle}) {
    const std::size_t m = default_fd_directions(kind, 100);
    const double scale = kind == BaselineKind::FdGaussianMulti ? 5e-3 : 0.1;
    const double med = median_final(*lr, 5000, [&] {
      return std::make_unique<FdOptimizer>(kind, m, Schedule::synthetic(100, m, scale), lr->initial_point());
    });
    CHECK(med < f0);
  }
}

TEST_CASE("S-SZD beats STP and Gaussian finite differences on F1") {
  Rng inst(37);
  const auto f1 = make_f1(100, inst);
  const double sszd = median_final(*f1, 5000, [&] {
    SszdParams p;
    p.l = 50;
    p.schedule = Schedule::synthetic(100, 50);
    return std::make_unique<SszdOptimizer>(p, f1->initial_point());
  });
  const double stp = median_final(*f1, 5000, [&] { return std::make_unique<StpOptimizer>(1.0, f1->initial_point()); });
  const double fd = median_final(*f1, 5000, [&] {
    return std::make_unique<FdOptimizer>(BaselineKind::FdGaussianMulti, 100, Schedule::synthetic(100, 100),
                                         f1->initial_point());
  });
  CHECK(sszd < stp);
  CHECK(sszd < fd);
}

}
