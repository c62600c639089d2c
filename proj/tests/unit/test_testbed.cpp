#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sszd/errors.hpp"
#include "sszd/testbed.hpp"

using namespace sszd;

namespace {

NoiseSample row(std::size_t i) { return NoiseSample{{i}}; }

std::unique_ptr<StochasticObjective> small(const std::string& name, std::uint64_t seed = 3) {
  ObjectiveSpec spec;
  spec.name = name;
  spec.seed = seed;
  if (name == "F1" || name == "F2" || name == "F3") spec.d = 12;
  return make_objective(spec);
}

}  // namespace

TEST_SUITE("testbed") {

TEST_CASE("F1 hand arithmetic") {
  const QuadraticObjective q("F1", Matrix::Identity(2, 2), true);
  const Vector x = Vector::Ones(2);
  CHECK(q.true_value(x) == doctest::Approx(1.0));
  CHECK(q.eval(x, row(0)) == doctest::Approx(1.0));
  CHECK(q.eval(x, row(1)) == doctest::Approx(1.0));
  CHECK(*q.smoothness() == doctest::Approx(2.0));
  CHECK(q.mean_smoothness() == doctest::Approx(1.0));

  Rng rng(41);
  const auto f1 = make_f1(30, rng);
  const Vector zero = Vector::Zero(30);
  CHECK(f1->true_value(zero) == 0.0);
  for (std::size_t i = 0; i < 30; ++i) CHECK(f1->eval(zero, row(i)) == 0.0);
  CHECK(f1->minimizer()->norm() == 0.0);
}

TEST_CASE("F1 constants follow the matrix") {
  Rng rng(42);
  const auto f1 = make_f1(25, rng);
  const Matrix& a = f1->matrix();
  CHECK(*f1->smoothness() == doctest::Approx(2.0 * a.rowwise().squaredNorm().maxCoeff()));
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector s = svd.singularValues();
  CHECK(f1->mean_smoothness() == doctest::Approx(2.0 * s[0] * s[0] / 25.0));
  CHECK(a.squaredNorm() == doctest::Approx(625.0));
  CHECK(s[0] / s[24] == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(s[4] / s[5] == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("mean of per-row gradients is the full gradient") {
  for (const std::string name : {"F1", "F2", "F3"}) {
    const auto obj = small(name);
    Rng rng(43);
    const Vector x = test::random_vector(12, rng);
    Vector mean = Vector::Zero(12);
    double fmean = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      mean += *obj->analytic_grad(x, row(i));
      fmean += obj->eval(x, row(i));
    }
    mean /= 12.0;
    fmean /= 12.0;
    CHECK((mean - *obj->true_grad(x)).norm() < 1e-10 * (1.0 + mean.norm()));
    CHECK(fmean == doctest::Approx(obj->true_value(x)).epsilon(1e-12));
  }
}

TEST_CASE("F2 has a rank-deficient matrix and no unique minimizer") {
  Rng rng(44);
  const auto f2 = make_f2(12, 4, rng);
  Eigen::JacobiSVD<Matrix> svd(f2->matrix());
  const Vector s = svd.singularValues();
  CHECK(s[3] > 1e-6);
  CHECK(s[4] < 1e-10 * s[0]);
  CHECK_FALSE(f2->minimizer().has_value());
  CHECK(f2->min_value() == 0.0);
  CHECK_THROWS_AS(make_f2(12, 12, rng), InvalidDimension);
  CHECK(make_f2(12, 0, rng)->dim() == 12);
}

TEST_CASE("F3 structure") {
  Rng rng(45);
  const auto f3 = make_f3(15, rng);
  const Vector& c = f3->eigvec();
  CHECK(c.norm() == doctest::Approx(1.0));
  CHECK((f3->matrix() * c - c).norm() < 1e-10);
  const Vector x = test::random_vector(15, rng);
  const double brute = (f3->matrix() * x).squaredNorm() / 15.0 + 3.0 * std::pow(std::sin(c.dot(x)), 2);
  CHECK(f3->true_value(x) == doctest::Approx(brute));
  CHECK(f3->true_value(Vector::Zero(15)) == 0.0);
}

TEST_CASE("logistic at zero is log 2") {
  Rng rng(46);
  const auto lg = make_logistic(rng);
  CHECK(lg->dim() == 20);
  CHECK(lg->true_value(Vector::Zero(20)) == doctest::Approx(std::log(2.0)));
  CHECK(lg->eval(Vector::Zero(20), row(7)) == doctest::Approx(std::log(2.0)));
  const Vector big = 1e4 * Vector::Ones(20);
  CHECK(std::isfinite(lg->true_value(big)));
  CHECK(std::isfinite(lg->true_value(-big)));
}

TEST_CASE("linreg values") {
  Rng rng(47);
  const auto lr = make_linreg(rng);
  CHECK(lr->true_value(lr->ground_truth()) == doctest::Approx(0.01).epsilon(0.2));
  CHECK(lr->true_value(Vector::Zero(100)) == doctest::Approx(lr->targets().squaredNorm() / 1000.0));
  CHECK(*lr->min_value() <= lr->true_value(lr->ground_truth()));
  CHECK(lr->true_grad(*lr->minimizer())->norm() < 1e-8);
}

TEST_CASE("ridge tuning limits") {
  Rng rng(48);
  const auto rt = make_holdout_tune(rng);
  CHECK(rt->dim() == 6);
  Vector theta = Vector::Zero(6);
  theta[5] = 40.0;
  const Vector& vy = rt->validation_targets();
  CHECK(rt->true_value(theta) == doctest::Approx(vy.squaredNorm() / double(vy.size())).epsilon(1e-6));
  CHECK(rt->fit(theta).norm() < 1e-8);

  Matrix x(30, 3);
  for (auto& v : x.reshaped()) v = rng.normal();
  const Vector y = x * Vector::LinSpaced(3, 1.0, 3.0);
  const HoldoutTuneObjective same(x, y, x, y, 4);
  Vector t = Vector::Zero(4);
  t[3] = -40.0;
  CHECK(same.true_value(t) < 1e-10);
  const NoiseSample z = same.sample_noise(rng);
  CHECK(z.indices.size() == 4);
  CHECK(std::isfinite(same.true_value(Vector::Constant(4, 1e3))));
}

TEST_CASE("registry") {
  for (const auto& name : registered_objectives()) {
    const auto obj = small(name);
    CHECK(obj->name() == name);
    CHECK(std::isfinite(obj->true_value(obj->initial_point())));
  }
  CHECK(make_objective({"F1", 0, 0, {}, 1})->dim() == 100);
  CHECK(make_objective({"ridge-tune", 4, 0, {}, 1})->dim() == 4);
  CHECK_THROWS_AS(make_objective({"ridge-tune", 1, 0, {}, 1}), InvalidDimension);
  CHECK_THROWS_AS(make_objective({"F9", 0, 0, {}, 1}), ConfigError);
  CHECK_THROWS_AS(make_objective({"F1", 10, 0, {5, 1e-6}, 1}), ConfigError);
  CHECK(small("F1", 7)->true_value(Vector::Ones(12)) == small("F1", 7)->true_value(Vector::Ones(12)));
}

TEST_CASE("noise samples average to the objective") {
  Rng rng(49);
  for (const auto& name : registered_objectives()) {
    const auto obj = small(name);
    const Vector x = obj->initial_point() + 0.3 * test::random_vector(obj->dim(), rng);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += obj->eval(x, obj->sample_noise(rng));
    CHECK(sum / n == doctest::Approx(obj->true_value(x)).epsilon(0.05));
  }
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(50);
  for (const auto& name : registered_objectives()) {
    const auto obj = small(name);
    const Vector x = obj->initial_point() + 0.3 * test::random_vector(obj->dim(), rng);
    const NoiseSample z = obj->sample_noise(rng);
    const auto g = obj->analytic_grad(x, z);
    if (!g) continue;
    Vector fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Vector xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      fd[i] = (obj->eval(xp, z) - obj->eval(xm, z)) / 2e-6;
    }
    CHECK((fd - *g).norm() <= 1e-4 * std::max(1.0, g->norm()));
  }
}

}
