#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "sszd/errors.hpp"
#include "sszd/sszd.hpp"
#include "sszd/testbed.hpp"

using namespace sszd;

namespace {

bool has_warning(const std::vector<std::string>& warnings, const std::string& needle) {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const std::string& w) { return w.find(needle) != std::string::npos; });
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_SUITE("sszd") {

TEST_CASE("one hand-expanded step on 1/2 |x|^2") {
  const test::HalfQuadratic q(Matrix::Identity(2, 2));
  Matrix m = Matrix::Zero(2, 1);
  m(0, 0) = std::sqrt(2.0);
  Schedule s;
  s.alpha0 = 0.1;
  s.c = 0.6;
  s.h0 = 1e-6;
  s.r = 0.6;
  EvalCounter counter;
  const auto next = sszd_step_with(OptimizerState::start(Vector::Unit(2, 0)), q, DirectionMatrix(m), {}, s, counter);
  CHECK(next.k == 1);
  CHECK(counter.count() == 2);
  // fd coefficient is sqrt(2) + h exactly, so x1 = 0.8 - 0.1 sqrt(2) h.
  CHECK(std::abs(next.x[0] - (0.8 - 0.1 * std::sqrt(2.0) * 1e-6)) < 1e-9);
  CHECK(std::abs(next.x[0] - 0.8) < 1e-6);
  CHECK(next.x[1] == 0.0);
}

TEST_CASE("linear function with a full orthogonal basis moves along -c") {
  Rng rng(21);
  const Vector c = test::random_vector(6, rng);
  const test::Linear lin(c);
  Schedule s;
  s.alpha0 = 0.05;
  s.c = 0.0;
  s.h0 = 1e-8;
  s.r = 0.0;
  OptimizerState st = OptimizerState::start(test::random_vector(6, rng));
  EvalCounter counter;
  for (int i = 0; i < 5; ++i) {
    const Vector before = st.x;
    st = sszd_step(st, lin, DirectionKind::Spherical, 6, s, rng, counter);
    CHECK((st.x - (before - 0.05 * c)).norm() < 1e-6);
  }
}

TEST_CASE("averaged iterate weights x_k by alpha_{k+1}") {
  Rng rng(22);
  const auto f1 = make_f1(5, rng);
  const Schedule s = Schedule::convex(0.05, 0.6, 1e-7, 0.6);
  OptimizerState st = OptimizerState::start(f1->initial_point());
  CHECK((st.averaged() - st.x).norm() == 0.0);
  Vector num = Vector::Zero(5);
  double den = 0.0;
  EvalCounter counter;
  for (std::uint64_t k = 0; k < 20; ++k) {
    num += s.alpha(k + 1) * st.x;
    den += s.alpha(k + 1);
    st = sszd_step(st, *f1, DirectionKind::Coordinate, 2, s, rng, counter);
  }
  CHECK((st.averaged() - num / den).norm() < 1e-12);
}

TEST_CASE("budget accounting and trace convention") {
  Rng inst(23);
  const auto f1 = make_f1(100, inst);
  for (std::size_t l : {1u, 7u, 100u}) {
    SszdParams params;
    params.l = l;
    params.schedule = Schedule::synthetic(100, l);
    SszdOptimizer opt(params, f1->initial_point());
    Rng rng(1);
    const auto trace = run_optimizer(opt, *f1, l + 1, rng);
    CHECK(trace.rows.size() == l + 1);
    CHECK(trace.steps() == 1);
    for (std::size_t i = 0; i + 1 < trace.rows.size(); ++i) CHECK(trace.rows[i].f_true == trace.initial_f);
    CHECK(trace.rows.back().f_true == doctest::Approx(f1->true_value(trace.final_x)));
  }
  SszdParams params;
  params.schedule = Schedule::synthetic(100, 1);
  SszdOptimizer opt(params, f1->initial_point());
  Rng rng(2);
  const auto trace = run_optimizer(opt, *f1, 5000, rng);
  CHECK(trace.steps() == 2500);
  CHECK(trace.evals() == 5000);
  for (std::size_t i = 0; i < trace.rows.size(); ++i) CHECK(trace.rows[i].eval == i + 1);

  SszdParams wide;
  wide.l = 30;
  wide.schedule = Schedule::synthetic(100, 30);
  SszdOptimizer opt30(wide, f1->initial_point());
  const auto t30 = run_optimizer(opt30, *f1, 100, rng);
  CHECK(t30.evals() == 93);
  SszdOptimizer too_big(wide, f1->initial_point());
  CHECK_THROWS_AS(run_optimizer(too_big, *f1, 30, rng), ConfigError);
}

TEST_CASE("same seed gives the same trace") {
  Rng inst(24);
  const auto f3 = make_f3(20, inst);
  SszdParams params;
  params.l = 4;
  params.schedule = Schedule::synthetic(20, 4);
  SszdOptimizer a(params, f3->initial_point()), b(params, f3->initial_point());
  Rng ra(99), rb(99);
  const auto ta = run_optimizer(a, *f3, 1000, ra);
  const auto tb = run_optimizer(b, *f3, 1000, rb);
  CHECK(ta.rows == tb.rows);
  CHECK(ta.final_x == tb.final_x);
}

TEST_CASE("oracle failure ends the run with a partial trace") {
  const test::Cliff cliff(3, 1.2);
  SszdParams params;
  params.l = 3;
  params.schedule.alpha0 = 1.0;
  params.schedule.h0 = 0.5;
  params.schedule.r = 0.0;
  SszdOptimizer opt(params, Vector::Ones(3));
  Rng rng(3);
  const auto trace = run_optimizer(opt, cliff, 100, rng);
  REQUIRE(trace.error.has_value());
  CHECK(trace.evals() < 100);
}

TEST_CASE("schedules") {
  Schedule s;
  s.alpha0 = 2.0;
  s.c = 0.5;
  s.h0 = 1.0;
  s.r = 1.0;
  CHECK(s.alpha(4) == doctest::Approx(1.0));
  CHECK(s.h(8) == doctest::Approx(0.125));
  CHECK_THROWS(s.alpha(0));
  s.alpha_cap = 0.5;
  CHECK(s.alpha(1) == 0.5);

  CHECK_THROWS_AS(Schedule::convex(1.0, 0.5, 1.0, 0.6), ConfigError);
  CHECK_THROWS_AS(Schedule::convex(1.0, 0.6, 1.0, 0.5), ConfigError);
  CHECK(Schedule::polyak_lojasiewicz(1.0, 0.8, 1e-7).r == doctest::Approx(0.4));
  CHECK_THROWS_AS(Schedule::polyak_lojasiewicz(1.0, 1.1, 1.0), ConfigError);
  const auto syn = Schedule::synthetic(100, 25);
  CHECK(syn.alpha0 == doctest::Approx(2.5e-3));
  CHECK(syn.h(4) == doctest::Approx(5e-9));
}

TEST_CASE("schedule warnings") {
  Schedule ok;
  ok.alpha0 = 1e-3;
  ok.c = 0.75;
  ok.r = 0.5;
  CHECK_FALSE(has_warning(validate_schedule(ok, 10, 2, 1.0), "summable"));

  Schedule low = ok;
  low.c = 0.3;
  CHECK(has_warning(validate_schedule(low, 10, 2, 1.0), "c outside (1/2,1]"));

  Schedule rough = ok;
  rough.c = 0.55;
  rough.r = 0.4;
  const auto w = validate_schedule(rough, 10, 2, 1.0);
  CHECK(has_warning(w, "summable"));
  CHECK(has_warning(w, "r below 1/2"));

  Rng rng(25);
  const auto f1 = make_f1(20, rng);
  const double lambda = *f1->smoothness();
  Schedule big = ok;
  big.alpha0 = 2.0 * 5.0 / (20.0 * lambda);
  CHECK(has_warning(validate_schedule(big, 20, 5, lambda), "l/(d*lambda)"));
  big.alpha0 = 0.5 * 5.0 / (20.0 * lambda);
  CHECK_FALSE(has_warning(validate_schedule(big, 20, 5, lambda), "l/(d*lambda)"));
}

TEST_CASE("F1 d=100 with l=d drops tenfold within 5000 evaluations") {
  Rng inst(26);
  const auto f1 = make_f1(100, inst);
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SszdParams params;
    params.l = 100;
    params.schedule = Schedule::synthetic(100, 100);
    SszdOptimizer opt(params, f1->initial_point());
    Rng rng(seed);
    finals.push_back(run_optimizer(opt, *f1, 5000, rng).final_f());
  }
  CHECK(median_of(finals) * 10.0 <= f1->true_value(f1->initial_point()));
}

TEST_CASE("F3 under the PL schedule drops tenfold") {
  Rng inst(27);
  const auto f3 = make_f3(50, inst);
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SszdParams params;
    params.l = 50;
    params.schedule = Schedule::polyak_lojasiewicz(0.02, 0.6, 1e-7);
    SszdOptimizer opt(params, f3->initial_point());
    Rng rng(seed);
    finals.push_back(run_optimizer(opt, *f3, 5000, rng).final_f());
  }
  CHECK(median_of(finals) < 0.1 * f3->true_value(f3->initial_point()));
}

}
