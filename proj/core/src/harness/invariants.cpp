#include "sszd/harness/invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sszd/errors.hpp"
#include "sszd/oracle.hpp"
#include "sszd/testbed.hpp"

namespace sszd::harness {
namespace {

const DirectionKind kKinds[] = {DirectionKind::Coordinate, DirectionKind::Spherical};

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

template <typename Fn>
InvariantResult timed(std::string suite, std::string name, Fn&& fn) {
  InvariantResult r{std::move(suite), std::move(name), false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void structure(InvariantResult& r, const InvariantHooks& hooks) {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = rng.uniform_index(1, 64);
    const std::size_t l = rng.uniform_index(1, d);
    for (auto kind : kKinds) {
      const DirectionMatrix p = hooks.generator(kind, d, l, rng);
      if (p.dim() != d || p.count() != l) {
        r.detail = "generator returned wrong shape";
        return;
      }
      const Matrix g = p.entries().transpose() * p.entries();
      const double err = (g - p.scale2() * Matrix::Identity(l, l)).cwiseAbs().maxCoeff();
      worst = std::max(worst, err);
    }
  }
  r.passed = worst <= 1e-9;
  r.detail = "max |P^T P - (d/l) I| = " + fmt(worst) + " (tol 1e-9)";
}

void expectation(InvariantResult& r, const InvariantHooks& hooks) {
  Rng rng(202);
  const std::size_t d = 10, l = 3, draws = 20000;
  double worst = 0.0;
  for (auto kind : kKinds) {
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < draws; ++i) {
      const DirectionMatrix p = hooks.generator(kind, d, l, rng);
      sum.noalias() += p.entries() * p.entries().transpose();
    }
    sum /= static_cast<double>(draws);
    worst = std::max(worst, (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  r.passed = worst <= 0.05;
  r.detail = "max |mean(P P^T) - I| = " + fmt(worst) + " (tol 0.05)";
}

void error_bound(InvariantResult& r, const InvariantHooks& hooks) {
  Rng rng(303);
  const double hs[] = {1e-1, 1e-3, 1e-5};
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = rng.uniform_index(2, 30);
    const std::size_t l = rng.uniform_index(1, d);
    Rng inst = rng.split(trial);
    const auto f1 = make_f1(d, inst);
    const double lambda = *f1->smoothness();
    Vector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = rng.normal();
    const NoiseSample z = f1->sample_noise(rng);
    const DirectionMatrix p = hooks.generator(kKinds[trial % 2], d, l, rng);
    const double h = hs[trial % 3];
    EvalCounter counter;
    const auto sg = finite_differences(*f1, x, z, p, h, counter);
    const Vector exact = p.entries().transpose() * *f1->analytic_grad(x, z);
    const double err = (sg.fd_coeffs - exact).norm();
    const double bound = lambda * static_cast<double>(d) * h / (2.0 * std::sqrt(static_cast<double>(l))) + 1e-9;
    worst_ratio = std::max(worst_ratio, err / bound);
    if (err > bound) ++violations;
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " violations in 1000 trials; worst error/bound = " + fmt(worst_ratio);
}

void quadratic_closed_form(InvariantResult& r, const InvariantHooks& hooks) {
  // F(x, i) = (a_i^T x)^2 = 1/2 x^T (2 a_i a_i^T) x.
  Rng rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = rng.uniform_index(2, 20);
    const std::size_t l = rng.uniform_index(1, d);
    Rng inst = rng.split(trial);
    const auto f1 = make_f1(d, inst);
    Vector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = rng.normal();
    const NoiseSample z = f1->sample_noise(rng);
    const Vector a = f1->matrix().row(static_cast<Eigen::Index>(z.indices.front())).transpose();
    const Matrix az = 2.0 * a * a.transpose();
    const DirectionMatrix p = hooks.generator(kKinds[trial % 2], d, l, rng);
    const double h = 1e-3;
    EvalCounter counter;
    const auto sg = finite_differences(*f1, x, z, p, h, counter);
    for (std::size_t i = 0; i < l; ++i) {
      const Vector pi = p.column(i);
      const double slope = (az * x).dot(pi);
      const double curvature = 0.5 * h * pi.dot(az * pi);
      const double rel = std::abs(sg.fd_coeffs[i] - (slope + curvature)) /
                         std::max(std::abs(slope) + std::abs(curvature), 1e-300);
      worst = std::max(worst, rel);
    }
  }
  r.passed = worst <= 1e-8;
  r.detail = "worst relative deviation " + fmt(worst) + " (tol 1e-8)";
}

void eval_accounting(InvariantResult& r, const InvariantHooks& hooks) {
  Rng rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = rng.uniform_index(1, 20);
    const std::size_t l = rng.uniform_index(1, d);
    Rng inst = rng.split(trial);
    const auto f1 = make_f1(d, inst);
    const DirectionMatrix p = hooks.generator(kKinds[trial % 2], d, l, rng);
    EvalCounter counter;
    finite_differences(*f1, f1->initial_point(), f1->sample_noise(rng), p, 1e-4, counter);
    if (counter.count() != l + 1) {
      r.detail = "l=" + std::to_string(l) + " used " + std::to_string(counter.count()) + " evaluations";
      return;
    }
  }
  r.passed = true;
  r.detail = "l+1 evaluations per surrogate in 50 trials";
}

std::vector<std::unique_ptr<StochasticObjective>> testbed_instances() {
  std::vector<std::unique_ptr<StochasticObjective>> out;
  for (const auto& name : registered_objectives()) {
    ObjectiveSpec spec;
    spec.name = name;
    spec.seed = 11;
    if (name == "F1" || name == "F2" || name == "F3") spec.d = 20;
    out.push_back(make_objective(spec));
  }
  return out;
}

Vector probe_point(const StochasticObjective& obj, Rng& rng) {
  Vector x = obj.initial_point();
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += 0.5 * rng.normal();
  return x;
}

void unbiasedness(InvariantResult& r) {
  Rng rng(606);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& obj : testbed_instances()) {
    for (int p = 0; p < 5; ++p) {
      const Vector x = probe_point(*obj, rng);
      double sum = 0.0;
      for (int s = 0; s < 100000; ++s) sum += obj->eval(x, obj->sample_noise(rng));
      const double truth = obj->true_value(x);
      const double rel = std::abs(sum / 1e5 - truth) / std::max(std::abs(truth), 1e-12);
      if (rel > worst) {
        worst = rel;
        worst_name = obj->name();
      }
    }
  }
  r.passed = worst <= 0.01;
  r.detail = "worst relative gap " + fmt(worst) + " on " + worst_name + " (tol 0.01)";
}

void gradients(InvariantResult& r) {
  Rng rng(707);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& obj : testbed_instances()) {
    const Vector x = probe_point(*obj, rng);
    const NoiseSample z = obj->sample_noise(rng);
    const auto g = obj->analytic_grad(x, z);
    if (!g) continue;
    const double h = 1e-6;
    Vector fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (obj->eval(xp, z) - obj->eval(xm, z)) / (2 * h);
    }
    const double rel = (fd - *g).norm() / std::max(g->norm(), 1e-8);
    if (rel > worst) {
      worst = rel;
      worst_name = obj->name();
    }
  }
  r.passed = worst <= 1e-4;
  r.detail = "worst relative gradient mismatch " + fmt(worst) + (worst_name.empty() ? "" : " on " + worst_name);
}

}  // namespace

bool InvariantReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.passed; });
}

std::string InvariantReport::json() const {
  nlohmann::json j;
  j["passed"] = passed();
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    j["results"].push_back(
        {{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
  }
  return j.dump(2) + "\n";
}

const std::vector<std::string>& invariant_suites() {
  static const std::vector<std::string> suites{"directions", "oracle", "testbed", "all"};
  return suites;
}

InvariantReport check_invariants(std::string_view suite, const InvariantHooks& hooks) {
  if (std::find(invariant_suites().begin(), invariant_suites().end(), suite) == invariant_suites().end()) {
    throw ConfigError("unknown invariant suite '" + std::string(suite) + "'");
  }
  const bool all = suite == "all";
  InvariantReport report;
  auto& out = report.results;
  if (all || suite == "directions") {
    out.push_back(timed("directions", "structure", [&](auto& r) { structure(r, hooks); }));
    out.push_back(timed("directions", "expectation", [&](auto& r) { expectation(r, hooks); }));
  }
  if (all || suite == "oracle") {
    out.push_back(timed("oracle", "error-bound", [&](auto& r) { error_bound(r, hooks); }));
    out.push_back(timed("oracle", "quadratic-closed-form", [&](auto& r) { quadratic_closed_form(r, hooks); }));
    out.push_back(timed("oracle", "eval-accounting", [&](auto& r) { eval_accounting(r, hooks); }));
  }
  if (all || suite == "testbed") {
    out.push_back(timed("testbed", "unbiasedness", [](auto& r) { unbiasedness(r); }));
    out.push_back(timed("testbed", "gradients", [](auto& r) { gradients(r); }));
  }
  return report;
}

}  // namespace sszd::harness
