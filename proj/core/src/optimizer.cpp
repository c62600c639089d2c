#include "sszd/optimizer.hpp"

#include <cmath>
#include <string>

#include "sszd/errors.hpp"

namespace sszd {
namespace {

IterateRecord snapshot(const Optimizer& opt, const StochasticObjective& obj, std::uint64_t eval,
                       double f_x, const std::optional<Vector>& x_star) {
  IterateRecord rec;
  rec.k = opt.iteration();
  rec.eval = eval;
  rec.f_x = f_x;
  if (auto avg = opt.averaged()) rec.f_xbar = obj.true_value(*avg);
  if (x_star) rec.dist = (opt.x() - *x_star).norm();
  return rec;
}

}  // namespace

RunTrace run_optimizer(Optimizer& opt, const StochasticObjective& obj, std::uint64_t budget,
                       Rng& rng) {
  const std::uint64_t cost = opt.max_step_cost();
  if (budget < cost) {
    throw ConfigError(opt.name() + ": budget " + std::to_string(budget) +
                      " is smaller than one step (" + std::to_string(cost) + " evaluations)");
  }
  const auto x_star = obj.minimizer();

  RunTrace trace;
  trace.rows.reserve(budget);
  EvalCounter counter;
  double f_current = obj.true_value(opt.x());
  trace.initial_f = f_current;
  trace.iterates.push_back(snapshot(opt, obj, 0, f_current, x_star));

  while (counter.count() + cost <= budget) {
    const std::uint64_t before = counter.count();
    const std::uint64_t k_before = opt.iteration();
    try {
      opt.step(obj, rng, counter);
    } catch (const OracleFailure& e) {
      trace.error = e.what();
    } catch (const DiscretizationUnderflow& e) {
      trace.error = e.what();
    }
    if (trace.error) {
      for (std::uint64_t e = before + 1; e <= counter.count(); ++e) {
        trace.rows.push_back({e, k_before, f_current});
      }
      break;
    }
    const std::uint64_t used = counter.count() - before;
    if (used == 0 || used > cost) {
      throw Error(opt.name() + ": step used " + std::to_string(used) +
                  " evaluations, outside (0, " + std::to_string(cost) + "]");
    }
    const double f_next = obj.true_value(opt.x());
    for (std::uint64_t e = before + 1; e < counter.count(); ++e) {
      trace.rows.push_back({e, k_before, f_current});
    }
    trace.rows.push_back({counter.count(), opt.iteration(), f_next});
    f_current = f_next;
    trace.iterates.push_back(snapshot(opt, obj, counter.count(), f_current, x_star));
  }

  trace.final_x = opt.x();
  trace.final_x_bar = opt.averaged().value_or(opt.x());
  return trace;
}

}  // namespace sszd
