#include "sszd/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sszd/errors.hpp"
#include "sszd/harness/trace_io.hpp"

namespace sszd::harness {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

bool same_objective(const ObjectiveSpec& a, const ObjectiveSpec& b) {
  return a.name == b.name && a.d == b.d && a.rank == b.rank && a.seed == b.seed &&
         a.spectrum.spikes == b.spectrum.spikes && a.spectrum.tail == b.spectrum.tail;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

std::size_t RunSummary::failed_reps() const {
  return static_cast<std::size_t>(std::count_if(reps.begin(), reps.end(), [](const RepResult& r) { return r.failed(); }));
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return std::nan("");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double stddev(const std::vector<double>& values) {
  if (values.empty()) return std::nan("");
  const double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size()));
}

std::vector<std::uint64_t> curve_grid(std::uint64_t max_eval, std::size_t max_points) {
  std::vector<std::uint64_t> grid;
  if (max_eval == 0 || max_points == 0) return grid;
  if (max_eval <= max_points) {
    for (std::uint64_t e = 1; e <= max_eval; ++e) grid.push_back(e);
    return grid;
  }
  if (max_points == 1) return {max_eval};
  grid.reserve(max_points);
  for (std::size_t i = 0; i < max_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(max_points - 1);
    const auto e = static_cast<std::uint64_t>(std::llround(1.0 + t * static_cast<double>(max_eval - 1)));
    if (grid.empty() || e != grid.back()) grid.push_back(e);
  }
  return grid;
}

double value_at(const std::vector<TraceRow>& rows, std::uint64_t eval, double initial_f) {
  if (rows.empty() || eval < rows.front().eval) return initial_f;
  if (eval >= rows.back().eval) return rows.back().f_true;
  // Rows are numbered 1..n consecutively.
  return rows[eval - rows.front().eval].f_true;
}

void aggregate(RunSummary& s) {
  std::vector<const RepResult*> ok;
  for (const auto& r : s.reps) {
    if (!r.failed()) ok.push_back(&r);
  }
  s.curve.clear();
  s.iterates.clear();
  s.median_final = s.mean_final = s.std_final = s.median_final_dist = std::nan("");
  s.rate.reset();
  if (ok.empty()) return;

  std::vector<double> finals, dists;
  std::uint64_t max_eval = 0;
  for (const auto* r : ok) {
    finals.push_back(r->final_f);
    if (std::isfinite(r->final_dist)) dists.push_back(r->final_dist);
    max_eval = std::max(max_eval, r->trace.evals());
  }
  s.median_final = median(finals);
  s.mean_final = mean(finals);
  s.std_final = stddev(finals);
  if (!dists.empty()) s.median_final_dist = median(dists);

  std::vector<double> column(ok.size());
  for (std::uint64_t e : curve_grid(max_eval)) {
    for (std::size_t i = 0; i < ok.size(); ++i) column[i] = value_at(ok[i]->trace.rows, e, ok[i]->trace.initial_f);
    s.curve.push_back({e, median(column), mean(column), stddev(column)});
  }

  std::size_t steps = ok.front()->trace.iterates.size();
  for (const auto* r : ok) steps = std::min(steps, r->trace.iterates.size());
  std::vector<double> fx(ok.size()), fxbar(ok.size()), dist(ok.size());
  for (std::size_t j = 0; j < steps; ++j) {
    std::uint64_t eval = 0;
    for (std::size_t i = 0; i < ok.size(); ++i) {
      const auto& rec = ok[i]->trace.iterates[j];
      eval = std::max(eval, rec.eval);
      fx[i] = rec.f_x;
      fxbar[i] = rec.f_xbar;
      dist[i] = rec.dist;
    }
    s.iterates.push_back({ok.front()->trace.iterates[j].k, eval, mean(fx), median(fx), mean(fxbar), median(dist)});
  }

  if (s.min_value) {
    try {
      s.rate = fit_rate(s, *s.min_value);
    } catch (const InsufficientData&) {
    }
  }
}

RateFit fit_rate(const RunSummary& summary, double min_f) {
  std::vector<std::uint64_t> k;
  std::vector<double> v;
  const bool use_bar = !summary.iterates.empty() && std::isfinite(summary.iterates.back().mean_f_xbar);
  for (const auto& p : summary.iterates) {
    k.push_back(p.k);
    v.push_back(use_bar ? p.mean_f_xbar : p.mean_f_x);
  }
  return fit_rate(k, v, min_f);
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.reps == 0) throw ConfigError("reps must be at least 1");
  const auto start = Clock::now();
  const auto objective = make_objective(cfg);

  RunSummary summary;
  summary.config = cfg;
  summary.config_hash = cfg.hash();
  summary.objective_name = objective->name();
  summary.min_value = objective->min_value();
  summary.initial_f = objective->true_value(objective->initial_point());
  {
    // Validates the optimizer settings before any thread starts.
    const auto probe = make_optimizer(cfg, *objective);
    summary.optimizer_name = probe->name();
    if (cfg.budget < probe->max_step_cost()) {
      throw ConfigError("budget " + std::to_string(cfg.budget) + " is below one step (" +
                        std::to_string(probe->max_step_cost()) + " evaluations)");
    }
  }

  summary.reps.resize(cfg.reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.reps; i = next++) {
      RepResult& rep = summary.reps[i];
      rep.index = i;
      rep.seed = cfg.base_seed + i;
      const auto t0 = Clock::now();
      try {
        auto opt = make_optimizer(cfg, *objective);
        Rng rng(rep.seed);
        rep.trace = run_optimizer(*opt, *objective, cfg.budget, rng);
        rep.error = rep.trace.error;
        rep.final_f = rep.trace.final_f();
        if (auto xs = objective->minimizer()) rep.final_dist = (rep.trace.final_x - *xs).norm();
      } catch (const std::exception& e) {
        rep.error = e.what();
      }
      rep.wall_seconds = seconds_since(t0);
    }
  };
  std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  aggregate(summary);
  summary.wall_seconds = seconds_since(start);
  if (!cfg.output_dir.empty()) write_outputs(summary, cfg.output_dir);
  return summary;
}

std::string summary_json(const RunSummary& s) {
  using nlohmann::json;
  json j;
  j["config_hash"] = s.config_hash;
  j["config"] = s.config.canonical();
  j["objective"] = s.objective_name;
  j["optimizer"] = s.optimizer_name;
  j["budget"] = s.config.budget;
  j["min_value"] = s.min_value ? json(*s.min_value) : json(nullptr);
  j["initial_f"] = number_or_null(s.initial_f);
  j["wall_seconds"] = s.wall_seconds;
  json reps = json::array();
  for (const auto& r : s.reps) {
    json jr;
    jr["index"] = r.index;
    jr["seed"] = r.seed;
    jr["file"] = "rep" + std::to_string(r.index) + ".csv";
    jr["evals"] = r.trace.evals();
    jr["steps"] = r.trace.steps();
    jr["final_f"] = number_or_null(r.final_f);
    jr["final_dist"] = number_or_null(r.final_dist);
    jr["wall_seconds"] = r.wall_seconds;
    jr["failed"] = r.failed();
    jr["error"] = r.error ? json(*r.error) : json(nullptr);
    reps.push_back(std::move(jr));
  }
  j["reps"] = std::move(reps);
  j["failed_reps"] = s.failed_reps();
  j["final"] = {{"median", number_or_null(s.median_final)},
                {"mean", number_or_null(s.mean_final)},
                {"std", number_or_null(s.std_final)},
                {"median_dist", number_or_null(s.median_final_dist)}};
  json curve = {{"eval", json::array()}, {"median", json::array()}, {"mean", json::array()}, {"std", json::array()}};
  for (const auto& p : s.curve) {
    curve["eval"].push_back(p.eval);
    curve["median"].push_back(number_or_null(p.median));
    curve["mean"].push_back(number_or_null(p.mean));
    curve["std"].push_back(number_or_null(p.std));
  }
  j["curve"] = std::move(curve);
  json it = {{"k", json::array()}, {"eval", json::array()}, {"mean_f_x", json::array()}, {"median_f_x", json::array()},
             {"mean_f_xbar", json::array()}, {"median_dist", json::array()}};
  for (const auto& p : s.iterates) {
    it["k"].push_back(p.k);
    it["eval"].push_back(p.eval);
    it["mean_f_x"].push_back(number_or_null(p.mean_f_x));
    it["median_f_x"].push_back(number_or_null(p.median_f_x));
    it["mean_f_xbar"].push_back(number_or_null(p.mean_f_xbar));
    it["median_dist"].push_back(number_or_null(p.median_dist));
  }
  j["iterates"] = std::move(it);
  if (s.rate) {
    j["rate"] = {{"slope", s.rate->slope},
                 {"intercept", s.rate->intercept},
                 {"window", {s.rate->window.first, s.rate->window.second}},
                 {"r_squared", s.rate->r_squared},
                 {"points", s.rate->points}};
  } else {
    j["rate"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void write_outputs(const RunSummary& s, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::string> problems;
  auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  };
  for (const auto& r : s.reps) {
    attempt([&] { write_trace_csv(dir / ("rep" + std::to_string(r.index) + ".csv"), r.trace.rows); });
    attempt([&] {
      write_iterates_csv(dir / ("rep" + std::to_string(r.index) + "_iterates.csv"), r.trace.iterates);
    });
  }
  attempt([&] { write_text(dir / "summary.json", summary_json(s)); });
  attempt([&] { write_text(dir / "config.ini", to_ini(s.config)); });
  if (!problems.empty()) {
    std::string msg = "output errors:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(msg);
  }
}

std::string Comparison::table_csv() const {
  std::ostringstream out;
  out << "optimizer,median_final,mean_final,std_final,wall_seconds,max_evals,failed_reps\n";
  for (const auto& r : rows) {
    out << r.label << ',' << format_value(r.median_final) << ',' << format_value(r.mean_final) << ','
        << format_value(r.std_final) << ',' << format_value(r.wall_seconds) << ',' << r.max_evals << ','
        << r.failed_reps << '\n';
  }
  return out.str();
}

std::string Comparison::table_text() const {
  std::size_t width = 9;
  for (const auto& r : rows) width = std::max(width, r.label.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "optimizer" << "  " << std::setw(26)
      << "median final f (+- std)" << "  " << std::setw(10) << "wall [s]" << "  evals\n";
  for (const auto& r : rows) {
    std::ostringstream cell;
    cell << std::scientific << std::setprecision(4) << r.median_final << " +- " << std::setprecision(2)
         << r.std_final;
    std::ostringstream wall;
    wall << std::fixed << std::setprecision(3) << r.wall_seconds;
    out << std::left << std::setw(static_cast<int>(width)) << r.label << "  " << std::setw(26) << cell.str()
        << "  " << std::setw(10) << wall.str() << "  " << r.max_evals;
    if (r.failed_reps != 0) out << "  (" << r.failed_reps << " failed)";
    out << '\n';
  }
  return out.str();
}

std::string Comparison::curves_csv() const {
  std::ostringstream out;
  out << "eval";
  for (const auto& r : rows) out << ',' << r.label;
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << grid[i];
    for (const auto& c : median_curves) out << ',' << format_value(c[i]);
    out << '\n';
  }
  return out.str();
}

Comparison compare(const std::vector<ExperimentConfig>& cfgs, const std::string& output_dir) {
  if (cfgs.empty()) throw ConfigError("compare needs at least one config");
  for (const auto& c : cfgs) {
    if (!same_objective(c.objective, cfgs.front().objective)) {
      throw ConfigError("compare: configs use different objective instances");
    }
    if (c.budget != cfgs.front().budget) throw ConfigError("compare: configs use different budgets");
  }
  Comparison cmp;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    ExperimentConfig cfg = cfgs[i];
    cfg.output_dir.clear();
    RunSummary s = run_experiment(cfg);
    if (!output_dir.empty()) {
      write_outputs(s, std::filesystem::path(output_dir) / (std::to_string(i) + "-" + s.optimizer_name));
    }
    std::uint64_t max_evals = 0;
    for (const auto& r : s.reps) max_evals = std::max(max_evals, r.trace.evals());
    cmp.rows.push_back({s.optimizer_name, s.median_final, s.mean_final, s.std_final, s.wall_seconds, max_evals,
                        s.failed_reps()});
    cmp.summaries.push_back(std::move(s));
  }
  cmp.grid = curve_grid(cfgs.front().budget);
  for (const auto& s : cmp.summaries) {
    std::vector<double> curve;
    std::vector<double> column;
    for (std::uint64_t e : cmp.grid) {
      column.clear();
      for (const auto& r : s.reps) {
        if (!r.failed()) column.push_back(value_at(r.trace.rows, e, r.trace.initial_f));
      }
      curve.push_back(median(column));
    }
    cmp.median_curves.push_back(std::move(curve));
  }
  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
    write_text(std::filesystem::path(output_dir) / "comparison.csv", cmp.table_csv());
    write_text(std::filesystem::path(output_dir) / "comparison.txt", cmp.table_text());
    write_text(std::filesystem::path(output_dir) / "curves.csv", cmp.curves_csv());
  }
  return cmp;
}

}  // namespace sszd::harness
