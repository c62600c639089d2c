#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sszd/errors.hpp"
#include "sszd/harness/config.hpp"
#include "sszd/harness/experiment.hpp"
#include "sszd/harness/invariants.hpp"
#include "sszd/harness/rate_fit.hpp"
#include "sszd/schedule.hpp"

namespace {

using namespace sszd;
using namespace sszd::harness;

enum ExitCode { kOk = 0, kConfig = 1, kRuntime = 2, kInvariant = 3 };

struct CommonFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "INI config file")->check(CLI::ExistingFile);
  const std::pair<const char*, const char*> keys[] = {
      {"seed", "base seed; repetition i uses seed+i"},
      {"budget", "function evaluations per repetition"},
      {"reps", "repetitions"},
      {"objective", "F1, F2, F3, logistic, linreg or ridge-tune"},
      {"d", "objective dimension"},
      {"optimizer", "sszd or a baseline name"},
      {"directions", "coordinate or spherical"},
      {"l", "directions per step"},
      {"m", "directions per step for finite-difference baselines"},
      {"alpha0", "step size constant"},
      {"c", "step size exponent"},
      {"h0", "discretization constant"},
      {"r", "discretization exponent"},
      {"out", "output directory"},
      {"threads", "worker threads (0 = all cores)"},
  };
  for (const auto& [key, help] : keys) {
    cmd->add_option_function<std::string>(
        std::string("--") + key, [&flags, k = std::string(key)](const std::string& v) { flags.values[k] = v; },
        help);
  }
  cmd->add_option("--set", flags.sets, "override any key, as section.key=value");
}

ExperimentConfig build_config(const CommonFlags& flags) {
  ExperimentConfig cfg = flags.config_path.empty() ? ExperimentConfig{} : load_config_file(flags.config_path);
  for (const auto& [k, v] : flags.values) cfg.set(k, v);
  for (const auto& s : flags.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return cfg;
}

void warn_schedule(const ExperimentConfig& cfg) {
  try {
    const auto obj = make_objective(cfg);
    const std::size_t d = obj->dim();
    const Schedule s = resolve_schedule(cfg, d);
    for (const auto& w : validate_schedule(s, d, directions_per_step(cfg, d), obj->smoothness().value_or(0.0))) {
      std::cerr << "warning: " << w << '\n';
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error&) {
  }
}

void print_summary(const RunSummary& s) {
  std::cout << s.optimizer_name << " on " << s.objective_name << "  config " << s.config_hash << '\n'
            << "  reps " << s.reps.size() << " (" << s.failed_reps() << " failed), budget " << s.config.budget
            << ", wall " << s.wall_seconds << " s\n"
            << "  initial f " << s.initial_f << ", final f median " << s.median_final << " mean " << s.mean_final
            << " std " << s.std_final << '\n';
  if (std::isfinite(s.median_final_dist)) std::cout << "  final |x - x*| median " << s.median_final_dist << '\n';
  if (s.rate) {
    std::cout << "  rate slope " << s.rate->slope << " over k in [" << s.rate->window.first << ", "
              << s.rate->window.second << "], r^2 " << s.rate->r_squared << '\n';
  }
  for (const auto& r : s.reps) {
    if (r.failed()) std::cout << "  rep " << r.index << " failed: " << *r.error << '\n';
  }
}

int cmd_run(const CommonFlags& flags) {
  const ExperimentConfig cfg = build_config(flags);
  warn_schedule(cfg);
  const RunSummary s = run_experiment(cfg);
  print_summary(s);
  if (!cfg.output_dir.empty()) std::cout << "  wrote " << cfg.output_dir << '\n';
  return s.failed_reps() == 0 ? kOk : kRuntime;
}

int cmd_sweep(const CommonFlags& flags, const std::string& vary, const std::vector<std::string>& values) {
  const ExperimentConfig base = build_config(flags);
  std::vector<ExperimentConfig> cells;
  for (const auto& v : values) {
    ExperimentConfig cfg = base;
    cfg.set(vary, v);
    cfg.output_dir.clear();
    cells.push_back(std::move(cfg));
  }
  std::size_t failed = 0;
  std::ostringstream table;
  table << vary << ",optimizer,median_final,mean_final,std_final,wall_seconds,failed_reps\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const RunSummary s = run_experiment(cells[i]);
    if (!base.output_dir.empty()) write_outputs(s, std::filesystem::path(base.output_dir) / (vary + "-" + values[i]));
    failed += s.failed_reps();
    table << values[i] << ',' << s.optimizer_name << ',' << s.median_final << ',' << s.mean_final << ','
          << s.std_final << ',' << s.wall_seconds << ',' << s.failed_reps() << '\n';
  }
  std::cout << table.str();
  if (!base.output_dir.empty()) {
    std::ofstream(std::filesystem::path(base.output_dir) / "sweep.csv", std::ios::binary) << table.str();
  }
  return failed == 0 ? kOk : kRuntime;
}

int cmd_compare(const CommonFlags& flags, const std::vector<std::string>& config_files,
                const std::vector<std::string>& optimizers) {
  const ExperimentConfig base = build_config(flags);
  std::vector<ExperimentConfig> cfgs;
  for (const auto& path : config_files) {
    ExperimentConfig cfg = load_config_file(path);
    for (const auto& [k, v] : flags.values) cfg.set(k, v);
    cfgs.push_back(std::move(cfg));
  }
  for (const auto& name : optimizers) {
    ExperimentConfig cfg = base;
    cfg.set("optimizer.name", name);
    cfgs.push_back(std::move(cfg));
  }
  if (cfgs.empty()) cfgs.push_back(base);
  const Comparison cmp = compare(cfgs, base.output_dir);
  std::cout << cmp.table_text();
  std::size_t failed = 0;
  for (const auto& r : cmp.rows) failed += r.failed_reps;
  return failed == 0 ? kOk : kRuntime;
}

int cmd_fit_rate(const std::string& summary_path, std::optional<double> min_f, const std::string& series) {
  std::ifstream in(summary_path);
  if (!in) throw ConfigError("cannot open summary '" + summary_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad summary JSON: ") + e.what());
  }
  if (!min_f) {
    if (j.at("min_value").is_null()) throw ConfigError("summary has no min_value; pass --min-f");
    min_f = j.at("min_value").get<double>();
  }
  const auto& it = j.at("iterates");
  std::string key = series;
  if (key == "auto") {
    const auto& bar = it.at("mean_f_xbar");
    key = (!bar.empty() && !bar.back().is_null()) ? "mean_f_xbar" : "mean_f_x";
  }
  std::vector<std::uint64_t> k;
  std::vector<double> v;
  for (std::size_t i = 0; i < it.at("k").size(); ++i) {
    const auto& val = it.at(key).at(i);
    if (val.is_null()) continue;
    k.push_back(it.at("k").at(i).get<std::uint64_t>());
    v.push_back(val.get<double>());
  }
  const RateFit fit = fit_rate(k, v, *min_f);
  nlohmann::json out{{"series", key},
                     {"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"window", {fit.window.first, fit.window.second}},
                     {"r_squared", fit.r_squared},
                     {"points", fit.points}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_check(const std::string& suite, const std::string& out_path) {
  const InvariantReport report = check_invariants(suite);
  const std::string text = report.json();
  std::cout << text;
  if (!out_path.empty()) std::ofstream(out_path, std::ios::binary) << text;
  return report.passed() ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured stochastic zeroth-order descent experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, compare_flags;
  auto* run = app.add_subcommand("run", "run one configuration");
  add_common(run, run_flags);

  auto* sweep = app.add_subcommand("sweep", "run one configuration per value of a key");
  add_common(sweep, sweep_flags);
  std::string vary = "l";
  std::vector<std::string> values;
  sweep->add_option("--vary", vary, "key to vary (l, optimizer, or any section.key)");
  sweep->add_option("--values", values, "values for the varied key")->required()->delimiter(',');

  auto* cmp = app.add_subcommand("compare", "budget-matched comparison of optimizers");
  add_common(cmp, compare_flags);
  std::vector<std::string> config_files, optimizers;
  cmp->add_option("--configs", config_files, "config files to compare")->check(CLI::ExistingFile);
  cmp->add_option("--optimizers", optimizers, "optimizer names applied to the base config")->delimiter(',');

  auto* fit = app.add_subcommand("fit-rate", "log-log rate fit of a run summary");
  std::string summary_path, series = "auto";
  std::optional<double> min_f;
  fit->add_option("--summary", summary_path, "summary.json written by run")->required();
  fit->add_option("--min-f", min_f, "minimum value (defaults to the summary's)");
  fit->add_option("--series", series, "auto, mean_f_x or mean_f_xbar");

  auto* check = app.add_subcommand("check", "run invariant suites");
  std::string suite = "all", check_out;
  check->add_option("--suite", suite, "directions, oracle, testbed or all");
  check->add_option("--out", check_out, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags, vary, values);
    if (*cmp) return cmd_compare(compare_flags, config_files, optimizers);
    if (*fit) return cmd_fit_rate(summary_path, min_f, series);
    if (*check) return cmd_check(suite, check_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidDimension& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
