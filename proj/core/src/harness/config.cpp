#include "sszd/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sszd/baselines.hpp"
#include "sszd/errors.hpp"
#include "sszd/sszd.hpp"

namespace sszd::harness {
namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if constexpr (std::is_floating_point_v<T>) {
    std::string s(first, last);
    char* end = nullptr;
    value = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw ConfigError("bad number for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
  } else {
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError("bad integer for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("bad boolean for '" + std::string(key) + "': '" + std::string(text) + "'");
}

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view, std::string_view)> set;
};

template <typename T>
Field number_field(T ExperimentConfig::*outer) {
  return {[outer](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*outer);
            else return std::to_string(c.*outer);
          },
          [outer](ExperimentConfig& c, std::string_view k, std::string_view v) {
            c.*outer = parse_number<T>(k, v);
          }};
}

template <typename S, typename T>
Field nested_number(S ExperimentConfig::*section, T S::*member) {
  return {[=](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*section.*member);
            else return std::to_string(c.*section.*member);
          },
          [=](ExperimentConfig& c, std::string_view k, std::string_view v) {
            c.*section.*member = parse_number<T>(k, v);
          }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = [] {
    std::map<std::string, Field, std::less<>> t;
    using E = ExperimentConfig;
    t["objective.name"] = {[](const E& c) { return c.objective.name; },
                           [](E& c, std::string_view, std::string_view v) { c.objective.name = std::string(v); }};
    t["objective.d"] = nested_number(&E::objective, &ObjectiveSpec::d);
    t["objective.rank"] = nested_number(&E::objective, &ObjectiveSpec::rank);
    t["objective.seed"] = nested_number(&E::objective, &ObjectiveSpec::seed);
    t["objective.spikes"] = {
        [](const E& c) { return std::to_string(c.objective.spectrum.spikes); },
        [](E& c, std::string_view k, std::string_view v) {
          c.objective.spectrum.spikes = parse_number<std::size_t>(k, v);
        }};
    t["objective.tail"] = {
        [](const E& c) { return format_double(c.objective.spectrum.tail); },
        [](E& c, std::string_view k, std::string_view v) {
          c.objective.spectrum.tail = parse_number<double>(k, v);
        }};

    t["optimizer.name"] = {[](const E& c) { return c.optimizer.name; },
                           [](E& c, std::string_view, std::string_view v) {
                             if (v != "sszd") parse_baseline_kind(v);
                             c.optimizer.name = std::string(v);
                           }};
    t["optimizer.directions"] = {
        [](const E& c) { return std::string(to_string(c.optimizer.directions)); },
        [](E& c, std::string_view, std::string_view v) { c.optimizer.directions = parse_direction_kind(v); }};
    t["optimizer.l"] = nested_number(&E::optimizer, &OptimizerConfig::l);
    t["optimizer.pool_size"] = nested_number(&E::optimizer, &OptimizerConfig::pool_size);
    t["optimizer.m"] = nested_number(&E::optimizer, &OptimizerConfig::m);
    t["optimizer.initial_step"] = nested_number(&E::optimizer, &OptimizerConfig::initial_step);
    t["optimizer.step_max"] = nested_number(&E::optimizer, &OptimizerConfig::step_max);
    t["optimizer.expansion"] = nested_number(&E::optimizer, &OptimizerConfig::expansion);
    t["optimizer.contraction"] = nested_number(&E::optimizer, &OptimizerConfig::contraction);
    t["optimizer.forcing_c1"] = nested_number(&E::optimizer, &OptimizerConfig::forcing_c1);
    t["optimizer.forcing_c2"] = nested_number(&E::optimizer, &OptimizerConfig::forcing_c2);
    t["optimizer.h_floor"] = nested_number(&E::optimizer, &OptimizerConfig::h_floor);

    t["schedule.alpha0"] = nested_number(&E::schedule, &ScheduleConfig::alpha0);
    t["schedule.c"] = nested_number(&E::schedule, &ScheduleConfig::c);
    t["schedule.h0"] = nested_number(&E::schedule, &ScheduleConfig::h0);
    t["schedule.r"] = nested_number(&E::schedule, &ScheduleConfig::r);
    t["schedule.alpha_cap"] = nested_number(&E::schedule, &ScheduleConfig::alpha_cap);
    t["schedule.relative"] = {
        [](const E& c) { return std::string(c.schedule.relative ? "true" : "false"); },
        [](E& c, std::string_view k, std::string_view v) { c.schedule.relative = parse_bool(k, v); }};

    t["experiment.budget"] = number_field(&E::budget);
    t["experiment.reps"] = number_field(&E::reps);
    t["experiment.seed"] = number_field(&E::base_seed);
    return t;
  }();
  return table;
}

// Keys that are run plumbing rather than experiment identity.
const std::map<std::string, Field, std::less<>>& plumbing_fields() {
  static const std::map<std::string, Field, std::less<>> table = [] {
    std::map<std::string, Field, std::less<>> t;
    using E = ExperimentConfig;
    t["experiment.out"] = {[](const E& c) { return c.output_dir; },
                           [](E& c, std::string_view, std::string_view v) { c.output_dir = std::string(v); }};
    t["experiment.threads"] = number_field(&E::threads);
    return t;
  }();
  return table;
}

const std::map<std::string, std::string, std::less<>>& aliases() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"seed", "experiment.seed"},       {"budget", "experiment.budget"},
      {"reps", "experiment.reps"},       {"out", "experiment.out"},
      {"threads", "experiment.threads"}, {"objective", "objective.name"},
      {"d", "objective.d"},              {"optimizer", "optimizer.name"},
      {"directions", "optimizer.directions"}, {"l", "optimizer.l"},
      {"m", "optimizer.m"},              {"alpha0", "schedule.alpha0"},
      {"c", "schedule.c"},               {"h0", "schedule.h0"},
      {"r", "schedule.r"},
  };
  return table;
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  std::string_view full = key;
  if (auto a = aliases().find(key); a != aliases().end()) full = a->second;
  if (auto f = fields().find(full); f != fields().end()) {
    f->second.set(*this, full, value);
    return;
  }
  if (auto f = plumbing_fields().find(full); f != plumbing_fields().end()) {
    f->second.set(*this, full, value);
    return;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [key, field] : fields()) {
    out += key;
    out += '=';
    out += field.get(*this);
    out += '\n';
  }
  return out;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig load_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [section, children] : tree) {
    if (children.empty()) throw ConfigError("config key '" + section + "' must be inside a section");
    for (const auto& [key, node] : children) {
      std::string value = node.get_value<std::string>();
      // Inline comments: " ; ..." or " # ...".
      for (const char* marker : {" ;", "\t;", " #", "\t#"}) {
        if (auto pos = value.find(marker); pos != std::string::npos) value.erase(pos);
      }
      while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
      if (!value.empty() && (value.front() == ';' || value.front() == '#')) value.clear();
      cfg.set(section + "." + key, value);
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return load_config(in);
}

std::string to_ini(const ExperimentConfig& cfg) {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
  auto add = [&](const std::string& key, const Field& field) {
    const auto dot = key.find('.');
    sections[key.substr(0, dot)].emplace_back(key.substr(dot + 1), field.get(cfg));
  };
  for (const auto& [key, field] : fields()) add(key, field);
  for (const auto& [key, field] : plumbing_fields()) add(key, field);
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, entries] : sections) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  }
  return out.str();
}

std::size_t directions_per_step(const ExperimentConfig& cfg, std::size_t d) {
  if (cfg.optimizer.name == "sszd") return cfg.optimizer.l;
  const BaselineKind kind = parse_baseline_kind(cfg.optimizer.name);
  if (is_finite_difference(kind)) {
    return cfg.optimizer.m != 0 ? cfg.optimizer.m : default_fd_directions(kind, d);
  }
  return cfg.optimizer.l;
}

Schedule resolve_schedule(const ExperimentConfig& cfg, std::size_t d) {
  Schedule s;
  s.alpha0 = cfg.schedule.alpha0;
  if (cfg.schedule.relative) {
    s.alpha0 *= static_cast<double>(directions_per_step(cfg, d)) / static_cast<double>(d);
  }
  s.c = cfg.schedule.c;
  s.h0 = cfg.schedule.h0;
  s.r = cfg.schedule.r;
  if (cfg.schedule.alpha_cap > 0.0) s.alpha_cap = cfg.schedule.alpha_cap;
  if (!(s.alpha0 > 0.0) || !(s.h0 > 0.0)) throw ConfigError("alpha0 and h0 must be positive");
  return s;
}

std::unique_ptr<StochasticObjective> make_objective(const ExperimentConfig& cfg) {
  return sszd::make_objective(cfg.objective);
}

std::unique_ptr<Optimizer> make_optimizer(const ExperimentConfig& cfg, const StochasticObjective& obj) {
  const std::size_t d = obj.dim();
  const auto& o = cfg.optimizer;
  Vector x0 = obj.initial_point();
  if (o.name == "sszd") {
    SszdParams params;
    params.kind = o.directions;
    params.l = o.l;
    params.schedule = resolve_schedule(cfg, d);
    params.oracle.h_floor = o.h_floor;
    return std::make_unique<SszdOptimizer>(params, std::move(x0));
  }
  const BaselineKind kind = parse_baseline_kind(o.name);
  if (kind == BaselineKind::Stp) return std::make_unique<StpOptimizer>(o.initial_step, std::move(x0));
  if (is_finite_difference(kind)) {
    OracleOptions options;
    options.h_floor = o.h_floor;
    return std::make_unique<FdOptimizer>(kind, directions_per_step(cfg, d), resolve_schedule(cfg, d),
                                         std::move(x0), options);
  }
  DirectSearchParams params;
  params.forcing = ForcingFunction{o.forcing_c1, o.forcing_c2};
  params.expansion = o.expansion;
  params.contraction = o.contraction;
  params.step_max = o.step_max;
  std::size_t width = o.l;
  if (kind == BaselineKind::ProbDsIndependent || kind == BaselineKind::ProbDsOrthogonal) {
    width = o.pool_size != 0 ? o.pool_size : 2 * d;
  }
  return std::make_unique<ProbDsOptimizer>(kind, width, params, o.initial_step, std::move(x0));
}

}  // namespace sszd::harness
