#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include "sszd/directions.hpp"
#include "sszd/optimizer.hpp"
#include "sszd/schedule.hpp"
#include "sszd/testbed.hpp"

namespace sszd::harness {

struct OptimizerConfig {
  /// "sszd" or a baseline name (see parse_baseline_kind).
  std::string name = "sszd";
  DirectionKind directions = DirectionKind::Spherical;
  /// Directions for S-SZD, sketch width for ProbDS-RD.
  std::size_t l = 1;
  /// ProbDS pool size; 0 selects 2d.
  std::size_t pool_size = 0;
  /// Directions per step of the finite-difference baselines; 0 selects the
  /// kind's default (1, or d for fd-gaussian-multi).
  std::size_t m = 0;
  double initial_step = 1.0;
  double step_max = 5.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double forcing_c1 = 1e-5;
  double forcing_c2 = 1e-5;
  double h_floor = 1e-12;
};

struct ScheduleConfig {
  double alpha0 = 1e-2;
  double c = 0.5 + 1e-10;
  double h0 = 1e-8;
  double r = 0.5;
  /// <= 0 means no cap.
  double alpha_cap = 0.0;
  /// Multiply alpha0 by (directions per step)/d, as in alpha_k = (l/d) a k^-c.
  bool relative = true;
};

struct ExperimentConfig {
  /// d == 0 selects the objective's default dimension.
  ObjectiveSpec objective;
  OptimizerConfig optimizer;
  ScheduleConfig schedule;
  std::uint64_t budget = 5000;
  std::size_t reps = 10;
  std::uint64_t base_seed = 0;
  std::string output_dir;
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;

  /// Sorted `section.key=value` lines. Identical configs serialize
  /// identically; output_dir and threads are excluded.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

  /// Sets one key ("section.key" or a bare CLI-style alias such as "l").
  /// Throws ConfigError for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
};

ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);
/// INI text that load_config reads back to an equal config.
std::string to_ini(const ExperimentConfig& cfg);

/// Directions consumed per step by the configured optimizer in dimension d.
std::size_t directions_per_step(const ExperimentConfig& cfg, std::size_t d);
/// Resolved schedule (relative scaling applied) for dimension d.
Schedule resolve_schedule(const ExperimentConfig& cfg, std::size_t d);

std::unique_ptr<StochasticObjective> make_objective(const ExperimentConfig& cfg);
std::unique_ptr<Optimizer> make_optimizer(const ExperimentConfig& cfg, const StochasticObjective& obj);

}  // namespace sszd::harness
