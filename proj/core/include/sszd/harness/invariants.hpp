#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sszd/directions.hpp"

namespace sszd::harness {

struct InvariantResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct InvariantReport {
  std::vector<InvariantResult> results;

  bool passed() const;
  std::string json() const;
};

using DirectionGenerator = std::function<DirectionMatrix(DirectionKind, std::size_t, std::size_t, Rng&)>;

/// Injection points for negative controls.
struct InvariantHooks {
  DirectionGenerator generator = make_directions;
};

/// suite is one of directions, oracle, testbed, all. Seeds are fixed.
/// Unknown suite names throw ConfigError.
InvariantReport check_invariants(std::string_view suite, const InvariantHooks& hooks = {});

const std::vector<std::string>& invariant_suites();

}  // namespace sszd::harness
