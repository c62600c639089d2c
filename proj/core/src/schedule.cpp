#include "sszd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sszd/errors.hpp"

namespace sszd {

double Schedule::alpha(std::uint64_t k) const {
  if (k == 0) throw InvalidDimension("step-size schedule is indexed from k = 1");
  const double a = alpha0 * std::pow(static_cast<double>(k), -c);
  return alpha_cap ? std::min(a, *alpha_cap) : a;
}

double Schedule::h(std::uint64_t k) const {
  if (k == 0) throw InvalidDimension("discretization schedule is indexed from k = 1");
  return h0 * std::pow(static_cast<double>(k), -r);
}

Schedule Schedule::convex(double alpha0, double c, double h0, double r) {
  if (!(c > 0.5 && c < 1.0)) throw ConfigError("convex schedule needs 1/2 < c < 1");
  if (!(r > 0.5)) throw ConfigError("convex schedule needs r > 1/2");
  if (!(alpha0 > 0.0 && h0 > 0.0)) throw ConfigError("alpha0 and h0 must be positive");
  return Schedule{alpha0, c, h0, r, std::nullopt};
}

Schedule Schedule::polyak_lojasiewicz(double alpha0, double c, double h0) {
  if (!(c > 0.5 && c <= 1.0)) throw ConfigError("PL schedule needs 1/2 < c <= 1");
  if (!(alpha0 > 0.0 && h0 > 0.0)) throw ConfigError("alpha0 and h0 must be positive");
  return Schedule{alpha0, c, h0, c / 2.0, std::nullopt};
}

Schedule Schedule::synthetic(std::size_t d, std::size_t l, double scale, double h0) {
  const double ratio = static_cast<double>(l) / static_cast<double>(d);
  return Schedule{scale * ratio, 0.5 + 1e-10, h0, 0.5, std::nullopt};
}

std::vector<std::string> validate_schedule(const Schedule& schedule, std::size_t d, std::size_t l,
                                           double lambda) {
  std::vector<std::string> warnings;
  if (!(schedule.alpha0 > 0.0)) warnings.emplace_back("alpha0 must be positive");
  if (!(schedule.h0 > 0.0)) warnings.emplace_back("h0 must be positive");
  if (d > 0 && lambda > 0.0) {
    const double cap = static_cast<double>(l) / (static_cast<double>(d) * lambda);
    const double first = schedule.alpha_cap ? std::min(schedule.alpha0, *schedule.alpha_cap)
                                            : schedule.alpha0;
    if (first >= cap) {
      std::ostringstream msg;
      msg << "alpha(1)=" << first << " is not below l/(d*lambda)=" << cap;
      warnings.push_back(msg.str());
    }
  }
  if (!(schedule.c > 0.5 && schedule.c <= 1.0)) {
    warnings.emplace_back("c outside (1/2,1]: alpha_k is not square-summable or not divergent");
  }
  if (schedule.r < 0.5) warnings.emplace_back("r below 1/2");
  if (!(schedule.c + schedule.r > 1.0)) {
    warnings.emplace_back("alpha_k*h_k is not summable (c + r <= 1)");
  }
  return warnings;
}

}  // namespace sszd
