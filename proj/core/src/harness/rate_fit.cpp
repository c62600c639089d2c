#include "sszd/harness/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "sszd/errors.hpp"

namespace sszd::harness {

RateFit fit_rate(const std::vector<std::uint64_t>& k, const std::vector<double>& value, double min_f) {
  if (k.empty()) throw InsufficientData("rate fit needs at least 5 points, got 0");
  const std::uint64_t k_max = *std::max_element(k.begin(), k.end());
  return fit_rate(k, value, min_f, {k_max / 2, k_max});
}

RateFit fit_rate(const std::vector<std::uint64_t>& k, const std::vector<double>& value, double min_f,
                 std::pair<std::uint64_t, std::uint64_t> window) {
  if (k.size() != value.size()) throw InvalidDimension("rate fit: k and value lengths differ");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0 || k[i] < window.first || k[i] > window.second) continue;
    const double gap = value[i] - min_f;
    if (!(gap >= 1e-14) || !std::isfinite(gap)) continue;
    xs.push_back(std::log(static_cast<double>(k[i])));
    ys.push_back(std::log(gap));
  }
  if (xs.size() < 5) {
    throw InsufficientData("rate fit needs at least 5 points, got " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw InsufficientData("rate fit window has a single distinct k");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.window = window;
  fit.points = xs.size();
  return fit;
}

}  // namespace sszd::harness
