#include "sszd/objective.hpp"

#include <cmath>
#include <sstream>

#include "sszd/errors.hpp"

namespace sszd {

std::optional<Vector> StochasticObjective::analytic_grad(const Vector&, const NoiseSample&) const {
  return std::nullopt;
}
std::optional<Vector> StochasticObjective::true_grad(const Vector&) const { return std::nullopt; }
std::optional<double> StochasticObjective::min_value() const { return std::nullopt; }
std::optional<Vector> StochasticObjective::minimizer() const { return std::nullopt; }
std::optional<double> StochasticObjective::smoothness() const { return std::nullopt; }

double counted_eval(const StochasticObjective& obj, const Vector& x, const NoiseSample& z,
                    EvalCounter& counter, std::size_t direction) {
  counter.tick();
  const double value = obj.eval(x, z);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << obj.name() << ": non-finite value " << value << " at eval " << counter.count();
    if (direction == OracleFailure::kBasePoint) {
      msg << " (base point";
    } else {
      msg << " (direction " << direction;
    }
    msg << ", z = {";
    for (std::size_t i = 0; i < z.indices.size() && i < 8; ++i) msg << (i ? "," : "") << z.indices[i];
    if (z.indices.size() > 8) msg << ",...";
    msg << "}, |x| = " << x.norm() << ")";
    throw OracleFailure(msg.str(), direction);
  }
  return value;
}

}  // namespace sszd
