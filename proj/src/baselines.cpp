#include "pcpu/baselines.hpp"

#include "pcpu/errors.hpp"

#include <cmath>
#include <string>

namespace pcpu {

std::vector<double> shepard_eval(std::span<const Point> points, std::span<const double> values,
                                 std::span<const Point> queries, double power) {
  if (points.empty() || points.size() != values.size()) {
    throw DomainError("shepard_eval: need a nonempty data set with one value per point");
  }
  if (!(power > 0.0)) {
    throw DomainError("shepard_eval: power must be positive");
  }
  std::vector<double> out;
  out.reserve(queries.size());
  for (const Point& q : queries) {
    double num = 0.0;
    double den = 0.0;
    bool hit = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double r = distance(q, points[i]);
      if (r == 0.0) {
        out.push_back(values[i]);
        hit = true;
        break;
      }
      const double w = std::pow(r, -power);
      num += w * values[i];
      den += w;
    }
    if (!hit) out.push_back(num / den);
  }
  return out;
}

PUModel global_constrained_fit(std::span<const Point> points, std::span<const double> values,
                               const KernelSpec& kernel, const Rect& domain,
                               std::span<const Point> eval_points) {
  if (points.size() > kGlobalFitMaxPoints) {
    throw ConfigError("global fit supports at most " + std::to_string(kGlobalFitMaxPoints) +
                      " points, got " + std::to_string(points.size()));
  }
  PUConfig config;
  config.kernel = kernel;
  config.mode = FitMode::PCPU;
  config.domain = domain;
  config.d_override = 1;
  return fit(points, values, config, eval_points);
}

}  // namespace pcpu
