#include "pcpu/metrics.hpp"

#include "pcpu/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace pcpu {

std::string to_string(TestFunction id) { return id == TestFunction::F1 ? "f1" : "f2"; }

TestFunction test_function_from_string(const std::string& name) {
  if (name == "f1" || name == "F1") return TestFunction::F1;
  if (name == "f2" || name == "F2") return TestFunction::F2;
  throw ConfigError("unknown test function '" + name + "' (expected f1 or f2)");
}

double test_function(TestFunction id, double x, double y) {
  switch (id) {
    case TestFunction::F1:
      return (x - 0.5) * (x - 0.5) + (y - 0.4) * (y - 0.4);
    case TestFunction::F2: {
      const double t = 3.0 * (y - 0.4) * std::sin(x - 0.5);
      return t * t * std::cbrt(y + 0.5);
    }
  }
  return 0.0;
}

ErrorReport error_report(std::span<const double> true_values, std::span<const double> approx_values) {
  if (true_values.size() != approx_values.size()) {
    throw DomainError("error_report: length mismatch");
  }
  if (true_values.empty()) {
    throw DomainError("error_report: empty input");
  }
  ErrorReport r;
  r.n_eval = true_values.size();
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.n_eval; ++i) {
    r.mae = std::max(r.mae, std::abs(true_values[i] - approx_values[i]));
    r.min_value = std::min(r.min_value, approx_values[i]);
    if (approx_values[i] < -kNegativeThreshold) ++r.n_negative;
  }
  if (r.mae > 0.0) {
    // Scaled by the max so every term is <= 1 and rounding cannot push rmse above mae.
    double sq = 0.0;
    for (std::size_t i = 0; i < r.n_eval; ++i) {
      const double s = std::abs(true_values[i] - approx_values[i]) / r.mae;
      sq += s * s;
    }
    r.rmse = r.mae * std::sqrt(sq / static_cast<double>(r.n_eval));
  }
  return r;
}

std::vector<Point> random_nodes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  constexpr double scale = 0x1.0p-53;
  auto next = [&] { return static_cast<double>(gen() >> 11) * scale; };
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = next();
    const double y = next();
    out.push_back({x, y});
  }
  return out;
}

std::vector<Point> eval_grid(std::size_t s_side, const Rect& domain) {
  if (s_side < 2) {
    throw ConfigError("evaluation grid needs at least 2 points per side");
  }
  domain.validate();
  std::vector<Point> out;
  out.reserve(s_side * s_side);
  const double n = static_cast<double>(s_side - 1);
  for (std::size_t iy = 0; iy < s_side; ++iy) {
    const double y = iy + 1 == s_side ? domain.y1 : domain.y0 + domain.height() * static_cast<double>(iy) / n;
    for (std::size_t ix = 0; ix < s_side; ++ix) {
      const double x = ix + 1 == s_side ? domain.x1 : domain.x0 + domain.width() * static_cast<double>(ix) / n;
      out.push_back({x, y});
    }
  }
  return out;
}

}  // namespace pcpu
