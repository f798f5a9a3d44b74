#pragma once

#include "pcpu/geometry.hpp"
#include "pcpu/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pcpu {

enum class TestFunction { F1, F2 };

std::string to_string(TestFunction id);
TestFunction test_function_from_string(const std::string& name);

/// F1 = (x - 0.5)^2 + (y - 0.4)^2
/// F2 = [3 (y - 0.4) sin(x - 0.5)]^2 (y + 0.5)^(1/3)
double test_function(TestFunction id, double x, double y);

inline constexpr double kNegativeThreshold = 1e-10;

struct ErrorReport {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n_eval = 0;
  double min_value = 0.0;
  std::size_t n_negative = 0;  // approximant values below -1e-10
};

ErrorReport error_report(std::span<const double> true_values, std::span<const double> approx_values);

/// N points uniform in [0, 1)^2. Coordinates are the top 53 bits of successive
/// std::mt19937_64 outputs (seeded with `seed`) scaled by 2^-53, x before y, which
/// is fully specified by the standard and therefore identical on every platform.
std::vector<Point> random_nodes(std::size_t n, std::uint64_t seed);

/// s_side^2 points on a uniform grid over the closed domain, row-major (y outer).
std::vector<Point> eval_grid(std::size_t s_side, const Rect& domain = {});

}  // namespace pcpu
