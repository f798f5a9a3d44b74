#pragma once

#include "pcpu/geometry.hpp"
#include "pcpu/kernels.hpp"
#include "pcpu/pu.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pcpu {

/// Original (inverse-distance) Shepard approximant. Returns the datum itself at a
/// data site; otherwise a convex combination of the data values.
std::vector<double> shepard_eval(std::span<const Point> points, std::span<const double> values,
                                 std::span<const Point> queries, double power = 2.0);

inline constexpr std::size_t kGlobalFitMaxPoints = 4000;

/// Single-domain positive-constrained fit: one patch covering the whole domain
/// (the d = 1 grid) with the same local machinery as the partitioned method.
PUModel global_constrained_fit(std::span<const Point> points, std::span<const double> values,
                               const KernelSpec& kernel, const Rect& domain = {},
                               std::span<const Point> eval_points = {});

}  // namespace pcpu
