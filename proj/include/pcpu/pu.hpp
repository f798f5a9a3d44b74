#pragma once

#include "pcpu/geometry.hpp"
#include "pcpu/kernels.hpp"
#include "pcpu/local_solver.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pcpu {

enum class FitMode { PlainPU, PCPU };

std::string to_string(FitMode mode);

struct PUConfig {
  KernelSpec kernel = KernelSpec::imq(1.0);
  FitMode mode = FitMode::PCPU;
  Rect domain;
  std::optional<std::size_t> d_override;

  void validate() const;
};

struct PUModel {
  PatchGrid grid;
  std::vector<LocalModel> locals;  // one per patch; empty patches hold the zero model
  PUConfig config;
  std::vector<std::string> warnings;

  // Constraint count per patch.
  std::vector<std::size_t> n_added() const;
};

/// Shepard-normalised Wendland C2 bumps of support `delta` around each centre.
/// Returns (patch, weight) pairs with positive weight, ascending by patch.
/// Throws CoverageError when no patch contains the point.
std::vector<std::pair<std::size_t, double>> pu_weights(const Point& point, const PatchGrid& grid);

/// Fits a (positive-constrained) partition-of-unity interpolant.
///
/// `eval_points` are bucketed into patches and added to each patch's nonnegativity
/// check set, so a PCPU fit is checked at every point it will later be evaluated on.
/// Throws PatchInfeasible naming the patch when a local constrained solve fails.
PUModel fit(std::span<const Point> points, std::span<const double> values, const PUConfig& config,
            std::span<const Point> eval_points = {});

/// Same as fit() on an explicit patch grid.
PUModel fit_on_grid(std::span<const Point> points, std::span<const double> values,
                    const PatchGrid& grid, const PUConfig& config,
                    std::span<const Point> eval_points = {});

/// Blends the local fits; accumulation runs in ascending patch order.
std::vector<double> evaluate(const PUModel& model, std::span<const Point> points);

}  // namespace pcpu
