#pragma once

#include "pcpu/kernels.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pcpu {

/// Closed axis-aligned rectangle.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  Point midpoint() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(const Point& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }

  void validate() const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Covering of a rectangle by d = m*m closed disks of common radius `delta`,
/// centred at the midpoints of an m x m grid of cells. Patch j = iy * m + ix.
struct PatchGrid {
  Rect domain;
  std::size_t m = 0;
  double delta = 0.0;
  std::vector<Point> centers;

  std::size_t size() const { return centers.size(); }

  // Indices (ascending) of all patches whose closed disk contains p.
  std::vector<std::size_t> covering(const Point& p) const;
};

/// Patch grid sized for `n_data` nodes: m = floor(sqrt(N) / 2), d = m^2, giving N/d close to 4.
PatchGrid build_patches(std::size_t n_data, const Rect& domain = {});

/// Patch grid with an explicit patch count; `d` must be a positive perfect square.
PatchGrid build_patches_with_count(std::size_t d, const Rect& domain = {});

struct PatchAssignment {
  // members[j] lists (ascending) indices of the points inside patch j.
  std::vector<std::vector<std::size_t>> members;
};

/// Buckets points into patches using a cell hash of side `delta`, then an exact
/// closed-disk test. Throws IngestError (1-based row) for points outside the domain.
PatchAssignment assign_to_patches(std::span<const Point> points, const PatchGrid& grid);

/// Vogel spiral of `n_add` points filling the closed disk of radius `delta`.
/// Point m (1-based) sits at radius delta * sqrt(m - 1/2) / sqrt(n_add - 1/2)
/// and angle 4 m pi / (1 + sqrt 5).
std::vector<Point> sunflower_points(const Point& center, double delta, std::size_t n_add);

/// Support radius for a constraint basis at `constraint_point` such that only its
/// nearest datum lies strictly inside the support (generic case).
///
/// With d1 <= d2 the two smallest distances: (d1 + d2) / 2, or d1 + 1e-9 on a tie,
/// or 2 d1 with a single datum. If the constraint point coincides with a datum the
/// radius is min(1e-6 * delta_scale, d2 / 2).
double support_radius(const Point& constraint_point, std::span<const Point> local_data,
                      double delta_scale);

}  // namespace pcpu
