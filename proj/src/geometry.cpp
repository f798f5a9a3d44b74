#include "pcpu/geometry.hpp"

#include "pcpu/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pcpu {

void Rect::validate() const {
  if (!(x1 > x0) || !(y1 > y0) || !std::isfinite(x0) || !std::isfinite(x1) ||
      !std::isfinite(y0) || !std::isfinite(y1)) {
    throw ConfigError("domain must be a nondegenerate finite rectangle");
  }
}

namespace {

// Inclusive index range [lo, hi] of grid-cell midpoints (spacing h, origin o, count m)
// that can lie within `reach` of coordinate v. Widened by one cell; callers test exactly.
std::pair<std::size_t, std::size_t> candidate_range(double v, double o, double h, double reach,
                                                    std::size_t m) {
  const double lo = std::floor((v - reach - o) / h - 0.5) - 1.0;
  const double hi = std::ceil((v + reach - o) / h - 0.5) + 1.0;
  const double last = static_cast<double>(m - 1);
  return {static_cast<std::size_t>(std::clamp(lo, 0.0, last)),
          static_cast<std::size_t>(std::clamp(hi, 0.0, last))};
}

}  // namespace

std::vector<std::size_t> PatchGrid::covering(const Point& p) const {
  std::vector<std::size_t> out;
  if (m == 0) return out;
  const double hx = domain.width() / static_cast<double>(m);
  const double hy = domain.height() / static_cast<double>(m);
  const auto [ix0, ix1] = candidate_range(p.x, domain.x0, hx, delta, m);
  const auto [iy0, iy1] = candidate_range(p.y, domain.y0, hy, delta, m);
  for (std::size_t iy = iy0; iy <= iy1; ++iy) {
    for (std::size_t ix = ix0; ix <= ix1; ++ix) {
      const std::size_t j = iy * m + ix;
      if (distance(p, centers[j]) <= delta) out.push_back(j);
    }
  }
  return out;
}

PatchGrid build_patches_with_count(std::size_t d, const Rect& domain) {
  domain.validate();
  const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
  if (d == 0 || m * m != d) {
    throw ConfigError("patch count must be a positive perfect square, got " + std::to_string(d));
  }
  PatchGrid grid;
  grid.domain = domain;
  grid.m = m;
  grid.delta = std::max(domain.width(), domain.height()) / static_cast<double>(m);
  grid.centers.reserve(d);
  const double hx = domain.width() / static_cast<double>(m);
  const double hy = domain.height() / static_cast<double>(m);
  for (std::size_t iy = 0; iy < m; ++iy) {
    for (std::size_t ix = 0; ix < m; ++ix) {
      grid.centers.push_back({domain.x0 + (static_cast<double>(ix) + 0.5) * hx,
                              domain.y0 + (static_cast<double>(iy) + 0.5) * hy});
    }
  }
  return grid;
}

PatchGrid build_patches(std::size_t n_data, const Rect& domain) {
  if (n_data < 4) {
    throw ConfigError("at least 4 data points are needed to build a patch grid, got " +
                      std::to_string(n_data));
  }
  const auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_data)) / 2.0));
  return build_patches_with_count(m * m, domain);
}

PatchAssignment assign_to_patches(std::span<const Point> points, const PatchGrid& grid) {
  const Rect& dom = grid.domain;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!dom.contains(points[i])) {
      throw IngestError("point " + std::to_string(i + 1) + " (" + std::to_string(points[i].x) +
                            ", " + std::to_string(points[i].y) + ") lies outside the domain",
                        i + 1);
    }
  }

  const double side = grid.delta;
  const auto ncx = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dom.width() / side)));
  const auto ncy = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dom.height() / side)));
  auto cell_of = [&](double v, double o, std::size_t n) {
    const double c = std::floor((v - o) / side);
    return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(n - 1)));
  };

  std::vector<std::vector<std::size_t>> cells(ncx * ncy);
  for (std::size_t i = 0; i < points.size(); ++i) {
    cells[cell_of(points[i].y, dom.y0, ncy) * ncx + cell_of(points[i].x, dom.x0, ncx)].push_back(i);
  }

  PatchAssignment out;
  out.members.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Point& c = grid.centers[j];
    const std::size_t cx = cell_of(c.x, dom.x0, ncx);
    const std::size_t cy = cell_of(c.y, dom.y0, ncy);
    auto& list = out.members[j];
    for (std::size_t y = (cy == 0 ? 0 : cy - 1); y <= std::min(cy + 1, ncy - 1); ++y) {
      for (std::size_t x = (cx == 0 ? 0 : cx - 1); x <= std::min(cx + 1, ncx - 1); ++x) {
        for (std::size_t i : cells[y * ncx + x]) {
          if (distance(points[i], c) <= grid.delta) list.push_back(i);
        }
      }
    }
    std::sort(list.begin(), list.end());
  }
  return out;
}

std::vector<Point> sunflower_points(const Point& center, double delta, std::size_t n_add) {
  std::vector<Point> out;
  out.reserve(n_add);
  const double denom = std::sqrt(static_cast<double>(n_add) - 0.5);
  const double golden = 1.0 + std::sqrt(5.0);
  for (std::size_t m = 1; m <= n_add; ++m) {
    const double md = static_cast<double>(m);
    const double u = delta * std::sqrt(md - 0.5) / denom;
    const double eta = 4.0 * md * std::numbers::pi / golden;
    out.push_back({center.x + u * std::cos(eta), center.y + u * std::sin(eta)});
  }
  return out;
}

double support_radius(const Point& constraint_point, std::span<const Point> local_data,
                      double delta_scale) {
  if (local_data.empty()) {
    throw DomainError("support_radius: local data must be nonempty");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  double d1 = inf;
  double d2 = inf;
  for (const Point& p : local_data) {
    const double r = distance(constraint_point, p);
    if (r < d1) {
      d2 = d1;
      d1 = r;
    } else if (r < d2) {
      d2 = r;
    }
  }
  if (d1 <= 1e-14 * delta_scale) {
    return std::min(1e-6 * delta_scale, d2 / 2.0);
  }
  if (d2 == inf) return 2.0 * d1;
  if (d2 - d1 > 1e-9) return 0.5 * (d1 + d2);
  return d1 + 1e-9;
}

}  // namespace pcpu
