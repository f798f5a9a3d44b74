#include "pcpu/pu.hpp"

#include "pcpu/errors.hpp"

#include <cmath>
#include <string>

namespace pcpu {

std::string to_string(FitMode mode) { return mode == FitMode::PCPU ? "pcpu" : "pu"; }

void PUConfig::validate() const {
  kernel.validate();
  domain.validate();
  if (d_override) {
    const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(*d_override))));
    if (*d_override == 0 || m * m != *d_override) {
      throw ConfigError("d_override must be a positive perfect square");
    }
  }
}

std::vector<std::size_t> PUModel::n_added() const {
  std::vector<std::size_t> out;
  out.reserve(locals.size());
  for (const auto& l : locals) out.push_back(l.n_added());
  return out;
}

std::vector<std::pair<std::size_t, double>> pu_weights(const Point& point, const PatchGrid& grid) {
  const KernelSpec bump = KernelSpec::wendland(1.0 / grid.delta);
  std::vector<std::pair<std::size_t, double>> out;
  double total = 0.0;
  for (std::size_t j : grid.covering(point)) {
    const double w = eval_rbf(bump, distance(point, grid.centers[j]));
    if (w > 0.0) {
      out.emplace_back(j, w);
      total += w;
    }
  }
  if (!(total > 0.0)) {
    throw CoverageError("point (" + std::to_string(point.x) + ", " + std::to_string(point.y) +
                        ") is not covered by any patch");
  }
  for (auto& [j, w] : out) w /= total;
  return out;
}

PUModel fit_on_grid(std::span<const Point> points, std::span<const double> values,
                    const PatchGrid& grid, const PUConfig& config,
                    std::span<const Point> eval_points) {
  config.validate();
  if (points.size() != values.size()) {
    throw DomainError("fit: point/value count mismatch");
  }
  PUModel model;
  model.grid = grid;
  model.config = config;

  bool any_negative = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw IngestError("data value " + std::to_string(i + 1) + " is not finite", i + 1);
    }
    any_negative = any_negative || values[i] < 0.0;
  }
  if (config.mode == FitMode::PCPU && any_negative) {
    model.warnings.push_back("negative data values: positivity of the fit is not guaranteed");
  }

  const PatchAssignment data_in = assign_to_patches(points, grid);
  const PatchAssignment eval_in = assign_to_patches(eval_points, grid);

  model.locals.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto& members = data_in.members[j];
    if (members.empty()) {
      if (!eval_in.members[j].empty()) {
        model.warnings.push_back("patch " + std::to_string(j) +
                                 " has evaluation points but no data; using the zero local fit");
      }
      model.locals.push_back(LocalModel::zero(config.kernel));
      continue;
    }
    LocalProblem problem;
    problem.kernel = config.kernel;
    problem.center = grid.centers[j];
    problem.radius = grid.delta;
    problem.patch_index = j;
    for (std::size_t i : members) {
      problem.points.push_back(points[i]);
      problem.values.push_back(values[i]);
    }

    const double tol = interpolation_tolerance(problem.values);
    double residual = 0.0;
    if (config.mode == FitMode::PlainPU) {
      LocalModel local;
      local.base_centers = problem.points;
      local.base_kernel = problem.kernel;
      const UnconstrainedSolution sol = solve_unconstrained(problem);
      local.coeffs = sol.coeffs;
      local.quad_coeffs = sol.quad_coeffs;
      residual = sol.residual;
      model.locals.push_back(std::move(local));
    } else {
      std::vector<Point> extra;
      extra.reserve(eval_in.members[j].size());
      for (std::size_t i : eval_in.members[j]) extra.push_back(eval_points[i]);
      const auto checks = patch_check_points(problem.center, problem.radius, grid.domain, extra);
      LocalFit local = fit_local_positive(problem, checks);
      residual = local.residual;
      model.locals.push_back(std::move(local.model));
    }
    if (!(residual <= tol)) {
      model.warnings.push_back("patch " + std::to_string(j) + ": interpolation residual " +
                               std::to_string(residual) + " exceeds " + std::to_string(tol) +
                               " (ill-conditioned local matrix)");
    }
  }
  return model;
}

PUModel fit(std::span<const Point> points, std::span<const double> values, const PUConfig& config,
            std::span<const Point> eval_points) {
  config.validate();
  const PatchGrid grid = config.d_override ? build_patches_with_count(*config.d_override, config.domain)
                                           : build_patches(points.size(), config.domain);
  return fit_on_grid(points, values, grid, config, eval_points);
}

std::vector<double> evaluate(const PUModel& model, std::span<const Point> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    Real acc = 0;
    for (const auto& [j, w] : pu_weights(p, model.grid)) acc += w * model.locals[j].value_ext(p);
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

}  // namespace pcpu
