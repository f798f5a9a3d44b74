// pcpu: positive-constrained partition-of-unity interpolation experiments.
//
//   pcpu fit --config exp.json [--method pcpu,pu] [--N 1000] ...
//   pcpu eco-surface --a 0.5 --b 0.5 --out surface.csv
//   pcpu compare --function f2 --kernel imq --methods shepard,pcpu --sizes 300,1000

#include "pcpu/eco.hpp"
#include "pcpu/errors.hpp"
#include "pcpu/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace pcpu;

struct FitFlags {
  std::string config;
  std::optional<std::string> methods;
  std::optional<std::string> kernel;
  std::optional<double> eps;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> d_override;
  std::optional<std::string> function;
  std::optional<std::string> data;
  std::optional<std::size_t> grid_side;
  std::optional<std::string> output_dir;
};

int run_fit(const FitFlags& flags) {
  json doc = flags.config.empty() ? json::object() : cli::read_config_document(flags.config);
  if (!doc.is_object()) throw cli::StageError("config", "config document must be a key/value object");
  if (flags.methods) {
    doc.erase("method");
    doc["methods"] = *flags.methods;
  }
  if (flags.kernel) {
    doc["kernel"] = *flags.kernel;
    if (!flags.eps) doc.erase("eps");
  }
  if (flags.eps) doc["eps"] = *flags.eps;
  if (flags.n) doc["N"] = *flags.n;
  if (flags.seed) doc["seed"] = *flags.seed;
  if (flags.d_override) doc["d_override"] = *flags.d_override;
  if (flags.function) doc["function"] = *flags.function;
  if (flags.data) doc["data"] = *flags.data;
  if (flags.grid_side) doc["grid_side"] = *flags.grid_side;
  if (flags.output_dir) doc["output_dir"] = *flags.output_dir;

  const cli::ExperimentConfig cfg = cli::parse_config(doc);
  const cli::ExperimentResult result = cli::run_experiment(cfg);
  for (const auto& mr : result.methods) {
    for (const auto& w : mr.warnings) std::cerr << "warning [" << cli::to_string(mr.method) << "]: " << w << '\n';
    std::cout << cli::to_string(mr.method) << ": min=" << mr.min_value << " n_negative=" << mr.n_negative;
    if (mr.errors) std::cout << " MAE=" << mr.errors->mae << " RMSE=" << mr.errors->rmse;
    std::cout << " (" << mr.seconds << " s)\n";
  }
  std::cout << "wrote " << (cfg.output_dir / "report.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-constrained RBF partition-of-unity interpolation"};
  app.require_subcommand(1);

  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Run an interpolation experiment and write grids plus a report");
  fit->add_option("-c,--config", fit_flags.config, "Config file (JSON key/value object)");
  fit->add_option("--method,--methods", fit_flags.methods, "Comma-separated: pu, pcpu, shepard, global");
  fit->add_option("--kernel", fit_flags.kernel, "wendland or imq");
  fit->add_option("--eps", fit_flags.eps, "Shape parameter");
  fit->add_option("-N,--N", fit_flags.n, "Number of random nodes");
  fit->add_option("--seed", fit_flags.seed, "Node generator seed");
  fit->add_option("-d,--d-override", fit_flags.d_override, "Patch count (perfect square)");
  fit->add_option("--function", fit_flags.function, "Test function f1 or f2");
  fit->add_option("--data", fit_flags.data, "CSV data file with header x,y,f");
  fit->add_option("--grid-side", fit_flags.grid_side, "Evaluation grid points per side");
  fit->add_option("-o,--out,--output-dir", fit_flags.output_dir, "Output directory");

  double eco_a = 0.0;
  double eco_b = 0.0;
  eco::Interval alpha_range{10.0, 30.0};
  eco::Interval mu_range{0.01, 0.05};
  std::size_t n_side = 20;
  double t_end = 20000.0;
  double dt = 1.0;
  std::string eco_out = "eco_surface.csv";
  auto* eco_cmd = app.add_subcommand("eco-surface", "Herbivore equilibrium surface over (alpha, mu) as x,y,f CSV");
  eco_cmd->add_option("--a", eco_a, "Daily grass feeding rate (required)")->required();
  eco_cmd->add_option("--b", eco_b, "Daily tree feeding rate (required)")->required();
  eco_cmd->add_option("--alpha-min", alpha_range.lo, "Lower alpha bound");
  eco_cmd->add_option("--alpha-max", alpha_range.hi, "Upper alpha bound");
  eco_cmd->add_option("--mu-min", mu_range.lo, "Lower mu bound");
  eco_cmd->add_option("--mu-max", mu_range.hi, "Upper mu bound");
  eco_cmd->add_option("--n-side", n_side, "Grid points per parameter axis");
  eco_cmd->add_option("--t-end", t_end, "Integration horizon in days");
  eco_cmd->add_option("--dt", dt, "RK4 step in days");
  eco_cmd->add_option("-o,--out", eco_out, "Output CSV path");

  cli::CompareSpec cmp;
  std::string cmp_methods = "pu,pcpu";
  std::string cmp_function = "f1";
  std::string cmp_kernel = "imq";
  std::optional<double> cmp_eps;
  std::string cmp_csv;
  auto* compare = app.add_subcommand("compare", "Error table over node counts and seeds");
  compare->add_option("--methods", cmp_methods, "Comma-separated methods");
  compare->add_option("--sizes", cmp.sizes, "Node counts")->delimiter(',');
  compare->add_option("--seeds", cmp.seeds, "Seeds averaged per row")->delimiter(',');
  compare->add_option("--function", cmp_function, "f1 or f2");
  compare->add_option("--kernel", cmp_kernel, "wendland or imq");
  compare->add_option("--eps", cmp_eps, "Shape parameter (default 0.1 wendland, 1 imq)");
  compare->add_option("--grid-side", cmp.grid_side, "Evaluation grid points per side");
  compare->add_option("--csv", cmp_csv, "Also write the table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) return run_fit(fit_flags);

    if (*eco_cmd) {
      const auto params = eco::EcoParams::dolomiti(eco_a, eco_b);
      const auto surface = eco::equilibrium_surface(params, alpha_range, mu_range, n_side, t_end, dt);
      for (const auto& w : surface.warnings) std::cerr << "warning: " << w << '\n';
      cli::write_grid_csv(eco_out, surface.points, surface.values);
      std::cout << "wrote " << surface.points.size() << " rows to " << eco_out << '\n';
      return 0;
    }

    if (*compare) {
      cmp.methods.clear();
      for (const auto& name : CLI::detail::split(cmp_methods, ',')) {
        cmp.methods.push_back(cli::method_from_string(name));
      }
      cmp.function = test_function_from_string(cmp_function);
      cmp.kernel = kernel_family_from_string(cmp_kernel);
      cmp.eps = cmp_eps.value_or(cmp.kernel == KernelFamily::WendlandC2 ? 0.1 : 1.0);
      const auto rows = cli::run_compare(cmp);
      std::cout << cli::format_compare_table(rows);
      if (!cmp_csv.empty()) {
        std::ofstream out(cmp_csv);
        out << "N,method,mae,rmse,min_value,n_negative\n";
        for (const auto& r : rows) {
          out << r.n << ',' << cli::to_string(r.method) << ',' << r.mae << ',' << r.rmse << ','
              << r.min_value << ',' << r.n_negative << '\n';
        }
      }
      return 0;
    }
  } catch (const cli::StageError& e) {
    std::cerr << e.to_json().dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"stage", app.get_subcommands().front()->get_name()}, {"message", e.what()}}}}.dump()
              << '\n';
    return 2;
  }
  return 1;
}
