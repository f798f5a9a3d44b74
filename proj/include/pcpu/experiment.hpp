#pragma once

#include "pcpu/geometry.hpp"
#include "pcpu/kernels.hpp"
#include "pcpu/metrics.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pcpu::cli {

struct Dataset {
  std::vector<Point> points;
  std::vector<double> values;
};

/// Reads `x,y,f` rows after a single header line. Throws IngestError with the
/// 1-based file line on malformed or non-finite entries.
Dataset load_csv(const std::filesystem::path& path);

/// Writes `x,y,f` rows with 17 significant digits so a reload reproduces the doubles.
void write_grid_csv(const std::filesystem::path& path, std::span<const Point> points,
                    std::span<const double> values);

void write_report(const std::filesystem::path& path, const nlohmann::json& report);

enum class Method { PU, PCPU, Shepard, Global };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// Failure of one stage of the experiment pipeline ("config", "data", "fit:pcpu", ...).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), message_(message) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }
  nlohmann::json to_json() const { return {{"error", {{"stage", stage_}, {"message", message_}}}}; }

 private:
  std::string stage_;
  std::string message_;
};

struct ExperimentConfig {
  std::vector<Method> methods{Method::PCPU};
  KernelFamily kernel = KernelFamily::WendlandC2;
  double eps = 0.1;
  std::size_t n = 300;
  std::uint64_t seed = 1;
  std::optional<std::size_t> d_override;
  std::optional<TestFunction> function = TestFunction::F1;
  std::optional<std::filesystem::path> data_path;
  std::size_t grid_side = 80;
  std::filesystem::path output_dir = "out";
  Rect domain;

  KernelSpec kernel_spec() const { return {kernel, eps}; }
};

/// Flat key/value document. Keys: method | methods, kernel, eps, N, seed, d_override,
/// function, data, grid_side, output_dir. Unknown keys and bad values throw
/// StageError("config", ...). A missing eps defaults to 0.1 (wendland) or 1 (imq).
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads a config document from disk (JSON object).
nlohmann::json read_config_document(const std::filesystem::path& path);

struct MethodResult {
  Method method = Method::PCPU;
  std::optional<ErrorReport> errors;  // absent when no ground-truth function is known
  double min_value = 0.0;
  std::size_t n_negative = 0;
  std::vector<std::size_t> n_added;  // per patch (empty for Shepard)
  double max_data_residual = 0.0;    // max |I(x_i) - f_i| / (1 + |f_i|) over data sites
  double seconds = 0.0;
  std::vector<double> grid_values;
  std::vector<std::string> warnings;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t n_data = 0;
  std::vector<Point> grid;
  std::vector<MethodResult> methods;
};

/// Obtains the data (CSV or synthetic), runs every requested method and scores it on
/// the evaluation grid. Performs no writes.
ExperimentResult run_methods(const ExperimentConfig& config);

/// Report document: a "results" section that is a pure function of the config and a
/// separate "timing" section.
nlohmann::json make_report(const ExperimentResult& result);

/// run_methods, then writes grid_<method>.csv and report.json into the output directory.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CompareSpec {
  std::vector<Method> methods{Method::PU, Method::PCPU};
  std::vector<std::size_t> sizes{300, 1000};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  TestFunction function = TestFunction::F1;
  KernelFamily kernel = KernelFamily::IMQ;
  double eps = 1.0;
  std::size_t grid_side = 80;
};

struct CompareRow {
  std::size_t n = 0;
  Method method = Method::PCPU;
  double mae = 0.0;   // mean over seeds
  double rmse = 0.0;  // mean over seeds
  double min_value = 0.0;
  std::size_t n_negative = 0;  // summed over seeds
};

/// Error table (mean over seeds) per size and method.
std::vector<CompareRow> run_compare(const CompareSpec& spec);

std::string format_compare_table(const std::vector<CompareRow>& rows);

}  // namespace pcpu::cli
