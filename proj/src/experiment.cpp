#include "pcpu/experiment.hpp"

#include "pcpu/baselines.hpp"
#include "pcpu/errors.hpp"
#include "pcpu/pu.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pcpu::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw IngestError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) +
                          "' as a number",
                      line);
  }
  if (!std::isfinite(v)) {
    throw IngestError("line " + std::to_string(line) + ": non-finite value", line);
  }
  return v;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError("cannot open '" + path.string() + "'", 0);
  }
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw IngestError("'" + path.string() + "' is empty (expected header x,y,f)", 1);
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
      throw IngestError("line " + std::to_string(line_no) + ": expected 3 comma-separated fields",
                        line_no);
    }
    const double x = parse_field(row.substr(0, c1), line_no);
    const double y = parse_field(row.substr(c1 + 1, c2 - c1 - 1), line_no);
    const double f = parse_field(row.substr(c2 + 1), line_no);
    data.points.push_back({x, y});
    data.values.push_back(f);
  }
  return data;
}

void write_grid_csv(const std::filesystem::path& path, std::span<const Point> points,
                    std::span<const double> values) {
  if (points.size() != values.size()) {
    throw DomainError("write_grid_csv: point/value count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write '" + path.string() + "'", 0);
  out << "x,y,f\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << fmt17(points[i].x) << ',' << fmt17(points[i].y) << ',' << fmt17(values[i]) << '\n';
  }
}

void write_report(const std::filesystem::path& path, const nlohmann::json& report) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write '" + path.string() + "'", 0);
  out << report.dump(2) << '\n';
}

std::string to_string(Method method) {
  switch (method) {
    case Method::PU:
      return "pu";
    case Method::PCPU:
      return "pcpu";
    case Method::Shepard:
      return "shepard";
    case Method::Global:
      return "global";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "pu") return Method::PU;
  if (name == "pcpu") return Method::PCPU;
  if (name == "shepard") return Method::Shepard;
  if (name == "global") return Method::Global;
  throw ConfigError("unknown method '" + name + "' (expected pu, pcpu, shepard or global)");
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  static const char* const known[] = {"method", "methods",  "kernel",    "eps",       "N",
                                      "seed",   "d_override", "function", "data", "grid_side",
                                      "output_dir"};
  if (!doc.is_object()) throw StageError("config", "config document must be a key/value object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw StageError("config", "unknown key '" + key + "'");
    }
  }

  ExperimentConfig cfg;
  try {
    if (doc.contains("method") && doc.contains("methods")) {
      throw ConfigError("give either 'method' or 'methods', not both");
    }
    if (doc.contains("method")) {
      cfg.methods = {method_from_string(doc.at("method").get<std::string>())};
    } else if (doc.contains("methods")) {
      cfg.methods.clear();
      const auto& m = doc.at("methods");
      if (m.is_string()) {
        std::stringstream ss(m.get<std::string>());
        for (std::string item; std::getline(ss, item, ',');) {
          cfg.methods.push_back(method_from_string(std::string(trim(item))));
        }
      } else {
        for (const auto& item : m) cfg.methods.push_back(method_from_string(item.get<std::string>()));
      }
      if (cfg.methods.empty()) throw ConfigError("'methods' is empty");
    }
    if (doc.contains("kernel")) cfg.kernel = kernel_family_from_string(doc.at("kernel").get<std::string>());
    cfg.eps = doc.contains("eps") ? doc.at("eps").get<double>()
                                  : (cfg.kernel == KernelFamily::WendlandC2 ? 0.1 : 1.0);
    cfg.kernel_spec().validate();
    if (doc.contains("N")) cfg.n = doc.at("N").get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("d_override") && !doc.at("d_override").is_null()) {
      cfg.d_override = doc.at("d_override").get<std::size_t>();
    }
    if (doc.contains("data") && !doc.at("data").is_null()) {
      cfg.data_path = doc.at("data").get<std::string>();
      cfg.function.reset();
    }
    if (doc.contains("function") && !doc.at("function").is_null()) {
      cfg.function = test_function_from_string(doc.at("function").get<std::string>());
    }
    if (doc.contains("grid_side")) cfg.grid_side = doc.at("grid_side").get<std::size_t>();
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();

    if (!cfg.data_path && cfg.n < 4) throw ConfigError("N must be at least 4");
    if (cfg.grid_side < 2) throw ConfigError("grid_side must be at least 2");
    PUConfig probe;
    probe.kernel = cfg.kernel_spec();
    probe.d_override = cfg.d_override;
    probe.validate();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  return cfg;
}

nlohmann::json read_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StageError("config", "cannot open config file '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw StageError("config", std::string("malformed config: ") + e.what());
  }
}

ExperimentResult run_methods(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.config = cfg;

  Dataset data;
  try {
    if (cfg.data_path) {
      data = load_csv(*cfg.data_path);
    } else {
      data.points = random_nodes(cfg.n, cfg.seed);
      for (const Point& p : data.points) data.values.push_back(test_function(*cfg.function, p.x, p.y));
    }
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      if (!cfg.domain.contains(data.points[i])) {
        throw IngestError("data row " + std::to_string(i + 1) + " lies outside the domain", i + 1);
      }
    }
    if (data.points.size() < 4) throw ConfigError("need at least 4 data points");
  } catch (const std::exception& e) {
    throw StageError("data", e.what());
  }
  result.n_data = data.points.size();
  result.grid = eval_grid(cfg.grid_side, cfg.domain);

  std::vector<double> truth;
  if (cfg.function) {
    for (const Point& p : result.grid) truth.push_back(test_function(*cfg.function, p.x, p.y));
  }

  for (Method method : cfg.methods) {
    MethodResult mr;
    mr.method = method;
    const auto start = std::chrono::steady_clock::now();
    try {
      std::vector<double> at_data;
      if (method == Method::Shepard) {
        mr.grid_values = shepard_eval(data.points, data.values, result.grid);
        at_data = shepard_eval(data.points, data.values, data.points);
      } else {
        PUModel model;
        if (method == Method::Global) {
          model = global_constrained_fit(data.points, data.values, cfg.kernel_spec(), cfg.domain, result.grid);
        } else {
          PUConfig pu;
          pu.kernel = cfg.kernel_spec();
          pu.mode = method == Method::PCPU ? FitMode::PCPU : FitMode::PlainPU;
          pu.domain = cfg.domain;
          pu.d_override = cfg.d_override;
          model = fit(data.points, data.values, pu, result.grid);
        }
        mr.grid_values = evaluate(model, result.grid);
        at_data = evaluate(model, data.points);
        mr.n_added = model.n_added();
        mr.warnings = model.warnings;
      }
      for (std::size_t i = 0; i < at_data.size(); ++i) {
        mr.max_data_residual = std::max(mr.max_data_residual,
                                        std::abs(at_data[i] - data.values[i]) / (1.0 + std::abs(data.values[i])));
      }
    } catch (const std::exception& e) {
      throw StageError("fit:" + to_string(method), e.what());
    }
    mr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto& g = mr.grid_values;
    mr.min_value = *std::min_element(g.begin(), g.end());
    mr.n_negative = static_cast<std::size_t>(
        std::count_if(g.begin(), g.end(), [](double v) { return v < -kNegativeThreshold; }));
    if (!truth.empty()) mr.errors = error_report(truth, g);
    result.methods.push_back(std::move(mr));
  }
  return result;
}

nlohmann::json make_report(const ExperimentResult& result) {
  using nlohmann::json;
  const auto& cfg = result.config;
  json config = {{"kernel", to_string(cfg.kernel)},
                 {"eps", cfg.eps},
                 {"N", result.n_data},
                 {"grid_side", cfg.grid_side},
                 {"d_override", cfg.d_override ? json(*cfg.d_override) : json(nullptr)}};
  if (cfg.data_path) {
    config["data"] = cfg.data_path->string();
  } else {
    config["seed"] = cfg.seed;
  }
  config["function"] = cfg.function ? json(to_string(*cfg.function)) : json(nullptr);

  json methods = json::object();
  json timing = json::object();
  for (const auto& mr : result.methods) {
    json m = {{"min_value", mr.min_value},
              {"n_negative", mr.n_negative},
              {"n_eval", mr.grid_values.size()},
              {"max_data_residual", mr.max_data_residual},
              {"n_added", mr.n_added},
              {"warnings", mr.warnings}};
    if (mr.errors) {
      m["mae"] = mr.errors->mae;
      m["rmse"] = mr.errors->rmse;
    } else {
      m["mae"] = nullptr;
      m["rmse"] = nullptr;
    }
    std::size_t constrained = 0;
    for (std::size_t k : mr.n_added) constrained += k > 0 ? 1 : 0;
    m["constrained_patches"] = constrained;
    methods[to_string(mr.method)] = std::move(m);
    timing[to_string(mr.method)] = {{"seconds", mr.seconds}};
  }
  return {{"results", {{"config", config}, {"methods", methods}}}, {"timing", timing}};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = run_methods(config);
  try {
    std::filesystem::create_directories(config.output_dir);
    for (const auto& mr : result.methods) {
      write_grid_csv(config.output_dir / ("grid_" + to_string(mr.method) + ".csv"), result.grid,
                     mr.grid_values);
    }
    write_report(config.output_dir / "report.json", make_report(result));
  } catch (const std::exception& e) {
    throw StageError("write", e.what());
  }
  return result;
}

std::vector<CompareRow> run_compare(const CompareSpec& spec) {
  std::vector<CompareRow> rows;
  for (std::size_t n : spec.sizes) {
    std::vector<CompareRow> acc(spec.methods.size());
    for (std::size_t k = 0; k < spec.methods.size(); ++k) {
      acc[k].n = n;
      acc[k].method = spec.methods[k];
      acc[k].min_value = std::numeric_limits<double>::infinity();
    }
    for (std::uint64_t seed : spec.seeds) {
      ExperimentConfig cfg;
      cfg.methods = spec.methods;
      cfg.kernel = spec.kernel;
      cfg.eps = spec.eps;
      cfg.n = n;
      cfg.seed = seed;
      cfg.function = spec.function;
      cfg.grid_side = spec.grid_side;
      const ExperimentResult res = run_methods(cfg);
      for (std::size_t k = 0; k < res.methods.size(); ++k) {
        const auto& mr = res.methods[k];
        acc[k].mae += mr.errors->mae;
        acc[k].rmse += mr.errors->rmse;
        acc[k].min_value = std::min(acc[k].min_value, mr.min_value);
        acc[k].n_negative += mr.n_negative;
      }
    }
    for (auto& row : acc) {
      row.mae /= static_cast<double>(spec.seeds.size());
      row.rmse /= static_cast<double>(spec.seeds.size());
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%8s  %-8s  %12s  %12s  %12s  %10s\n", "N", "method", "MAE", "RMSE",
                "min", "n_negative");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%8zu  %-8s  %12.3e  %12.3e  %12.3e  %10zu\n", r.n,
                  to_string(r.method).c_str(), r.mae, r.rmse, r.min_value, r.n_negative);
    out << buf;
  }
  return out.str();
}

}  // namespace pcpu::cli
