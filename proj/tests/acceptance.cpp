// Acceptance checks 1-13. Prints one PASS/FAIL line per check; exits nonzero if any fails.

#include "oracles.hpp"

#include "pcpu/baselines.hpp"
#include "pcpu/eco.hpp"
#include "pcpu/experiment.hpp"
#include "pcpu/local_solver.hpp"
#include "pcpu/metrics.hpp"
#include "pcpu/pu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pcpu;
using namespace pcpu::cli;

namespace {

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};
const std::vector<std::size_t> kSizes{300, 1000};

int failures = 0;

void report(int k, const std::string& name, bool ok, const std::string& details) {
  std::cout << "[" << k << "] " << name << ": " << (ok ? "PASS" : "FAIL") << " (" << details << ")"
            << std::endl;
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Case {
  TestFunction fn;
  KernelFamily kernel;
  std::size_t n;
  std::uint64_t seed;
  std::map<Method, MethodResult> by_method;

  std::string label() const {
    return to_string(fn) + "/" + to_string(kernel) + "/N=" + std::to_string(n) + "/seed=" + std::to_string(seed);
  }
};

ExperimentConfig config_for(TestFunction fn, KernelFamily kernel, std::size_t n, std::uint64_t seed,
                            std::vector<Method> methods) {
  ExperimentConfig cfg;
  cfg.methods = std::move(methods);
  cfg.kernel = kernel;
  cfg.eps = kernel == KernelFamily::WendlandC2 ? 0.1 : 1.0;
  cfg.n = n;
  cfg.seed = seed;
  cfg.function = fn;
  cfg.grid_side = 80;
  return cfg;
}

Case run_case(TestFunction fn, KernelFamily kernel, std::size_t n, std::uint64_t seed, std::vector<Method> methods) {
  Case c{fn, kernel, n, seed, {}};
  for (auto& mr : run_methods(config_for(fn, kernel, n, seed, std::move(methods))).methods) {
    c.by_method.emplace(mr.method, std::move(mr));
  }
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double worst_residual = 0.0;
std::string worst_residual_at = "none";

void note_residual(const std::string& where, const MethodResult& mr) {
  if (mr.max_data_residual >= worst_residual) {
    worst_residual = mr.max_data_residual;
    worst_residual_at = where + "/" + to_string(mr.method);
  }
}

void sweep_checks(std::vector<Case>& sweep) {
  // 1 and 2.
  int neg_cases = 0;
  double pcpu_min = std::numeric_limits<double>::infinity();
  int plain_negative = 0;
  std::string plain_example;
  for (const auto& c : sweep) {
    const auto& p = c.by_method.at(Method::PCPU);
    pcpu_min = std::min(pcpu_min, p.min_value);
    if (p.n_negative != 0 || p.min_value < -1e-10) ++neg_cases;
    const auto& u = c.by_method.at(Method::PU);
    if (u.min_value < 0.0) {
      if (plain_negative++ == 0) plain_example = c.label() + " min " + fmt(u.min_value);
    }
    for (const auto& [m, mr] : c.by_method) {
      if (m != Method::Shepard) note_residual(c.label(), mr);
    }
  }
  report(1, "positivity of PC-PU", neg_cases == 0,
         std::to_string(sweep.size()) + " cases, " + std::to_string(neg_cases) + " with negatives, min " + fmt(pcpu_min));
  report(2, "plain PU violates positivity", plain_negative > 0,
         std::to_string(plain_negative) + " negative cases, e.g. " + plain_example);

  // 3: IMQ f1 mean RMSE.
  std::map<std::size_t, double> mean_rmse;
  for (const auto& c : sweep) {
    if (c.fn == TestFunction::F1 && c.kernel == KernelFamily::IMQ) {
      mean_rmse[c.n] += c.by_method.at(Method::PCPU).errors->rmse / static_cast<double>(kSeeds.size());
    }
  }
  report(3, "accuracy magnitude (IMQ, f1)", mean_rmse[1000] <= 3.5e-2 && mean_rmse[300] <= 1.5e-1,
         "N=300 mean RMSE " + fmt(mean_rmse[300]) + " <= 0.15, N=1000 mean RMSE " + fmt(mean_rmse[1000]) + " <= 0.035");

  // 4: IMQ ratio PC-PU / PU on every IMQ case of the sweep.
  double worst_ratio = 0.0;
  std::string worst_at;
  int over = 0;
  int tested = 0;
  for (const auto& c : sweep) {
    if (c.kernel != KernelFamily::IMQ) continue;
    ++tested;
    const double r = c.by_method.at(Method::PCPU).errors->rmse / c.by_method.at(Method::PU).errors->rmse;
    if (r > 3.0) ++over;
    if (r > worst_ratio) {
      worst_ratio = r;
      worst_at = c.label();
    }
  }
  report(4, "PC-PU close to PU for IMQ", over == 0,
         std::to_string(over) + " of " + std::to_string(tested) + " ratios above 3, worst " + fmt(worst_ratio) +
             " at " + worst_at);

  // 5: f2 PC-PU (IMQ) vs Shepard.
  int lost = 0;
  std::string detail;
  for (const auto& c : sweep) {
    if (c.fn != TestFunction::F2 || c.kernel != KernelFamily::IMQ) continue;
    const double a = c.by_method.at(Method::PCPU).errors->rmse;
    const double s = c.by_method.at(Method::Shepard).errors->rmse;
    if (!(a < s)) ++lost;
    if (c.seed == 1) detail += "N=" + std::to_string(c.n) + " " + fmt(a) + " vs " + fmt(s) + "; ";
  }
  report(5, "PC-PU beats Shepard on f2", lost == 0, std::to_string(lost) + " of 10 seeds lost; seed 1: " + detail);
}

void check_global(const std::vector<Case>& sweep) {
  int lost = 0;
  std::string detail;
  for (std::uint64_t seed : kSeeds) {
    const Case g = run_case(TestFunction::F2, KernelFamily::WendlandC2, 1000, seed, {Method::Global});
    const auto& gm = g.by_method.at(Method::Global);
    note_residual(g.label(), gm);
    double local = 0.0;
    for (const auto& c : sweep) {
      if (c.fn == TestFunction::F2 && c.kernel == KernelFamily::WendlandC2 && c.n == 1000 && c.seed == seed) {
        local = c.by_method.at(Method::PCPU).errors->rmse;
      }
    }
    if (!(local < gm.errors->rmse)) ++lost;
    detail += fmt(local) + "<" + fmt(gm.errors->rmse) + " ";
  }
  report(6, "PC-PU beats the global fit (f2, Wendland, N=1000)", lost == 0,
         std::to_string(lost) + " of 5 seeds lost; " + detail);
}

void check_qp() {
  std::mt19937_64 gen(20240607);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 5);
  int mismatched = 0;
  int solved = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(gen);
    const int n_hat = size(gen);
    Eigen::MatrixXd B;
    Eigen::VectorXd f(n);
    if (trial % 2 == 0) {
      B.resize(n, n + n_hat);
      for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = u(gen);
      for (int i = 0; i < n; ++i) f(i) = u(gen) - (trial % 6 == 0 ? 0.4 : 0.0);
    } else {
      // Patch geometry: base kernels plus sunflower constraint bases.
      LocalProblem p;
      p.kernel = trial % 4 == 1 ? KernelSpec::imq(1.0) : KernelSpec::wendland(2.0);
      p.center = {0.5, 0.5};
      p.radius = 0.2;
      p.points = oracle::random_disk_points(gen, p.center, p.radius, static_cast<std::size_t>(n));
      for (const auto& q : p.points) p.values.push_back(test_function(TestFunction::F2, q.x, q.y));
      const auto m = augmented_model(p, static_cast<std::size_t>(std::min(n, n_hat)));
      B = augmented_matrix(m).topRows(n).cast<double>();
      for (int i = 0; i < n; ++i) f(i) = p.values[static_cast<std::size_t>(i)];
    }
    const auto got = solve_positive_qp(B, f, static_cast<std::size_t>(n));
    const auto want = oracle::enumerate_qp(B, f, static_cast<std::size_t>(n));
    const bool got_ok = got.status == QPStatus::Solved;
    if (got_ok != want.feasible || got.status == QPStatus::NumericalFailure) {
      ++mismatched;
      continue;
    }
    if (got_ok) {
      ++solved;
      const double d = std::abs(got.objective - want.objective);
      worst = std::max(worst, d);
      if (d > 1e-6) ++mismatched;
    }
  }
  report(7, "QP matches exhaustive enumeration", mismatched == 0,
         "200 instances, " + std::to_string(solved) + " solved, " + std::to_string(mismatched) +
             " mismatches, max objective gap " + fmt(worst));
}

void check_rippa() {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> size(2, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    LocalProblem p;
    p.kernel = trial % 2 ? KernelSpec::imq(3.0) : KernelSpec::wendland(1.0);
    p.center = {0.5, 0.5};
    p.radius = 0.3;
    p.points = oracle::random_disk_points(gen, p.center, p.radius, static_cast<std::size_t>(size(gen)));
    for (const auto& q : p.points) p.values.push_back(test_function(TestFunction::F2, q.x, q.y));
    std::vector<BasisFunction> basis;
    for (const auto& q : p.points) basis.push_back({q, p.kernel});
    const auto sol = solve_unconstrained(p);
    const auto rippa = loocv_errors(sol.coeffs, collocation_matrix_ext(p.points, basis));
    const Eigen::VectorXd direct = oracle::explicit_loo(p.points, p.values, p.kernel);
    for (Eigen::Index i = 0; i < direct.size(); ++i) {
      worst = std::max(worst, std::abs(static_cast<double>(rippa.errors(i)) - direct(i)));
    }
  }
  report(8, "LOOCV formula matches explicit refits", worst <= 1e-8, "100 patches, max difference " + fmt(worst));
}

void check_partition() {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t n : kSizes) {
    const PatchGrid grid = build_patches(n);
    for (int k = 0; k < 10000; ++k) {
      double s = 0.0;
      for (const auto& [j, w] : pu_weights({u(gen), u(gen)}, grid)) s += w;
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  report(10, "weights sum to one", worst <= 1e-12, "2 x 10^4 points, max |sum - 1| " + fmt(worst));
}

void check_convergence(const std::vector<Case>& sweep) {
  std::vector<double> med;
  std::string detail;
  for (std::size_t n : {std::size_t{300}, std::size_t{1000}, std::size_t{3500}}) {
    std::vector<double> rmse;
    for (std::uint64_t seed : kSeeds) {
      if (n == 3500) {
        rmse.push_back(run_case(TestFunction::F1, KernelFamily::IMQ, n, seed, {Method::PCPU})
                           .by_method.at(Method::PCPU)
                           .errors->rmse);
        continue;
      }
      for (const auto& c : sweep) {
        if (c.fn == TestFunction::F1 && c.kernel == KernelFamily::IMQ && c.n == n && c.seed == seed) {
          rmse.push_back(c.by_method.at(Method::PCPU).errors->rmse);
        }
      }
    }
    med.push_back(median(rmse));
    detail += "N=" + std::to_string(n) + " " + fmt(med.back()) + " ";
  }
  report(11, "median RMSE nonincreasing in N (IMQ, f1)", med[1] <= med[0] && med[2] <= med[1], detail);
}

void check_eco() {
  using namespace pcpu::eco;
  const auto p = EcoParams::dolomiti(0.5, 0.5);
  std::string detail;

  EcoState s0 = EcoState::dolomiti_initial();
  s0.H = 0.0;
  bool invariant = true;
  for (const auto& s : integrate(p, s0, 5000.0, 1.0, true).states) invariant = invariant && s.H == 0.0;

  const auto start = EcoState::dolomiti_initial();
  const double ref = integrate(p, start, 200.0, 0.125).final_state.H;
  const double e4 = std::abs(integrate(p, start, 200.0, 4.0).final_state.H - ref);
  const double e2 = std::abs(integrate(p, start, 200.0, 2.0).final_state.H - ref);
  const double order = std::log2(e4 / e2);

  const auto surface = equilibrium_surface(p, {10.0, 30.0}, {0.01, 0.05}, 6, 20000.0, 1.0);
  const double surf_min = *std::min_element(surface.values.begin(), surface.values.end());

  const EcoState cap{0.0, p.K1, p.K2};
  const auto r = eco_rhs(p, cap);
  const double rel = std::sqrt(r.H * r.H + r.G * r.G + r.T * r.T) / std::sqrt(p.K1 * p.K1 + p.K2 * p.K2);

  const bool ok = invariant && order >= 3.5 && order <= 4.5 && surf_min >= 0.0 && rel <= 1e-9;
  report(12, "ecological model properties", ok,
         std::string("H=0 invariant ") + (invariant ? "yes" : "no") + ", RK4 order " + fmt(order) +
             ", surface min " + fmt(surf_min) + ", (0,K1,K2) relative rhs " + fmt(rel));
}

void check_determinism() {
  const auto base = std::filesystem::temp_directory_path() / "pcpu_acceptance";
  std::vector<std::string> dumps;
  for (int run = 0; run < 2; ++run) {
    auto cfg = config_for(TestFunction::F2, KernelFamily::WendlandC2, 300, 3,
                          {Method::PU, Method::PCPU, Method::Shepard, Method::Global});
    cfg.output_dir = base / ("run" + std::to_string(run));
    run_experiment(cfg);
    std::ifstream in(cfg.output_dir / "report.json");
    dumps.push_back(nlohmann::json::parse(in).at("results").dump());
  }
  report(13, "repeated fit runs are identical", dumps[0] == dumps[1],
         "results sections of " + std::to_string(dumps[0].size()) + " bytes compared");
}

}  // namespace

int main() {
  std::vector<Case> sweep;
  for (TestFunction fn : {TestFunction::F1, TestFunction::F2}) {
    for (KernelFamily k : {KernelFamily::WendlandC2, KernelFamily::IMQ}) {
      for (std::size_t n : kSizes) {
        for (std::uint64_t seed : kSeeds) {
          std::vector<Method> methods{Method::PU, Method::PCPU};
          if (k == KernelFamily::IMQ && fn == TestFunction::F2) methods.push_back(Method::Shepard);
          sweep.push_back(run_case(fn, k, n, seed, methods));
        }
      }
    }
  }
  sweep_checks(sweep);
  check_global(sweep);
  check_qp();
  check_rippa();
  report(9, "interpolation at data sites (PU, PC-PU, global)", worst_residual <= 1e-8,
         "max |s(x_i) - f_i| / (1 + |f_i|) " + fmt(worst_residual) + " at " + worst_residual_at);
  check_partition();
  check_convergence(sweep);
  check_eco();
  check_determinism();
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
