#include "oracles.hpp"

#include "pcpu/baselines.hpp"
#include "pcpu/errors.hpp"
#include "pcpu/metrics.hpp"
#include "pcpu/pu.hpp"

#include <doctest.h>

#include <cmath>

using namespace pcpu;

TEST_SUITE("pu") {

TEST_CASE("weights form a partition of unity") {
  const PatchGrid grid = build_patches(300);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const Point p{u(gen), u(gen)};
    const auto w = pu_weights(p, grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i].second > 0.0);
      if (i > 0) CHECK(w[i - 1].first < w[i].first);
      CHECK(distance(p, grid.centers[w[i].first]) < grid.delta);
      sum += w[i].second;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(pu_weights({5.0, 5.0}, grid), CoverageError);
}

TEST_CASE("constant data: constrained and plain fits coincide") {
  const auto pts = random_nodes(300, 2);
  const std::vector<double> ones(pts.size(), 1.0);
  const auto grid = eval_grid(30);
  PUConfig cfg;
  cfg.kernel = KernelSpec::wendland(0.1);
  cfg.mode = FitMode::PCPU;
  const auto a = evaluate(fit(pts, ones, cfg, grid), grid);
  cfg.mode = FitMode::PlainPU;
  const auto b = evaluate(fit(pts, ones, cfg, grid), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("constrained fit interpolates and stays nonnegative") {
  for (auto fn : {TestFunction::F1, TestFunction::F2}) {
    for (const auto& kernel : {KernelSpec::wendland(0.1), KernelSpec::imq(1.0)}) {
      const auto pts = random_nodes(300, 1);
      std::vector<double> f;
      for (const auto& p : pts) f.push_back(test_function(fn, p.x, p.y));
      const auto grid = eval_grid(40);
      PUConfig cfg;
      cfg.kernel = kernel;
      const PUModel model = fit(pts, f, cfg, grid);
      const auto at_data = evaluate(model, pts);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::abs(at_data[i] - f[i]) <= 1e-8 * (1.0 + std::abs(f[i])));
      }
      const auto vals = evaluate(model, grid);
      for (double v : vals) CHECK(v >= -1e-10);
      CHECK(model.n_added().size() == model.grid.size());
    }
  }
}

TEST_CASE("empty patch with evaluation points warns") {
  std::vector<Point> pts;
  std::vector<double> f;
  // Data only in the lower-left half; a d = 16 grid leaves the far corner patch empty.
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int i = 0; i < 40; ++i) {
    pts.push_back({u(gen), u(gen)});
    f.push_back(test_function(TestFunction::F1, pts.back().x, pts.back().y));
  }
  PUConfig cfg;
  cfg.kernel = KernelSpec::imq(1.0);
  cfg.d_override = 16;
  const std::vector<Point> eval{{0.95, 0.95}};
  const PUModel model = fit(pts, f, cfg, eval);
  bool warned = false;
  for (const auto& w : model.warnings) warned = warned || w.find("patch 15") != std::string::npos;
  CHECK(warned);
  CHECK(evaluate(model, eval)[0] == 0.0);
}

TEST_CASE("configuration errors") {
  const auto pts = random_nodes(40, 1);
  const std::vector<double> f(pts.size(), 1.0);
  PUConfig cfg;
  cfg.d_override = 10;
  CHECK_THROWS_AS(fit(pts, f, cfg), ConfigError);
  cfg.d_override = 0;
  CHECK_THROWS_AS(fit(pts, f, cfg), ConfigError);
  cfg.d_override.reset();
  CHECK_THROWS_AS(fit(pts, std::vector<double>(3, 1.0), cfg), Error);
  std::vector<double> bad = f;
  bad[4] = std::nan("");
  try {
    (void)fit(pts, bad, cfg);
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.line() == 5);
  }
}

TEST_CASE("negative data cannot be fitted positively") {
  const auto pts = random_nodes(40, 1);
  std::vector<double> f(pts.size(), 1.0);
  f[0] = -1.0;
  PUConfig cfg;
  cfg.mode = FitMode::PlainPU;
  CHECK(fit(pts, f, cfg).warnings.empty());
  cfg.mode = FitMode::PCPU;
  const PatchGrid grid = build_patches(pts.size());
  const auto first = grid.covering(pts[0]).front();
  try {
    (void)fit(pts, f, cfg);
    FAIL("expected PatchInfeasible");
  } catch (const PatchInfeasible& e) {
    CHECK(e.patch() == first);
  }
}

}

TEST_SUITE("baselines") {

TEST_CASE("shepard reproduces data and stays in the data range") {
  const auto pts = random_nodes(50, 4);
  std::vector<double> f;
  for (const auto& p : pts) f.push_back(test_function(TestFunction::F2, p.x, p.y));
  const auto at = shepard_eval(pts, f, pts);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(at[i] == f[i]);
  const double lo = *std::min_element(f.begin(), f.end());
  const double hi = *std::max_element(f.begin(), f.end());
  for (double v : shepard_eval(pts, f, eval_grid(25))) {
    CHECK(v >= lo);
    CHECK(v <= hi);
  }
  // Two points: the midpoint gets the average.
  const std::vector<Point> two{{0.0, 0.0}, {1.0, 0.0}};
  const std::vector<double> tv{1.0, 3.0};
  const std::vector<Point> mid{{0.5, 0.0}, {0.25, 0.0}};
  const auto m = shepard_eval(two, tv, mid);
  CHECK(m[0] == doctest::Approx(2.0));
  CHECK(m[1] == doctest::Approx((16.0 + 3.0 * 16.0 / 9.0) / (16.0 + 16.0 / 9.0)));
  CHECK_THROWS_AS(shepard_eval({}, {}, mid), DomainError);
  CHECK_THROWS_AS(shepard_eval(two, tv, mid, 0.0), DomainError);
}

TEST_CASE("global fit is the single-patch constrained fit") {
  const auto pts = random_nodes(60, 3);
  std::vector<double> f;
  for (const auto& p : pts) f.push_back(test_function(TestFunction::F2, p.x, p.y));
  const auto grid = eval_grid(20);
  const auto kernel = KernelSpec::wendland(0.5);
  const PUModel g = global_constrained_fit(pts, f, kernel, {}, grid);
  PUConfig cfg;
  cfg.kernel = kernel;
  cfg.d_override = 1;
  const PUModel p = fit(pts, f, cfg, grid);
  REQUIRE(g.grid.size() == 1);
  const auto a = evaluate(g, grid);
  const auto b = evaluate(p, grid);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (double v : a) CHECK(v >= -1e-10);

  const auto many = random_nodes(kGlobalFitMaxPoints + 1, 1);
  CHECK_THROWS_AS(global_constrained_fit(many, std::vector<double>(many.size(), 1.0), kernel), ConfigError);
}

}
