#include "pcpu/errors.hpp"
#include "pcpu/metrics.hpp"

#include <doctest.h>

#include <cmath>

using namespace pcpu;

TEST_SUITE("metrics") {

TEST_CASE("node generator golden values") {
  const auto p = random_nodes(300, 1);
  REQUIRE(p.size() == 300);
  CHECK(p[0].x == 0.13387664401253263);
  CHECK(p[0].y == 0.13640703636619722);
  CHECK(p[1].x == 0.45121490384453811);
  CHECK(p[1].y == 0.02102422841672702);
  CHECK(p[299].x == 0.75646031296736349);
  CHECK(p[299].y == 0.71283651063030606);
  CHECK(random_nodes(5, 9)[4].x == random_nodes(7, 9)[4].x);
  for (const auto& q : random_nodes(1000, 5)) {
    CHECK(q.x >= 0.0);
    CHECK(q.x < 1.0);
  }
}

TEST_CASE("test functions") {
  CHECK(test_function(TestFunction::F1, 0.2, 0.9) == doctest::Approx(0.34));
  CHECK(test_function(TestFunction::F2, 0.2, 0.9) == doctest::Approx(0.2198195056979883).epsilon(1e-14));
  CHECK(test_function(TestFunction::F1, 0.5, 0.4) == 0.0);
  CHECK(test_function(TestFunction::F2, 0.3, 0.4) == 0.0);
  CHECK(test_function_from_string("f2") == TestFunction::F2);
  CHECK(to_string(TestFunction::F1) == "f1");
  CHECK_THROWS_AS(test_function_from_string("f3"), ConfigError);
}

TEST_CASE("error report") {
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> a{0.0, 1.5, 2.0, 2.0};
  const auto r = error_report(t, a);
  CHECK(r.mae == doctest::Approx(1.0));
  CHECK(r.rmse == doctest::Approx(std::sqrt(1.25 / 4.0)));
  CHECK(r.n_eval == 4);
  CHECK(r.min_value == 0.0);
  CHECK(r.n_negative == 0);
  CHECK(r.rmse <= r.mae);

  const std::vector<double> neg{-1e-11, -2e-10, 0.0, 1.0};
  const auto rn = error_report(t, neg);
  CHECK(rn.n_negative == 1);
  CHECK(rn.min_value == -2e-10);
  CHECK_THROWS(error_report(t, std::vector<double>{1.0}));
}

TEST_CASE("evaluation grid") {
  const auto g = eval_grid(3);
  REQUIRE(g.size() == 9);
  CHECK(g[0].x == 0.0);
  CHECK(g[1].x == 0.5);
  CHECK(g[2].x == 1.0);
  CHECK(g[3].y == 0.5);
  CHECK(g[8].x == 1.0);
  CHECK(g[8].y == 1.0);
  const auto h = eval_grid(2, Rect{-1.0, 2.0, 1.0, 4.0});
  CHECK(h[3].x == 1.0);
  CHECK(h[3].y == 4.0);
}

TEST_CASE("rmse never exceeds mae under rounding") {
  std::vector<double> t(50, 0.0);
  std::vector<double> a(50, 0.1);
  const auto r = error_report(t, a);
  CHECK(r.rmse <= r.mae);
  CHECK(r.rmse == 0.1);
}

}
