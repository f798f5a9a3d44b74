#pragma once

#include "pcpu/kernels.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pcpu::eco {

/// Herbivore (H) / grass (G) / tree (T) model with Beddington-De Angelis responses.
///
/// Rates are per day, K1, K2, c, g are biomasses, the rest are pure numbers.
struct EcoParams {
  double mu = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double e = 0.0;
  double f = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double g = 0.0;

  /// Dolomiti Bellunesi calibration (alpha = 1 / 0.05). The feeding rates a and b
  /// have no published values and must be supplied by the caller.
  static EcoParams dolomiti(double a, double b);

  void validate() const;
};

struct EcoState {
  double H = 0.0;
  double G = 0.0;
  double T = 0.0;

  static EcoState dolomiti_initial() { return {268.750, 2313093.76, 1046399.56}; }

  friend bool operator==(const EcoState&, const EcoState&) = default;
};

EcoState eco_rhs(const EcoParams& p, const EcoState& s);

struct Trajectory {
  EcoState final_state;
  std::vector<EcoState> states;  // filled only when requested; includes the initial state
  double stationarity = 0.0;     // |rhs| / |state| at the final state
  bool stationary = false;       // stationarity < 1e-8
};

/// Classical fixed-step RK4, clamping each component at zero after every step.
/// The final step is shortened so the run ends exactly at t_end.
/// Throws DivergenceError (1-based step) on a non-finite state.
Trajectory integrate(const EcoParams& p, const EcoState& s0, double t_end, double dt,
                     bool record = false);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct SurfaceData {
  std::vector<Point> points;   // (alpha, mu) mapped affinely onto [0, 1]^2
  std::vector<double> values;  // H(t_end)
  std::vector<double> alpha;
  std::vector<double> mu;
  std::vector<std::string> warnings;
};

/// H(t_end) over an n_side x n_side grid of (alpha, mu), mu outer, starting every
/// run from `s0`. Cells failing the stationarity check are reported in `warnings`.
SurfaceData equilibrium_surface(const EcoParams& p_base, Interval alpha_range, Interval mu_range,
                                std::size_t n_side, double t_end, double dt,
                                const EcoState& s0 = EcoState::dolomiti_initial());

}  // namespace pcpu::eco
