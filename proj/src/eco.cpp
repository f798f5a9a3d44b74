#include "pcpu/eco.hpp"

#include "pcpu/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcpu::eco {

EcoParams EcoParams::dolomiti(double a, double b) {
  EcoParams p;
  p.mu = 0.03;
  p.r1 = 0.01;
  p.r2 = 0.0006;
  p.alpha = 1.0 / 0.05;
  p.beta = 8.0;
  p.e = 0.605;
  p.f = 0.001;
  p.K1 = 3469640.64;
  p.K2 = 15695993.39;
  p.c = 101862.16;
  p.g = 1001229580.18;
  p.a = a;
  p.b = b;
  return p;
}

void EcoParams::validate() const {
  const double all[] = {mu, r1, r2, K1, K2, alpha, beta, e, f, a, b, c, g};
  for (double v : all) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("ecological parameters must be finite and nonnegative");
    }
  }
  if (e > 1.0 || f > 1.0) {
    throw ConfigError("conversion factors e and f must not exceed 1");
  }
  if (K1 <= 0.0 || K2 <= 0.0) {
    throw ConfigError("carrying capacities must be positive");
  }
}

EcoState eco_rhs(const EcoParams& p, const EcoState& s) {
  if (p.c == 0.0 && p.g == 0.0 && s.H == 0.0 && s.G == 0.0 && s.T == 0.0) {
    throw DomainError("eco_rhs: response denominators vanish (c = g = 0 at the zero state)");
  }
  const double den_g = p.c + s.H + p.alpha * s.G;
  const double den_t = p.g + s.H + p.beta * s.T + p.alpha * s.G;
  // Each numerator carries a factor H, which is zero whenever its denominator is.
  const double graze = den_g > 0.0 ? s.H * s.G / den_g : 0.0;
  const double browse = den_t > 0.0 ? s.H * s.T / den_t : 0.0;
  return {-p.mu * s.H + p.a * p.e * graze + p.b * p.f * browse,
          p.r1 * s.G * (1.0 - s.G / p.K1) - p.a * graze,
          p.r2 * s.T * (1.0 - s.T / p.K2) - p.b * browse};
}

namespace {

EcoState axpy(const EcoState& s, double h, const EcoState& k) {
  return {s.H + h * k.H, s.G + h * k.G, s.T + h * k.T};
}

double norm(const EcoState& s) { return std::sqrt(s.H * s.H + s.G * s.G + s.T * s.T); }

}  // namespace

Trajectory integrate(const EcoParams& p, const EcoState& s0, double t_end, double dt, bool record) {
  if (!(dt > 0.0) || !(t_end >= dt)) {
    throw ConfigError("integrate: need dt > 0 and t_end >= dt");
  }
  Trajectory out;
  EcoState s = s0;
  if (record) out.states.push_back(s);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = std::min(dt, t_end - t);
    const EcoState k1 = eco_rhs(p, s);
    const EcoState k2 = eco_rhs(p, axpy(s, 0.5 * h, k1));
    const EcoState k3 = eco_rhs(p, axpy(s, 0.5 * h, k2));
    const EcoState k4 = eco_rhs(p, axpy(s, h, k3));
    s.H += h / 6.0 * (k1.H + 2.0 * k2.H + 2.0 * k3.H + k4.H);
    s.G += h / 6.0 * (k1.G + 2.0 * k2.G + 2.0 * k3.G + k4.G);
    s.T += h / 6.0 * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
    if (!std::isfinite(s.H) || !std::isfinite(s.G) || !std::isfinite(s.T)) {
      throw DivergenceError("integration diverged at step " + std::to_string(n), n);
    }
    s.H = std::max(s.H, 0.0);
    s.G = std::max(s.G, 0.0);
    s.T = std::max(s.T, 0.0);
    t = n == steps ? t_end : t + h;
    if (record) out.states.push_back(s);
  }
  out.final_state = s;
  const double state_norm = norm(s);
  const double rhs_norm = norm(eco_rhs(p, s));
  out.stationarity = state_norm > 0.0 ? rhs_norm / state_norm : rhs_norm;
  out.stationary = out.stationarity < 1e-8;
  return out;
}

SurfaceData equilibrium_surface(const EcoParams& p_base, Interval alpha_range, Interval mu_range,
                                std::size_t n_side, double t_end, double dt, const EcoState& s0) {
  p_base.validate();
  if (n_side < 2) throw ConfigError("equilibrium_surface: n_side must be at least 2");
  if (!(alpha_range.hi > alpha_range.lo) || !(mu_range.hi > mu_range.lo) || alpha_range.lo < 0.0 ||
      mu_range.lo < 0.0) {
    throw ConfigError("equilibrium_surface: ranges must be nonnegative and nonempty");
  }
  SurfaceData out;
  const double n = static_cast<double>(n_side - 1);
  for (std::size_t im = 0; im < n_side; ++im) {
    for (std::size_t ia = 0; ia < n_side; ++ia) {
      const double u = static_cast<double>(ia) / n;
      const double v = static_cast<double>(im) / n;
      EcoParams p = p_base;
      p.alpha = alpha_range.lo + u * (alpha_range.hi - alpha_range.lo);
      p.mu = mu_range.lo + v * (mu_range.hi - mu_range.lo);
      Trajectory traj;
      try {
        traj = integrate(p, s0, t_end, dt);
      } catch (const DivergenceError& err) {
        throw DivergenceError("cell (alpha=" + std::to_string(p.alpha) + ", mu=" +
                                  std::to_string(p.mu) + "): " + err.what(),
                              err.step());
      }
      if (!traj.stationary) {
        out.warnings.push_back("cell (alpha=" + std::to_string(p.alpha) + ", mu=" +
                               std::to_string(p.mu) + ") not stationary at t_end (|rhs|/|state| = " +
                               std::to_string(traj.stationarity) + ")");
      }
      out.points.push_back({u, v});
      out.values.push_back(traj.final_state.H);
      out.alpha.push_back(p.alpha);
      out.mu.push_back(p.mu);
    }
  }
  return out;
}

}  // namespace pcpu::eco
