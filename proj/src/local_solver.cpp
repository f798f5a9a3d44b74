#include "pcpu/local_solver.hpp"

#include "pcpu/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pcpu {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Reciprocal condition estimates (extended precision) below this are treated as singular.
constexpr Real kSingularRcond = 1e-30L;

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
  return out;
}

Eigen::MatrixXd gather_cols(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
  return out;
}

std::vector<Eigen::Index> indices_where(const std::vector<bool>& mask, bool value) {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == value) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

// Lawson-Hanson NNLS: min |A x - b| subject to x >= 0, starting from the passive set
// `warm` (any set is admissible since x = 0 is feasible).
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::vector<bool> warm,
                     std::size_t max_iter, bool& converged) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool>& passive = warm;
  std::vector<bool> excluded(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * kEps * A.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(A.rows(), A.cols())) * std::max(1.0, b.lpNorm<Eigen::Infinity>());

  // Moves x towards the least-squares solution on the passive set, dropping variables
  // that hit zero. Returns false if the entering variable `t` is useless from the start.
  auto settle = [&](Eigen::Index t) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t inner = 0; inner < static_cast<std::size_t>(3 * n + 3); ++inner) {
      const auto p_idx = indices_where(passive, true);
      s.setZero();
      if (!p_idx.empty()) {
        const Eigen::VectorXd sp = gather_cols(A, p_idx).completeOrthogonalDecomposition().solve(b);
        for (std::size_t k = 0; k < p_idx.size(); ++k) s(p_idx[k]) = sp(static_cast<Eigen::Index>(k));
      }
      if (inner == 0 && t >= 0 && s(t) <= 0.0) return false;
      double alpha = 1.0;
      bool any_nonpositive = false;
      for (Eigen::Index i : p_idx) {
        if (s(i) <= 0.0) {
          any_nonpositive = true;
          alpha = std::min(alpha, x(i) / (x(i) - s(i)));
        }
      }
      if (!any_nonpositive) break;
      x += alpha * (s - x);
      const double x_floor = kEps * x.lpNorm<Eigen::Infinity>();
      for (Eigen::Index i : p_idx) {
        if (x(i) <= x_floor) {
          passive[static_cast<std::size_t>(i)] = false;
          x(i) = 0.0;
        }
      }
    }
    x = s;
    return true;
  };

  if (std::find(passive.begin(), passive.end(), true) != passive.end()) settle(-1);
  Eigen::VectorXd w = A.transpose() * (b - A * x);
  converged = false;
  std::size_t iter = 0;
  while (iter++ < max_iter) {
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!passive[ju] && !excluded[ju] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) {
      converged = true;
      break;
    }
    passive[static_cast<std::size_t>(t)] = true;
    if (!settle(t)) {
      // Numerically useless entering column: skip it until the next successful step.
      passive[static_cast<std::size_t>(t)] = false;
      excluded[static_cast<std::size_t>(t)] = true;
      continue;
    }
    std::fill(excluded.begin(), excluded.end(), false);
    w = A.transpose() * (b - A * x);
  }
  return x;
}

// Columns touching a single row with positive entry and positive right-hand side, at
// most one per row. Constraint bases paired with one data site have this shape, so
// the warm start already solves the fully constrained candidate.
std::vector<bool> singleton_columns(const Eigen::MatrixXd& B, const Eigen::VectorXd& f) {
  std::vector<bool> out(static_cast<std::size_t>(B.cols()), false);
  std::vector<bool> row_used(static_cast<std::size_t>(B.rows()), false);
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    Eigen::Index row = -1;
    int nonzero = 0;
    for (Eigen::Index i = 0; i < B.rows() && nonzero < 2; ++i) {
      if (B(i, j) != 0.0) {
        ++nonzero;
        row = i;
      }
    }
    if (nonzero != 1 || B(row, j) <= 0.0 || f(row) <= 0.0 || row_used[static_cast<std::size_t>(row)]) continue;
    row_used[static_cast<std::size_t>(row)] = true;
    out[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

}  // namespace

void LocalProblem::validate() const {
  kernel.validate();
  if (points.size() != values.size()) {
    throw DomainError("local problem: point/value count mismatch");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("local problem: non-finite data value");
  }
}

const char* to_string(QPStatus status) {
  switch (status) {
    case QPStatus::Solved:
      return "solved";
    case QPStatus::Infeasible:
      return "infeasible";
    case QPStatus::NumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

LocalModel LocalModel::zero(const KernelSpec& kernel) {
  LocalModel m;
  m.base_kernel = kernel;
  m.coeffs = RealVector(0);
  return m;
}

std::vector<BasisFunction> LocalModel::basis() const {
  std::vector<BasisFunction> out;
  out.reserve(n_base() + n_added());
  for (const Point& c : base_centers) out.push_back({c, base_kernel});
  for (std::size_t k = 0; k < added_points.size(); ++k) {
    out.push_back({added_points[k], KernelSpec::wendland(1.0 / added_radii[k])});
  }
  return out;
}

Real LocalModel::value_ext(const Point& p) const {
  if (quad_coeffs.size() > 0) {
    Quad acc = 0;
    for (std::size_t k = 0; k < base_centers.size(); ++k) {
      acc += quad_coeffs(static_cast<Eigen::Index>(k)) *
             eval_rbf_quad(base_kernel, distance_quad(p, base_centers[k]));
    }
    return static_cast<Real>(acc);
  }
  Real acc = 0;
  Eigen::Index k = 0;
  for (const Point& c : base_centers) acc += coeffs(k++) * eval_rbf_ext(base_kernel, distance_ext(p, c));
  for (std::size_t a = 0; a < added_points.size(); ++a) {
    acc += coeffs(k++) *
           eval_rbf_ext(KernelSpec::wendland(1.0 / added_radii[a]), distance_ext(p, added_points[a]));
  }
  return acc;
}

double interpolation_tolerance(std::span<const double> values) {
  double f_max = 0.0;
  for (double v : values) f_max = std::max(f_max, std::abs(v));
  return 1e-8 * (1.0 + f_max);
}

UnconstrainedSolution solve_unconstrained(const LocalProblem& problem) {
  problem.validate();
  if (problem.points.empty()) {
    throw DomainError("solve_unconstrained: patch has no data");
  }
  std::vector<BasisFunction> basis;
  basis.reserve(problem.points.size());
  for (const Point& p : problem.points) basis.push_back({p, problem.kernel});
  const RealMatrix A = collocation_matrix_ext(problem.points, basis);
  const RealVector f = Eigen::Map<const Eigen::VectorXd>(problem.values.data(),
                                                         static_cast<Eigen::Index>(problem.values.size()))
                           .cast<Real>();

  const Eigen::PartialPivLU<RealMatrix> lu(A);
  const Real rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    throw NumericalFailure("local interpolation matrix of patch " +
                               std::to_string(problem.patch_index) + " is numerically singular",
                           static_cast<double>(rcond));
  }
  UnconstrainedSolution out;
  out.coeffs = lu.solve(f);
  out.coeffs += lu.solve(f - A * out.coeffs);  // one step of iterative refinement
  if (!out.coeffs.allFinite()) {
    throw NumericalFailure("non-finite coefficients on patch " + std::to_string(problem.patch_index),
                           static_cast<double>(rcond));
  }
  out.residual = static_cast<double>((A * out.coeffs - f).lpNorm<Eigen::Infinity>());
  out.rcond = static_cast<double>(rcond);
  if (out.residual <= interpolation_tolerance(problem.values)) return out;

  const QuadMatrix Aq = collocation_matrix_quad(problem.points, basis);
  const QuadVector fq = f.cast<Quad>();
  const Eigen::PartialPivLU<QuadMatrix> luq(Aq);
  QuadVector cq = luq.solve(fq);
  cq += luq.solve(fq - Aq * cq);
  const Quad resid_q = (Aq * cq - fq).cwiseAbs().maxCoeff();
  if (!cq.allFinite() || !(resid_q < out.residual)) return out;
  out.quad_coeffs = cq;
  out.coeffs = cq.cast<Real>();
  out.residual = static_cast<double>(resid_q);
  return out;
}

bool check_nonnegativity(const LocalModel& model, std::span<const Point> check_points, double tol) {
  return std::all_of(check_points.begin(), check_points.end(),
                     [&](const Point& p) { return model(p) >= -tol; });
}

QPResult solve_positive_qp(const Eigen::MatrixXd& B, const Eigen::VectorXd& f, std::size_t n_base) {
  QPResult result;
  const Eigen::Index rows = B.rows();
  const Eigen::Index n = B.cols();
  result.coeffs = Eigen::VectorXd::Zero(n);
  if (f.size() != rows || static_cast<Eigen::Index>(n_base) > n || rows == 0) {
    throw DomainError("solve_positive_qp: inconsistent dimensions");
  }
  if (!f.allFinite() || !B.allFinite()) {
    return result;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> full(B);
  if (full.rank() < rows) {
    return result;  // NumericalFailure: rank deficient rows
  }

  const double f_scale = 1.0 + f.lpNorm<Eigen::Infinity>();
  const std::size_t cap = 200 * static_cast<std::size_t>(n);

  // Phase one: nearest nonnegative point in the equality sense.
  bool nnls_ok = false;
  const Eigen::VectorXd x0 = nnls(B, f, singleton_columns(B, f), cap, nnls_ok);
  if (!nnls_ok) return result;
  if ((B * x0 - f).lpNorm<Eigen::Infinity>() > 1e-9 * f_scale) {
    result.status = QPStatus::Infeasible;
    return result;
  }

  // Phase two in scaled variables z = s .* c, where the objective becomes |z|^2.
  Eigen::VectorXd s = Eigen::VectorXd::Ones(n);
  s.head(static_cast<Eigen::Index>(n_base)).setConstant(std::sqrt(kBaseRegularization));
  const Eigen::MatrixXd G = B * s.cwiseInverse().asDiagonal();
  const Eigen::VectorXd col_norms = G.colwise().norm();

  Eigen::VectorXd z = s.cwiseProduct(x0.cwiseMax(0.0));
  std::vector<bool> free(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = z(i) > 0.0;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
  bool optimal = false;
  std::size_t iter = 0;
  for (; iter < cap; ++iter) {
    const auto F = indices_where(free, true);
    Eigen::VectorXd zstar = Eigen::VectorXd::Zero(n);
    if (!F.empty()) {
      const Eigen::MatrixXd GF = gather_cols(G, F);
      const Eigen::VectorXd zf = GF.completeOrthogonalDecomposition().solve(f);
      for (std::size_t k = 0; k < F.size(); ++k) zstar(F[k]) = zf(static_cast<Eigen::Index>(k));
    }
    const Eigen::VectorXd p = zstar - z;
    if (p.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + z.lpNorm<Eigen::Infinity>())) {
      z = zstar;
      if (!F.empty()) {
        const Eigen::MatrixXd GFt = gather_cols(G, F).transpose();
        y = GFt.completeOrthogonalDecomposition().solve(2.0 * gather(z, F));
      } else {
        y.setZero();
      }
      const double y_norm = y.norm();
      Eigen::Index release = -1;
      double worst = -1e-10;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (free[static_cast<std::size_t>(i)]) continue;
        const double mu = -G.col(i).dot(y);
        const double rel = mu / (col_norms(i) * y_norm + kEps);
        if (rel < worst) {
          worst = rel;
          release = i;
        }
      }
      if (release < 0) {
        optimal = true;
        break;
      }
      free[static_cast<std::size_t>(release)] = true;
      continue;
    }
    double alpha = 1.0;
    Eigen::Index block = -1;
    for (Eigen::Index i : F) {
      if (zstar(i) < 0.0) {
        const double a = z(i) / (z(i) - zstar(i));
        if (a < alpha) {
          alpha = a;
          block = i;
        }
      }
    }
    z += alpha * p;
    if (block >= 0) {
      z(block) = 0.0;
      free[static_cast<std::size_t>(block)] = false;
    }
  }
  result.iterations = iter;
  if (!optimal) return result;

  const Eigen::VectorXd c = z.cwiseQuotient(s);
  const double eq_resid = (B * c - f).lpNorm<Eigen::Infinity>();

  // KKT residual in the scaled problem: stationarity on the free set, dual feasibility
  // and complementarity on the bounds, each relative to the magnitude of its terms.
  const Eigen::VectorXd mu = 2.0 * z - G.transpose() * y;
  const double y_norm = y.norm();
  double kkt = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double term_scale = 1.0 + 2.0 * std::abs(z(i)) + col_norms(i) * y_norm;
    if (free[static_cast<std::size_t>(i)]) {
      kkt = std::max(kkt, std::abs(mu(i)) / term_scale);
    } else {
      kkt = std::max(kkt, std::max(0.0, -mu(i)) / term_scale);
    }
    kkt = std::max(kkt, std::abs(z(i) * mu(i)) / (term_scale * (1.0 + std::abs(z(i)))));
  }

  result.coeffs = c;
  result.kkt_residual = kkt;
  result.objective = z.squaredNorm();
  if (eq_resid <= 1e-8 * f_scale && c.minCoeff() >= -1e-10 && kkt <= 1e-6) {
    result.status = QPStatus::Solved;
  }
  return result;
}

LoocvResult loocv_errors(const RealVector& coeffs, const RealMatrix& A_hat) {
  if (A_hat.rows() != A_hat.cols() || A_hat.rows() != coeffs.size() || coeffs.size() == 0) {
    throw DomainError("loocv_errors: matrix must be square and match the coefficient vector");
  }
  const Eigen::PartialPivLU<RealMatrix> lu(A_hat);
  const Real rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    throw NumericalFailure("loocv_errors: augmented matrix is numerically singular",
                           static_cast<double>(rcond));
  }
  const RealVector diag = lu.inverse().diagonal();
  if (!diag.allFinite() || diag.cwiseAbs().minCoeff() < 1e-14L) {
    throw NumericalFailure("loocv_errors: vanishing diagonal of the inverse", static_cast<double>(rcond));
  }
  LoocvResult out;
  out.errors = coeffs.cwiseQuotient(diag);
  out.max_norm = static_cast<double>(out.errors.lpNorm<Eigen::Infinity>());
  return out;
}

std::vector<Point> patch_check_points(const Point& center, double radius, const Rect& domain,
                                      std::span<const Point> extra) {
  constexpr int kSide = 20;
  std::vector<Point> out(extra.begin(), extra.end());
  for (int iy = 0; iy < kSide; ++iy) {
    for (int ix = 0; ix < kSide; ++ix) {
      const Point p{center.x - radius + 2.0 * radius * ix / (kSide - 1),
                    center.y - radius + 2.0 * radius * iy / (kSide - 1)};
      if (distance(p, center) <= radius && domain.contains(p)) out.push_back(p);
    }
  }
  return out;
}

std::vector<std::size_t> candidate_counts(std::size_t n_data) {
  std::vector<std::size_t> out;
  if (n_data <= 64) {
    for (std::size_t k = 1; k <= n_data; ++k) out.push_back(k);
    return out;
  }
  for (std::size_t k = 1; k < n_data; k *= 2) out.push_back(k);
  out.push_back(n_data);
  return out;
}

LocalModel augmented_model(const LocalProblem& problem, std::size_t n_add) {
  const auto& sites = problem.points;
  if (n_add > sites.size()) {
    throw DomainError("augmented_model: more constraint points than data sites");
  }
  LocalModel model;
  model.base_centers = sites;
  model.base_kernel = problem.kernel;
  model.added_radii.reserve(n_add);

  auto nearest = [&](const Point& q, auto&& allowed) {
    std::size_t best = sites.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (!allowed(i)) continue;
      const double d = distance(q, sites[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };

  std::vector<bool> taken(sites.size(), false);
  for (const Point& q : sunflower_points(problem.center, problem.radius, n_add)) {
    const std::size_t own = nearest(q, [](std::size_t) { return true; });
    const std::size_t second = nearest(q, [&](std::size_t i) { return i != own; });
    const double d2 = second < sites.size() ? distance(q, sites[second])
                                            : std::numeric_limits<double>::infinity();
    Point placed = q;
    // Kept only when its own site sits well inside the support (bump value >= phi(1/2)).
    if (taken[own] || 3.0 * distance(q, sites[own]) > d2) {
      const std::size_t a = nearest(q, [&](std::size_t i) { return !taken[i]; });
      const std::size_t nb = nearest(sites[a], [&](std::size_t i) { return i != a; });
      const double gap = nb < sites.size() ? distance(sites[a], sites[nb]) : problem.radius;
      const double len = distance(q, sites[a]);
      const double ux = len > 0.0 ? (q.x - sites[a].x) / len : 1.0;
      const double uy = len > 0.0 ? (q.y - sites[a].y) / len : 0.0;
      placed = {sites[a].x + 0.25 * gap * ux, sites[a].y + 0.25 * gap * uy};
      taken[a] = true;
    } else {
      taken[own] = true;
    }
    model.added_points.push_back(placed);
    model.added_radii.push_back(support_radius(placed, sites, problem.radius));
  }
  return model;
}

RealMatrix augmented_matrix(const LocalModel& model) {
  std::vector<Point> rows = model.base_centers;
  rows.insert(rows.end(), model.added_points.begin(), model.added_points.end());
  const auto basis = model.basis();
  return collocation_matrix_ext(rows, basis);
}

LocalFit fit_local_positive(const LocalProblem& problem, std::span<const Point> check_points) {
  problem.validate();
  LocalFit fit;
  if (problem.points.empty()) {
    fit.model = LocalModel::zero(problem.kernel);
    return fit;
  }

  LocalModel plain;
  plain.base_centers = problem.points;
  plain.base_kernel = problem.kernel;
  const UnconstrainedSolution sol = solve_unconstrained(problem);
  plain.coeffs = sol.coeffs;
  plain.quad_coeffs = sol.quad_coeffs;
  if (check_nonnegativity(plain, check_points, kNonnegativityTol)) {
    fit.model = std::move(plain);
    fit.residual = sol.residual;
    return fit;
  }

  const std::size_t n_data = problem.points.size();
  const Eigen::Map<const Eigen::VectorXd> f(problem.values.data(), static_cast<Eigen::Index>(n_data));
  double best_resid = 0.0;
  std::optional<LocalModel> best;
  double best_err = std::numeric_limits<double>::infinity();
  QPStatus last_status = QPStatus::NumericalFailure;

  for (std::size_t n_add : candidate_counts(n_data)) {
    LocalModel cand = augmented_model(problem, n_add);
    const RealMatrix A_hat = augmented_matrix(cand);
    const Eigen::MatrixXd B = A_hat.topRows(static_cast<Eigen::Index>(n_data)).cast<double>();
    const QPResult qp = solve_positive_qp(B, f, n_data);
    CandidateOutcome outcome{n_add, qp.status, std::nullopt};
    last_status = qp.status;
    if (qp.status == QPStatus::Solved) {
      cand.coeffs = qp.coeffs.cast<Real>();
      try {
        const LoocvResult loocv = loocv_errors(cand.coeffs, A_hat);
        if (check_nonnegativity(cand, check_points, kNonnegativityTol)) {
          outcome.loocv_max = loocv.max_norm;
          if (loocv.max_norm < best_err) {
            best_err = loocv.max_norm;
            best_resid = static_cast<double>(
                (A_hat.topRows(static_cast<Eigen::Index>(n_data)) * cand.coeffs - f.cast<Real>())
                    .lpNorm<Eigen::Infinity>());
            best = std::move(cand);
          }
        }
      } catch (const NumericalFailure&) {
        // singular augmented matrix: candidate skipped
      }
    }
    fit.candidates.push_back(outcome);
  }

  if (!best) {
    throw PatchInfeasible("patch " + std::to_string(problem.patch_index) +
                              ": no constraint count yields a nonnegative fit (last status: " +
                              to_string(last_status) + ")",
                          problem.patch_index);
  }
  fit.model = std::move(*best);
  fit.residual = best_resid;
  return fit;
}

}  // namespace pcpu
