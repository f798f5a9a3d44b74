#pragma once

#include "pcpu/geometry.hpp"
#include "pcpu/kernels.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pcpu {

/// Interpolation data of one patch.
struct LocalProblem {
  std::vector<Point> points;
  std::vector<double> values;
  KernelSpec kernel;
  Point center;
  double radius = 0.0;
  std::size_t patch_index = 0;

  void validate() const;
};

/// Fitted expansion on one patch: base kernels centred at the data sites followed by
/// Wendland C2 constraint bases centred at `added_points` with support `added_radii`.
struct LocalModel {
  std::vector<Point> base_centers;
  KernelSpec base_kernel;
  std::vector<Point> added_points;
  std::vector<double> added_radii;
  RealVector coeffs;
  QuadVector quad_coeffs;  // nonempty when the fit needed quad precision; then authoritative

  static LocalModel zero(const KernelSpec& kernel);

  std::size_t n_base() const { return base_centers.size(); }
  std::size_t n_added() const { return added_points.size(); }
  std::vector<BasisFunction> basis() const;
  double operator()(const Point& p) const { return static_cast<double>(value_ext(p)); }
  Real value_ext(const Point& p) const;
};

enum class QPStatus { Solved, Infeasible, NumericalFailure };

const char* to_string(QPStatus status);

struct QPResult {
  Eigen::VectorXd coeffs;
  QPStatus status = QPStatus::NumericalFailure;
  double kkt_residual = 0.0;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Weight on the squared base coefficients in the constrained objective. Keeps the
/// Hessian positive definite so the minimiser is unique.
inline constexpr double kBaseRegularization = 1e-12;

struct UnconstrainedSolution {
  RealVector coeffs;
  QuadVector quad_coeffs;  // set when the Real solve missed the tolerance
  double residual = 0.0;   // |A c - f|_inf
  double rcond = 0.0;
};

/// Solves A c = f for the base expansion in extended precision with one refinement
/// step, repeating the solve in quad precision when the residual exceeds
/// interpolation_tolerance. Throws NumericalFailure when the factorization breaks
/// down. A residual still above tolerance is returned, not enforced.
UnconstrainedSolution solve_unconstrained(const LocalProblem& problem);

/// Largest acceptable |A c - f|_inf for data f: 1e-8 (1 + |f|_inf).
double interpolation_tolerance(std::span<const double> values);

/// True iff model(p) >= -tol for every p in check_points.
bool check_nonnegativity(const LocalModel& model, std::span<const Point> check_points, double tol);

/// Minimises sum_{i >= n_base} c_i^2 + 1e-12 sum_{i < n_base} c_i^2 subject to
/// B c = f and c >= 0.
///
/// Phase one runs Lawson-Hanson NNLS on min |B c - f|; a nonzero optimal residual
/// certifies infeasibility. Phase two is a primal active-set method on the bound
/// constraints started from the NNLS point.
QPResult solve_positive_qp(const Eigen::MatrixXd& B, const Eigen::VectorXd& f, std::size_t n_base);

struct LoocvResult {
  RealVector errors;
  double max_norm = 0.0;
};

/// Rippa-type estimate e_i = c_i / (A^-1)_ii. Throws NumericalFailure when A is
/// singular or a diagonal entry of the inverse is below 1e-14 in magnitude.
LoocvResult loocv_errors(const RealVector& coeffs, const RealMatrix& A_hat);

/// Nonnegativity check set for a patch: `extra` plus a 20 x 20 grid over the
/// bounding square of the disk, restricted to the disk and the domain.
std::vector<Point> patch_check_points(const Point& center, double radius, const Rect& domain,
                                      std::span<const Point> extra);

/// Constraint counts tried for a patch with `n_data` sites: 1..n_data when
/// n_data <= 64, otherwise a doubling ladder 1, 2, 4, ... that always ends at n_data.
std::vector<std::size_t> candidate_counts(std::size_t n_data);

struct CandidateOutcome {
  std::size_t n_added = 0;
  QPStatus status = QPStatus::NumericalFailure;
  std::optional<double> loocv_max;  // set when the candidate was eligible for selection
};

struct LocalFit {
  LocalModel model;
  std::vector<CandidateOutcome> candidates;  // empty when the unconstrained fit was kept
  double residual = 0.0;                     // |model(x_i) - f_i|_inf over the patch data
};

/// Constraint bases for n_add sunflower points of the patch. Each constraint point
/// is paired with a distinct data site. A sunflower point is kept when its nearest
/// site is free and at most a third as far as the second nearest; otherwise it moves
/// to a quarter of the nearest-neighbour spacing away from the nearest free site.
/// With n_add = n_data every site then has its own constraint basis, worth at least
/// phi(1/2) there, and the constrained problem is feasible.
LocalModel augmented_model(const LocalProblem& problem, std::size_t n_add);

/// Square augmented matrix: rows are data sites then constraint points, columns are
/// base kernels then constraint bases.
RealMatrix augmented_matrix(const LocalModel& model);

/// Positive-constrained fit of one patch. Keeps the unconstrained fit when it is
/// nonnegative on `check_points`, otherwise sweeps the constraint count and keeps the
/// solvable candidate with the smallest max-norm LOOCV estimate (ties: fewest
/// constraints). Throws PatchInfeasible when no candidate solves.
LocalFit fit_local_positive(const LocalProblem& problem, std::span<const Point> check_points);

/// Tolerance for the positivity gate on local fits.
inline constexpr double kNonnegativityTol = 1e-10;

}  // namespace pcpu
