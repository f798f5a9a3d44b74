#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace pcpu {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Extended precision used for local expansions. Flat IMQ patches have condition
/// numbers near 1e20, beyond what double can resolve.
using Real = long double;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

inline Real distance_ext(const Point& a, const Point& b) {
  return std::hypot(static_cast<Real>(a.x) - b.x, static_cast<Real>(a.y) - b.y);
}

/// Quad precision, the fallback when a local solve in Real misses the interpolation
/// tolerance.
using Quad = boost::multiprecision::float128;
using QuadVector = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;
using QuadMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;

inline Quad distance_quad(const Point& a, const Point& b) {
  const Quad dx = Quad(a.x) - b.x;
  const Quad dy = Quad(a.y) - b.y;
  return sqrt(dx * dx + dy * dy);
}

enum class KernelFamily { WendlandC2, IMQ };

/// A radial basis function: family plus shape parameter.
///
/// For WendlandC2 the support radius is 1/shape; IMQ is globally supported.
/// Both families are strictly positive definite in 2-D and take values in [0, 1].
struct KernelSpec {
  KernelFamily family = KernelFamily::IMQ;
  double shape = 1.0;

  static KernelSpec wendland(double shape) { return {KernelFamily::WendlandC2, shape}; }
  static KernelSpec imq(double shape) { return {KernelFamily::IMQ, shape}; }

  // Throws DomainError unless shape is finite and positive.
  void validate() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

double eval_rbf(const KernelSpec& spec, double r);
Real eval_rbf_ext(const KernelSpec& spec, Real r);
Quad eval_rbf_quad(const KernelSpec& spec, const Quad& r);

struct BasisFunction {
  Point center;
  KernelSpec spec;

  double operator()(const Point& p) const;
};

/// Entry (i, k) is basis[k] evaluated at points[i].
///
/// Not symmetric in general: rows and columns may use different point sets and
/// columns may mix kernel families and shapes.
Eigen::MatrixXd collocation_matrix(std::span<const Point> points,
                                   std::span<const BasisFunction> basis);
RealMatrix collocation_matrix_ext(std::span<const Point> points,
                                  std::span<const BasisFunction> basis);
QuadMatrix collocation_matrix_quad(std::span<const Point> points,
                                   std::span<const BasisFunction> basis);

}  // namespace pcpu
