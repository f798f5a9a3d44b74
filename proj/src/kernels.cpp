#include "pcpu/kernels.hpp"

#include "pcpu/errors.hpp"

#include <type_traits>

namespace pcpu {

void KernelSpec::validate() const {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("kernel shape parameter must be finite and positive, got " +
                      std::to_string(shape));
  }
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::WendlandC2:
      return "wendland";
    case KernelFamily::IMQ:
      return "imq";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "wendland" || name == "wendland_c2") return KernelFamily::WendlandC2;
  if (name == "imq") return KernelFamily::IMQ;
  throw ConfigError("unknown kernel '" + name + "' (expected 'wendland' or 'imq')");
}

namespace {

template <class T>
T rbf_value(const KernelSpec& spec, const T& r) {
  using std::sqrt;
  if (!(r >= 0)) {
    throw DomainError("eval_rbf: radius must be nonnegative");
  }
  const T er = static_cast<T>(spec.shape) * r;
  switch (spec.family) {
    case KernelFamily::WendlandC2: {
      if (er >= 1) return 0;
      const T t = 1 - er;
      const T t2 = t * t;
      return t2 * t2 * (4 * er + 1);
    }
    case KernelFamily::IMQ:
      return 1 / sqrt(1 + er * er);
  }
  return 0;
}

template <class M>
M collocation(std::span<const Point> points, std::span<const BasisFunction> basis) {
  if (points.empty() || basis.empty()) {
    throw DomainError("collocation_matrix: points and basis must be nonempty");
  }
  M m(points.size(), basis.size());
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    const BasisFunction& b = basis[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Point& p = points[static_cast<std::size_t>(i)];
      if constexpr (std::is_same_v<typename M::Scalar, double>) {
        m(i, k) = rbf_value<double>(b.spec, distance(p, b.center));
      } else if constexpr (std::is_same_v<typename M::Scalar, Real>) {
        m(i, k) = rbf_value<Real>(b.spec, distance_ext(p, b.center));
      } else {
        m(i, k) = rbf_value<Quad>(b.spec, distance_quad(p, b.center));
      }
    }
  }
  return m;
}

}  // namespace

double eval_rbf(const KernelSpec& spec, double r) { return rbf_value<double>(spec, r); }

Real eval_rbf_ext(const KernelSpec& spec, Real r) { return rbf_value<Real>(spec, r); }

Quad eval_rbf_quad(const KernelSpec& spec, const Quad& r) { return rbf_value<Quad>(spec, r); }

double BasisFunction::operator()(const Point& p) const { return eval_rbf(spec, distance(p, center)); }

Eigen::MatrixXd collocation_matrix(std::span<const Point> points,
                                   std::span<const BasisFunction> basis) {
  return collocation<Eigen::MatrixXd>(points, basis);
}

RealMatrix collocation_matrix_ext(std::span<const Point> points,
                                  std::span<const BasisFunction> basis) {
  return collocation<RealMatrix>(points, basis);
}

QuadMatrix collocation_matrix_quad(std::span<const Point> points,
                                   std::span<const BasisFunction> basis) {
  return collocation<QuadMatrix>(points, basis);
}

}  // namespace pcpu
