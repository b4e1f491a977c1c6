#pragma once

#include <cstddef>
#include <functional>

namespace gpb {

enum class InfiniteMap {
  kLog,       // theta = 1 - log(x), x in (0, 1]; suited to exponential tails
  kRational,  // theta = y^{-4}; flattens algebraic tails
};

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 16;
  InfiniteMap infinite_map = InfiniteMap::kRational;

  // Throws DomainError when a field violates its invariant.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Adaptive 21-point Gauss-Kronrod with epsilon extrapolation (GSL qags/qagp) on [a, b].
/// The integrand is never evaluated at the endpoints, so integrable
/// endpoint singularities are allowed. Throws QuadratureError carrying the
/// partial value if the tolerance is not met within max_subdivisions.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSettings& settings = {});

/// Integral over (0, inf). Split at 1: (0, 1] uses theta = x^4 so that
/// algebraic singularities at the origin are flattened, [1, inf) uses the
/// configured infinite-domain map.
QuadResult quad_improper(const Integrand& f, const QuadratureSettings& settings = {});

/// Iterated integral over [ax, bx] x [ay(x), by(x)] with optional interior
/// break points in y (e.g. a diagonal singularity y = x). The inner
/// tolerance is tightened by a factor 100 relative to the outer one.
QuadResult integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                        const std::function<double(double)>& ay, const std::function<double(double)>& by,
                        const std::function<double(double)>& y_break, const QuadratureSettings& settings = {});

}  // namespace gpb
