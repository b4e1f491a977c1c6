#include <algorithm>
#include <cmath>
#include <vector>
#include <numbers>

#include "gpb/errors.h"
#include "gpb/kernels.h"
#include "gpb/specialfn.h"

namespace gpb {

double heat_double_integral(double H, double gamma, double t, double s, const QuadratureSettings& settings) {
  if (!(H > 0.5 && H < 1.0)) throw DomainError("heat covariance: requires 1/2<H<1");
  if (!(gamma > 0.0 && gamma < 2.0 * H)) throw DomainError("heat covariance: requires 0<gamma<2H");
  if (!(t > 0.0 && s > 0.0)) throw DomainError("heat covariance: requires t, s > 0");
  // With a = t - u, b = s - v, w = a + b and z = a - b the inner integral over
  // z of |z - d|^{2H-2}, d = t - s, is elementary:
  //   I = 1/2 int_0^{t+s} w^{-gamma} [F(z_hi(w)) - F(z_lo(w))] dw.
  const double d = t - s;
  const double e = 2.0 * H - 1.0;
  auto F = [d, e](double z) {
    const double x = z - d;
    return std::copysign(std::pow(std::abs(x), e), x) / e;
  };
  auto g = [=](double w) {
    const double lo = std::max(-w, w - 2.0 * s);
    const double hi = std::min(w, 2.0 * t - w);
    return hi > lo ? std::pow(w, -gamma) * (F(hi) - F(lo)) : 0.0;
  };
  const double total = t + s;
  std::vector<double> pts = {0.0, total};
  for (double c : {s, t, std::abs(d)}) {
    if (c > 0.0 && c < total) pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // w = x^4 on the first piece absorbs the algebraic singularity at w = 0.
  const double x1 = std::pow(pts[1], 0.25);
  double acc = integrate(
                   [&g](double x) {
                     const double x2 = x * x;
                     return 4.0 * x2 * x * g(x2 * x2);
                   },
                   0.0, x1, settings)
                   .value;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) acc += integrate(g, pts[i], pts[i + 1], settings).value;
  return 0.5 * acc;
}

double heat_constant_D(int d, double beta, const QuadratureSettings& settings) {
  if (d < 1) throw DomainError("heat constant: requires d>=1");
  if (!(beta > 0.0 && beta < std::min(static_cast<double>(d), 2.0))) {
    throw DomainError("heat constant: requires 0<beta<min(d,2)");
  }
  const double dd = static_cast<double>(d);
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * dd) / gamma_fn(0.5 * dd);
  const QuadResult radial =
      quad_improper([beta](double r) { return std::pow(r, beta - 1.0) * std::exp(-0.5 * r * r); }, settings);
  return std::pow(2.0 * std::numbers::pi, -dd) / (1.0 - 0.5 * beta) * sphere * radial.value;
}

double cov_heat_numeric(double H, double gamma, double t, double s, const QuadratureSettings& settings,
                        int spatial_dim) {
  const double integral = heat_double_integral(H, gamma, t, s, settings);
  const double alpha_H = H * (2.0 * H - 1.0);
  const double beta = 2.0 * gamma;
  const double D = beta < std::min(static_cast<double>(spatial_dim), 2.0)
                       ? heat_constant_D(spatial_dim, beta, settings)
                       : 1.0;
  return D * alpha_H * integral;
}

}  // namespace gpb
