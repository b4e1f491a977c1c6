#include "gpb/kernels.h"

#include <cmath>
#include <sstream>
#include <utility>
#include <variant>

#include "gpb/errors.h"
#include "gpb/specialfn.h"

namespace gpb {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Validates and orders the pair (t >= s) so that every kernel is exactly symmetric.
void check_times(double& t, double& s) {
  if (!(t >= 0.0 && s >= 0.0)) throw DomainError("covariance kernels require t, s >= 0");
  if (t < s) std::swap(t, s);
}

void check_H(double H) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("requires 0<H<1");
}

void check_K(double K) {
  if (!(K > 0.0 && K < 2.0)) throw DomainError("requires 0<K<2");
}

double alpha_of(double H, double gamma) {
  if (!(H > 0.5 && H < 1.0)) throw DomainError("g: requires 1/2<H<1");
  if (!(gamma > 0.0 && gamma < 2.0 * H)) throw DomainError("g: requires 0<gamma<2H");
  const double alpha = 2.0 * H - gamma;
  if (!(alpha < 0.5)) {
    std::ostringstream os;
    os << "g: requires alpha=2H-gamma<1/2 so that X^{2alpha+1} exists, got alpha=" << alpha;
    throw UnsupportedRegion(os.str());
  }
  return alpha;
}

}  // namespace

double cov_fbm(double H, double t, double s) {
  check_H(H);
  check_times(t, s);
  const double h2 = 2.0 * H;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

double cov_bfbm(double H, double K, double t, double s) {
  check_H(H);
  check_K(K);
  if (!(H * K < 1.0)) throw DomainError("bfbm: requires HK<1");
  check_times(t, s);
  const double h2 = 2.0 * H;
  return std::pow(2.0, -K) *
         (std::pow(std::pow(t, h2) + std::pow(s, h2), K) - std::pow(std::abs(t - s), h2 * K));
}

double cov_sfbm(double H, double t, double s) {
  check_H(H);
  check_times(t, s);
  const double h2 = 2.0 * H;
  return std::pow(s, h2) + std::pow(t, h2) - 0.5 * (std::pow(s + t, h2) + std::pow(std::abs(s - t), h2));
}

double cov_leinualartX(double K, double u, double v) {
  check_K(K);
  check_times(u, v);
  // Gamma(2-K)/K * [phi(u+v) - phi(u) - phi(v)]; the linear part of phi cancels.
  return gamma_fn(2.0 - K) / K * (phi_K(K, u + v) - phi_K(K, u) - phi_K(K, v));
}

double cov_timechangedX(double H, double K, double t, double s) {
  check_H(H);
  check_times(t, s);
  return cov_leinualartX(K, std::pow(t, 2.0 * H), std::pow(s, 2.0 * H));
}

double cov_Yprocess(double K, double u, double v) {
  check_K(K);
  if (!(u >= 0.0 && v >= 0.0) || u + v == 0.0) throw DomainError("y: requires u, v >= 0 with u+v>0");
  return gamma_fn(2.0 - K) * std::pow(u + v, K - 2.0);
}

GKernel::GKernel(double H, double gamma, const QuadratureSettings& settings)
    : alpha_(alpha_of(H, gamma)),
      kappa_(const_kappa(gamma, settings).value),
      lambda_(const_lambda(H, gamma, settings).value) {}

double GKernel::operator()(double t, double s) const {
  return kappa_ * cov_fbm(0.5 * alpha_, t, s) + lambda_ * cov_leinualartX(2.0 * alpha_ + 1.0, t, s);
}

double cov_G(double H, double gamma, double t, double s) {
  check_times(t, s);
  return GKernel(H, gamma)(t, s);
}

double kernel(const ProcessSpec& spec, double t, double s) {
  return std::visit(overloaded{
                        [&](const Fbm& p) { return cov_fbm(p.H, t, s); },
                        [&](const Bfbm& p) { return cov_bfbm(p.H, p.K, t, s); },
                        [&](const Sfbm& p) { return cov_sfbm(p.H, t, s); },
                        [&](const LeiNualartX& p) { return cov_leinualartX(p.K, t, s); },
                        [&](const TimeChangedX& p) { return cov_timechangedX(p.H, p.K, t, s); },
                        [&](const Yprocess& p) { return cov_Yprocess(p.K, t, s); },
                        [&](const Gprocess& p) { return cov_G(p.H, p.gamma, t, s); },
                    },
                    spec);
}

Matrix build_covariance_matrix(const ProcessSpec& spec, const std::vector<double>& times) {
  validate(spec);
  const auto n = static_cast<Eigen::Index>(times.size());
  Matrix cov(n, n);
  std::function<double(double, double)> k;
  if (const auto* g = std::get_if<Gprocess>(&spec)) {
    k = GKernel(g->H, g->gamma);
  } else {
    k = [&spec](double t, double s) { return kernel(spec, t, s); };
  }
  // Probe once outside the parallel region so domain errors surface here.
  if (n > 0) (void)k(times[0], times[0]);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = k(times[i], times[j]);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

Matrix build_covariance_matrix(const ProcessSpec& spec, const Grid& grid) {
  return build_covariance_matrix(spec, grid.points());
}

Matrix correlation(const Matrix& cov) {
  Matrix out = cov;
  const Eigen::Index n = cov.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = std::sqrt(cov(i, i) * cov(j, j));
      out(i, j) = d > 0.0 ? cov(i, j) / d : 0.0;
    }
  }
  return out;
}

}  // namespace gpb
