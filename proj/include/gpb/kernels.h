#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpb/grid.h"
#include "gpb/process.h"
#include "gpb/quadrature.h"

namespace gpb {

double cov_fbm(double H, double t, double s);

/// Bifractional kernel 2^{-K}((t^{2H} + s^{2H})^K - |t - s|^{2HK}).
double cov_bfbm(double H, double K, double t, double s);

double cov_sfbm(double H, double t, double s);

/// Covariance of X^K_u = int_0^inf (1 - e^{-theta u}) theta^{-(1+K)/2} dW_theta:
/// Gamma(2-K)/(K(K-1)) [(u+v)^K - u^K - v^K], with the entropy form at K = 1.
double cov_leinualartX(double K, double u, double v);

/// X^{H,K}_t = X^K_{t^{2H}}.
double cov_timechangedX(double H, double K, double t, double s);

/// E(Y_u Y_v) = Gamma(2-K)(u+v)^{K-2}; singular at u + v = 0.
double cov_Yprocess(double K, double u, double v);

/// kappa cov_fbm(alpha/2) + lambda cov_leinualartX(2 alpha + 1), alpha = 2H - gamma.
/// Throws UnsupportedRegion when alpha >= 1/2.
double cov_G(double H, double gamma, double t, double s);

/// Precomputed cov_G for repeated evaluation (kappa and lambda come from quadrature).
class GKernel {
 public:
  GKernel(double H, double gamma, const QuadratureSettings& settings = {});
  double operator()(double t, double s) const;
  double alpha() const noexcept { return alpha_; }
  double kappa() const noexcept { return kappa_; }
  double lambda() const noexcept { return lambda_; }

 private:
  double alpha_;
  double kappa_;
  double lambda_;
};

/// int_0^t int_0^s |u - v|^{2H-2} (t + s - u - v)^{-gamma} du dv, reduced to a
/// one-dimensional integral along u + v with the inner integral in closed form.
double heat_double_integral(double H, double gamma, double t, double s, const QuadratureSettings& settings = {});

/// Spatial constant D = (2 pi)^{-d} (1 - beta/2)^{-1} int_{R^d} e^{-|xi|^2/2} |xi|^{beta-d} d xi
/// by radial quadrature. Requires 0 < beta < min(d, 2).
double heat_constant_D(int d, double beta, const QuadratureSettings& settings = {});

/// E(u(t,0) u(s,0)) = D alpha_H I(t, s) with alpha_H = H(2H - 1) and beta = 2 gamma.
/// When no d-dimensional heat equation realizes gamma (2 gamma >= min(d, 2)),
/// D is taken as 1 and the value is the covariance of G defined through the
/// kernel (t + s)^{-gamma} directly.
double cov_heat_numeric(double H, double gamma, double t, double s, const QuadratureSettings& settings = {},
                        int spatial_dim = 3);

/// Kernel value of any process family at (t, s).
double kernel(const ProcessSpec& spec, double t, double s);

using Matrix = Eigen::MatrixXd;

/// Covariance matrix over the given time points (row-parallel).
Matrix build_covariance_matrix(const ProcessSpec& spec, const std::vector<double>& times);

/// Covariance matrix over all grid points t_0..t_{2^J}.
Matrix build_covariance_matrix(const ProcessSpec& spec, const Grid& grid);

/// Normalizes a covariance matrix to a correlation matrix; zero-variance
/// rows are left as zero.
Matrix correlation(const Matrix& cov);

}  // namespace gpb
