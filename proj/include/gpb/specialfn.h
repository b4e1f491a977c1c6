#pragma once

#include <string>
#include <vector>

#include "gpb/quadrature.h"

namespace gpb {

double gamma_fn(double x);

/// Gaussian L^p scale c_p = (E|W_1|^p)^{1/p} for p >= 1.
double eval_cp(double p);

/// C_K = int_0^inf (1 - e^{-theta})^2 theta^{-1-K} dtheta = Gamma(2-K) C'_K, K in (0, 2).
double eval_CK(double K);

/// C'_K = int_0^1 int_0^1 (x + y)^{K-2} dx dy, K in (0, 2).
double eval_CprimeK(double K);

/// Integrand defining C_K, exposed so callers can cross-check eval_CK by quadrature.
double ck_integrand(double K, double theta);

/// phi_K(x) = (x^K - x) / (K - 1), continued by x log x at K = 1 and phi(0) = 0.
/// Second differences of phi_K / K reproduce the double integrals of
/// (u + v)^{K-2}; the linear part cancels in every such difference and is
/// subtracted to keep the K -> 1 limit free of cancellation.
double phi_K(double K, double x);

enum class DecompositionKind {
  kLeiNualart,       // c2 B^{HK} = B^{H,K} + c1 X^{H,K},  0 < K < 1
  kBardinaEsSebaiy,  // B^{H,K} = a B^{HK} + b X^{H,K},    1 < K < 2
  kSfbmLow,          // S^H = B^H + c3 X^{2H},              H < 1/2
  kSfbmHigh,         // B^H = S^H + c4 X^{2H},              H > 1/2
  kHarnettNualart,   // G = sqrt(kappa) B^{alpha/2} + sqrt(lambda) X^{2 alpha + 1}
};

std::string to_string(DecompositionKind kind);
DecompositionKind decomposition_kind_from_string(const std::string& name);

struct NamedConstant {
  std::string name;
  double value = 0.0;
  double error_estimate = 0.0;  // zero for closed forms
};

struct DecompositionParams {
  double H = 0.5;
  double K = 1.0;
  double gamma = 1.0;
};

/// Constants of the named decomposition. kappa and lambda are integrated
/// numerically; everything else is closed form. Throws DomainError naming
/// the violated constraint when the parameters are outside the validity region.
std::vector<NamedConstant> decomposition_constants(DecompositionKind kind, const DecompositionParams& params,
                                                   const QuadratureSettings& settings = {});

// Individual constants, each checking its own domain.
double const_c1(double K);
double const_c2(double K);
double const_a(double K);
double const_b(double K);
double const_c3(double H);
double const_c4(double H);
NamedConstant const_kappa(double gamma, const QuadratureSettings& settings = {});
NamedConstant const_lambda(double H, double gamma, const QuadratureSettings& settings = {});

}  // namespace gpb
