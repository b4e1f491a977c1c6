#include "gpb/specialfn.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gpb/errors.h"

namespace gpb {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_K_open(double K, const char* what) {
  if (!(K > 0.0 && K < 2.0)) {
    throw DomainError(std::string(what) + ": requires 0<K<2, got K=" + fmt(K));
  }
}

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma: argument must be finite");
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer " + fmt(x));
  return std::tgamma(x);
}

double eval_cp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("c_p: requires p>=1, got p=" + fmt(p));
  if (p == 2.0) return 1.0;
  // log(c_p^p) = (p/2) log 2 + lgamma((p+1)/2) - log(pi)/2
  const double log_moment =
      0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi);
  return std::exp(log_moment / p);
}

double phi_K(double K, double x) {
  if (x == 0.0) return 0.0;
  const double lx = std::log(x);
  if (K == 1.0) return x * lx;
  return x * std::expm1((K - 1.0) * lx) / (K - 1.0);
}

double eval_CprimeK(double K) {
  require_K_open(K, "C'_K");
  if (K == 1.0) return 2.0 * std::numbers::ln2;
  return (phi_K(K, 2.0) - 2.0 * phi_K(K, 1.0)) / K;
}

double eval_CK(double K) {
  require_K_open(K, "C_K");
  return gamma_fn(2.0 - K) * eval_CprimeK(K);
}

double ck_integrand(double K, double theta) {
  const double one_minus = -std::expm1(-theta);
  return one_minus * one_minus * std::pow(theta, -1.0 - K);
}

std::string to_string(DecompositionKind kind) {
  switch (kind) {
    case DecompositionKind::kLeiNualart: return "lei";
    case DecompositionKind::kBardinaEsSebaiy: return "bardina";
    case DecompositionKind::kSfbmLow: return "sfbm-low";
    case DecompositionKind::kSfbmHigh: return "sfbm-high";
    case DecompositionKind::kHarnettNualart: return "harnett";
  }
  return "unknown";
}

DecompositionKind decomposition_kind_from_string(const std::string& name) {
  if (name == "lei" || name == "leinualart") return DecompositionKind::kLeiNualart;
  if (name == "bardina" || name == "bardinaessebaiy") return DecompositionKind::kBardinaEsSebaiy;
  if (name == "sfbm-low" || name == "sfbmlow") return DecompositionKind::kSfbmLow;
  if (name == "sfbm-high" || name == "sfbmhigh") return DecompositionKind::kSfbmHigh;
  if (name == "harnett" || name == "harnettnualart") return DecompositionKind::kHarnettNualart;
  throw DomainError("unknown decomposition name '" + name +
                    "' (expected lei, bardina, sfbm-low, sfbm-high or harnett)");
}

double const_c1(double K) {
  // Gamma(1-K) has a pole at K=1; c1 only enters the K<1 decomposition.
  if (!(K > 0.0 && K < 1.0 - 1e-6)) throw DomainError("c1: requires 0<K<1-1e-6, got K=" + fmt(K));
  return std::sqrt(K * std::pow(2.0, -K) / gamma_fn(1.0 - K));
}

double const_c2(double K) {
  if (!(K > 0.0 && K <= 1.0)) throw DomainError("c2: requires 0<K<=1, got K=" + fmt(K));
  return std::pow(2.0, 0.5 * (1.0 - K));
}

double const_a(double K) {
  if (!(K > 1.0 && K < 2.0)) throw DomainError("a: requires 1<K<2, got K=" + fmt(K));
  return std::sqrt(std::pow(2.0, 1.0 - K));
}

double const_b(double K) {
  if (!(K > 1.0 && K < 2.0)) throw DomainError("b: requires 1<K<2, got K=" + fmt(K));
  return std::sqrt(K * (K - 1.0) / (std::pow(2.0, K) * gamma_fn(2.0 - K)));
}

double const_c3(double H) {
  if (!(H > 0.0 && H < 0.5)) throw DomainError("c3: requires 0<H<1/2, got H=" + fmt(H));
  return std::sqrt(H * (1.0 - 2.0 * H) / gamma_fn(2.0 - 2.0 * H));
}

double const_c4(double H) {
  if (!(H > 0.5 && H < 1.0)) throw DomainError("c4: requires 1/2<H<1, got H=" + fmt(H));
  return std::sqrt(H * (2.0 * H - 1.0) / gamma_fn(2.0 - 2.0 * H));
}

NamedConstant const_kappa(double gamma, const QuadratureSettings& settings) {
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("kappa: requires 0<gamma<2, got gamma=" + fmt(gamma));
  const QuadResult r =
      quad_improper([gamma](double z) { return std::pow(z, gamma - 1.0) / (1.0 + z * z); }, settings);
  const double g = gamma_fn(gamma);
  return {"kappa", r.value / g, r.abs_error / g};
}

NamedConstant const_lambda(double H, double gamma, const QuadratureSettings& settings) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("lambda: requires 0<H<1, got H=" + fmt(H));
  if (!(gamma > 0.0)) throw DomainError("lambda: requires gamma>0, got gamma=" + fmt(gamma));
  const QuadResult r =
      quad_improper([H](double eta) { return std::pow(eta, 1.0 - 2.0 * H) / (1.0 + eta * eta); }, settings);
  const double pre =
      4.0 * std::numbers::pi / (gamma_fn(gamma) * gamma_fn(2.0 * H + 1.0) * std::sin(std::numbers::pi * H));
  return {"lambda", pre * r.value, pre * r.abs_error};
}

std::vector<NamedConstant> decomposition_constants(DecompositionKind kind, const DecompositionParams& p,
                                                   const QuadratureSettings& settings) {
  switch (kind) {
    case DecompositionKind::kLeiNualart:
      if (!(p.H > 0.0 && p.H < 1.0)) throw DomainError("lei: requires 0<H<1");
      return {{"c1", const_c1(p.K), 0.0}, {"c2", const_c2(p.K), 0.0}};
    case DecompositionKind::kBardinaEsSebaiy:
      if (!(p.H > 0.0 && p.H < 1.0)) throw DomainError("bardina: requires 0<H<1");
      if (!(p.H * p.K < 1.0)) throw DomainError("bardina: requires HK<1");
      return {{"a", const_a(p.K), 0.0}, {"b", const_b(p.K), 0.0}};
    case DecompositionKind::kSfbmLow:
      return {{"c3", const_c3(p.H), 0.0}};
    case DecompositionKind::kSfbmHigh:
      return {{"c4", const_c4(p.H), 0.0}};
    case DecompositionKind::kHarnettNualart: {
      if (!(p.H > 0.5 && p.H < 1.0)) throw DomainError("harnett: requires 1/2<H<1");
      if (!(p.gamma > 0.0 && p.gamma < 2.0 * p.H)) throw DomainError("harnett: requires 0<gamma<2H");
      const double alpha = 2.0 * p.H - p.gamma;
      if (!(alpha < 0.5)) {
        throw UnsupportedRegion("harnett: requires alpha=2H-gamma<1/2 so that X^{2alpha+1} exists, got alpha=" +
                                fmt(alpha));
      }
      return {const_kappa(p.gamma, settings), const_lambda(p.H, p.gamma, settings), {"alpha", alpha, 0.0}};
    }
  }
  throw DomainError("unknown decomposition kind");
}

}  // namespace gpb
