#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "gpb/grid.h"
#include "gpb/kernels.h"
#include "gpb/process.h"
#include "gpb/quadrature.h"
#include "gpb/sampling.h"
#include "gpb/specialfn.h"

namespace gpb {

struct WeightedComponent {
  double weight;
  ProcessSpec process;
};

/// A decomposition in law stored as the covariance identity
///   lhs_weight^2 R_lhs = sum_i weight_i^2 R_i
/// with mutually independent components.
struct DecompositionSpec {
  DecompositionKind kind;
  DecompositionParams params;
  ProcessSpec lhs;
  double lhs_weight = 1.0;
  std::vector<WeightedComponent> components;

  /// Throws DomainError for an empty, non-finite or all-zero-weight spec.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Instantiates the named decomposition with weights taken verbatim from
/// decomposition_constants. Throws DomainError / UnsupportedRegion.
DecompositionSpec make_decomposition(DecompositionKind kind, const DecompositionParams& params,
                                     const QuadratureSettings& settings = {});

/// Weighted sum of independently drawn components divided by lhs_weight;
/// the result has the lhs law. Component i is drawn from component_seed(seed, i).
PathEnsemble compose_paths(const DecompositionSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed);

struct IdentityReport {
  std::string spec;
  int grid_level = 0;
  double max_abs_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double worst_t = 0.0;
  double worst_s = 0.0;
  std::vector<double> times;
  Matrix errors;  // per-point |lhs - rhs|

  nlohmann::json to_json() const;
};

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kHeatCorrelationTolerance = 1e-3;

/// Compares lhs_weight^2 R_lhs with sum weight^2 R_i on grid x grid.
IdentityReport verify_covariance_identity(const DecompositionSpec& spec, const Grid& grid);

/// Compares the correlation matrices of cov_G and the heat-equation
/// covariance on t_1..t_{2^J}. Throws UnsupportedRegion when alpha >= 1/2.
IdentityReport verify_G_against_heat(double H, double gamma, const Grid& grid, const QuadratureSettings& settings = {});

}  // namespace gpb
