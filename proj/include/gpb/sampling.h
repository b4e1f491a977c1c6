#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpb/grid.h"
#include "gpb/kernels.h"
#include "gpb/process.h"

namespace gpb {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// M sampled paths on a dyadic grid with the provenance needed to redraw them.
class PathEnsemble {
 public:
  PathEnsemble(Grid grid, RowMatrix paths, std::uint64_t seed, std::string sampler, ProcessSpec process,
               double jitter = 0.0, std::string notice = {});

  const Grid& grid() const noexcept { return grid_; }
  const RowMatrix& paths() const noexcept { return paths_; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(paths_.rows()); }
  std::span<const double> path(std::size_t m) const {
    return {paths_.data() + m * static_cast<std::size_t>(paths_.cols()), static_cast<std::size_t>(paths_.cols())};
  }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& sampler() const noexcept { return sampler_; }
  const ProcessSpec& process() const noexcept { return process_; }
  double jitter() const noexcept { return jitter_; }
  const std::string& notice() const noexcept { return notice_; }

  nlohmann::json provenance() const;

 private:
  Grid grid_;
  RowMatrix paths_;
  std::uint64_t seed_;
  std::string sampler_;
  ProcessSpec process_;
  double jitter_;
  std::string notice_;
};

struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;  // epsilon actually applied (relative to mean diagonal)
};

/// Cholesky factor with diagonal jitter eps * mean(diag), eps in
/// {0, 1e-14, 1e-13, ..., 1e-8}. Throws FactorizationError carrying the
/// smallest eigenvalue when every level fails.
CholeskyFactor factor_covariance(const Matrix& cov);

/// Exact sampler: factorizes the covariance on t_1..t_{2^J} (t_0 = 0 is pinned to 0).
/// Paths are processed in fixed blocks in parallel; output does not depend on thread count.
PathEnsemble cholesky_sample(const ProcessSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed);

/// Same draws as cholesky_sample via a naive single-threaded triangular product.
/// Kept as the reference for the parallel kernel.
PathEnsemble cholesky_sample_serial(const ProcessSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed);

/// Draws M paths with a caller-supplied factor (used by composite samplers).
RowMatrix sample_with_factor(const Matrix& lower, std::size_t M, std::uint64_t seed);

/// Exact fBm sampler by circulant embedding of the increment autocovariance.
/// Falls back to cholesky_sample (recorded in notice()) if the embedding has
/// eigenvalues below -1e-10 * max eigenvalue.
PathEnsemble circulant_sample_fbm(double H, const Grid& grid, std::size_t M, std::uint64_t seed);
PathEnsemble circulant_sample_fbm_serial(double H, const Grid& grid, std::size_t M, std::uint64_t seed);

/// Eigenvalues of the circulant embedding of fBm increments at level J.
std::vector<double> circulant_eigenvalues(double H, const Grid& grid);

/// Finite Gaussian sum approximating int (1 - e^{-theta t}) theta^{-(1+K)/2} dW_theta.
/// Nodes sit at geometric cell midpoints; each weight is the exact spectral
/// mass int_cell theta^{-1-K} d theta, with the last cell extended to infinity.
struct SpectralScheme {
  double K = 0.5;
  double theta_min = 1e-8;
  double theta_max = 1e8;
  std::vector<double> nodes;
  std::vector<double> weights;

  static SpectralScheme geometric(double K, double theta_min = 1e-8, double theta_max = 1e8,
                                  std::size_t n_nodes = std::size_t{1} << 14);
  void validate() const;
};

/// Covariance of the finite-sum approximation (exact for the scheme).
double spectral_covariance(const SpectralScheme& scheme, double u, double v);

/// Approximate sampler for X^K (or X^{H,K} when time_change_H is set).
PathEnsemble spectral_sample_X(double K, std::optional<double> time_change_H, const SpectralScheme& scheme,
                               const Grid& grid, std::size_t M, std::uint64_t seed);

enum class SamplerPolicy { kAuto, kCholesky, kCirculant, kSpectral };

SamplerPolicy sampler_policy_from_string(const std::string& name);
std::string to_string(SamplerPolicy policy);

/// Dispatcher: fBm -> circulant, G -> composite via its decomposition,
/// everything else -> Cholesky, unless the policy forces a sampler.
PathEnsemble sample_process(const ProcessSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed,
                            SamplerPolicy policy = SamplerPolicy::kAuto);

}  // namespace gpb
