#include <cmath>

#include "gpb/errors.h"
#include "gpb/rng.h"
#include "gpb/sampling.h"

namespace gpb {

SpectralScheme SpectralScheme::geometric(double K, double theta_min, double theta_max, std::size_t n_nodes) {
  if (!(K > 0.0 && K < 2.0)) throw DomainError("spectral scheme: requires 0<K<2");
  if (!(theta_min > 0.0 && theta_max > theta_min)) throw DomainError("spectral scheme: requires 0<theta_min<theta_max");
  if (n_nodes < 2) throw DomainError("spectral scheme: requires at least 2 nodes");
  SpectralScheme s;
  s.K = K;
  s.theta_min = theta_min;
  s.theta_max = theta_max;
  s.nodes.resize(n_nodes);
  s.weights.resize(n_nodes);
  const double log_ratio = std::log(theta_max / theta_min) / static_cast<double>(n_nodes);
  auto boundary = [&](std::size_t j) { return theta_min * std::exp(log_ratio * static_cast<double>(j)); };
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const double lo = boundary(j);
    const double hi = boundary(j + 1);
    s.nodes[j] = std::sqrt(lo * hi);
    // Spectral mass of the cell; the top cell carries the whole tail.
    s.weights[j] = j + 1 == n_nodes ? std::pow(lo, -K) / K : (std::pow(lo, -K) - std::pow(hi, -K)) / K;
  }
  return s;
}

void SpectralScheme::validate() const {
  if (!(K > 0.0 && K < 2.0)) throw DomainError("spectral scheme: requires 0<K<2");
  if (!(theta_min > 0.0 && theta_max > 0.0)) throw DomainError("spectral scheme: requires theta_min>0, theta_max>0");
  if (nodes.size() < 2 || nodes.size() != weights.size()) throw DomainError("spectral scheme: requires >=2 nodes with weights");
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (!(nodes[j] > 0.0) || !(weights[j] >= 0.0)) throw DomainError("spectral scheme: invalid node or weight");
  }
}

double spectral_covariance(const SpectralScheme& scheme, double u, double v) {
  double acc = 0.0;
  for (std::size_t j = 0; j < scheme.nodes.size(); ++j) {
    const double th = scheme.nodes[j];
    acc += scheme.weights[j] * (-std::expm1(-th * u)) * (-std::expm1(-th * v));
  }
  return acc;
}

PathEnsemble spectral_sample_X(double K, std::optional<double> time_change_H, const SpectralScheme& scheme,
                               const Grid& grid, std::size_t M, std::uint64_t seed) {
  scheme.validate();
  if (scheme.K != K) throw DomainError("spectral scheme was built for a different K");
  if (time_change_H && !(*time_change_H > 0.0 && *time_change_H < 1.0)) {
    throw DomainError("spectral_sample_X: requires 0<H<1");
  }
  if (M == 0) throw DomainError("spectral_sample_X: requires M>=1");
  const auto n = static_cast<Eigen::Index>(grid.intervals());
  const auto nodes = static_cast<Eigen::Index>(scheme.nodes.size());
  Matrix design(n, nodes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = grid.at(static_cast<std::size_t>(i + 1));
    const double tau = time_change_H ? std::pow(t, 2.0 * *time_change_H) : t;
    for (Eigen::Index j = 0; j < nodes; ++j) {
      design(i, j) = -std::expm1(-scheme.nodes[static_cast<std::size_t>(j)] * tau) *
                     std::sqrt(scheme.weights[static_cast<std::size_t>(j)]);
    }
  }
  constexpr std::size_t kBlock = 32;
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(M), n + 1);
  const std::size_t blocks = (M + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * kBlock;
    const std::size_t width = std::min(kBlock, M - first);
    Matrix xi(nodes, static_cast<Eigen::Index>(width));
    for (std::size_t c = 0; c < width; ++c) {
      fill_standard_normal(seed, first + c, {xi.col(static_cast<Eigen::Index>(c)).data(), static_cast<std::size_t>(nodes)});
    }
    const Matrix x = design * xi;
    for (std::size_t c = 0; c < width; ++c) {
      out.row(static_cast<Eigen::Index>(first + c)).tail(n) = x.col(static_cast<Eigen::Index>(c)).transpose();
    }
  }
  ProcessSpec spec = time_change_H ? ProcessSpec{TimeChangedX{*time_change_H, K}} : ProcessSpec{LeiNualartX{K}};
  return PathEnsemble(grid, std::move(out), seed, "spectral", spec);
}

}  // namespace gpb
