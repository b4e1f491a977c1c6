#include "gpb/sampling.h"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gpb/decomposition.h"
#include "gpb/errors.h"
#include "gpb/rng.h"

namespace gpb {
namespace {

// Paths per block in the parallel triangular product. Fixed so that the
// block decomposition, and therefore every floating-point sum, is
// independent of the thread count.
constexpr std::size_t kPathBlock = 32;

std::vector<double> interior_times(const Grid& grid) {
  std::vector<double> t = grid.points();
  t.erase(t.begin());
  return t;
}

}  // namespace

PathEnsemble::PathEnsemble(Grid grid, RowMatrix paths, std::uint64_t seed, std::string sampler, ProcessSpec process,
                           double jitter, std::string notice)
    : grid_(grid),
      paths_(std::move(paths)),
      seed_(seed),
      sampler_(std::move(sampler)),
      process_(process),
      jitter_(jitter),
      notice_(std::move(notice)) {
  if (paths_.rows() < 1) throw DomainError("path ensemble requires M>=1");
  if (static_cast<std::size_t>(paths_.cols()) != grid_.size()) {
    throw DomainError("path ensemble width does not match the grid");
  }
}

nlohmann::json PathEnsemble::provenance() const {
  nlohmann::json j;
  j["process"] = to_json(process_);
  j["grid_level"] = grid_.level();
  j["paths"] = count();
  j["points"] = grid_.size();
  j["seed"] = seed_;
  j["sampler"] = sampler_;
  j["jitter"] = jitter_;
  if (!notice_.empty()) j["notice"] = notice_;
  return j;
}

CholeskyFactor factor_covariance(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) throw DomainError("covariance must be square and non-empty");
  const double mean_diag = cov.diagonal().mean();
  constexpr std::array<double, 8> kJitter = {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8};
  for (double eps : kJitter) {
    Matrix shifted = cov;
    shifted.diagonal().array() += eps * mean_diag;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Matrix lower = llt.matrixL();
    const auto d = lower.diagonal().array();
    if (!d.isFinite().all() || (d <= 0.0).any()) continue;
    return {std::move(lower), eps};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  std::ostringstream msg;
  msg.precision(17);
  msg << "Cholesky factorization failed with jitter up to 1e-8 * mean(diag); smallest eigenvalue " << lmin;
  throw FactorizationError(msg.str(), lmin);
}

RowMatrix sample_with_factor(const Matrix& lower, std::size_t M, std::uint64_t seed) {
  if (M == 0) throw DomainError("sampler requires M>=1");
  const Eigen::Index n = lower.rows();
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(M), n + 1);
  const std::size_t blocks = (M + kPathBlock - 1) / kPathBlock;
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * kPathBlock;
    const std::size_t width = std::min(kPathBlock, M - first);
    Matrix z(n, static_cast<Eigen::Index>(width));
    for (std::size_t c = 0; c < width; ++c) {
      fill_standard_normal(seed, first + c, {z.col(static_cast<Eigen::Index>(c)).data(), static_cast<std::size_t>(n)});
    }
    const Matrix x = lower.triangularView<Eigen::Lower>() * z;
    for (std::size_t c = 0; c < width; ++c) {
      out.row(static_cast<Eigen::Index>(first + c)).tail(n) = x.col(static_cast<Eigen::Index>(c)).transpose();
    }
  }
  return out;
}

PathEnsemble cholesky_sample(const ProcessSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed) {
  validate(spec);
  if (M == 0) throw DomainError("cholesky_sample: requires M>=1");
  const CholeskyFactor f = factor_covariance(build_covariance_matrix(spec, interior_times(grid)));
  return PathEnsemble(grid, sample_with_factor(f.lower, M, seed), seed, "cholesky", spec, f.jitter);
}

PathEnsemble cholesky_sample_serial(const ProcessSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed) {
  validate(spec);
  if (M == 0) throw DomainError("cholesky_sample: requires M>=1");
  const CholeskyFactor f = factor_covariance(build_covariance_matrix(spec, interior_times(grid)));
  const auto n = static_cast<std::size_t>(f.lower.rows());
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(n + 1));
  std::vector<double> z(n);
  for (std::size_t m = 0; m < M; ++m) {
    fill_standard_normal(seed, m, z);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) acc += f.lower(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
      out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i + 1)) = acc;
    }
  }
  return PathEnsemble(grid, std::move(out), seed, "cholesky", spec, f.jitter);
}

SamplerPolicy sampler_policy_from_string(const std::string& name) {
  if (name == "auto") return SamplerPolicy::kAuto;
  if (name == "cholesky") return SamplerPolicy::kCholesky;
  if (name == "circulant") return SamplerPolicy::kCirculant;
  if (name == "spectral") return SamplerPolicy::kSpectral;
  throw DomainError("unknown sampler '" + name + "' (expected auto, cholesky, circulant or spectral)");
}

std::string to_string(SamplerPolicy policy) {
  switch (policy) {
    case SamplerPolicy::kAuto: return "auto";
    case SamplerPolicy::kCholesky: return "cholesky";
    case SamplerPolicy::kCirculant: return "circulant";
    case SamplerPolicy::kSpectral: return "spectral";
  }
  return "unknown";
}

PathEnsemble sample_process(const ProcessSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed,
                            SamplerPolicy policy) {
  validate(spec);
  if (M == 0) throw DomainError("sample_process: requires M>=1");
  if (std::holds_alternative<Yprocess>(spec)) {
    throw UnsupportedRegion("y: the kernel is singular at t=0, no path sampler on [0,1]");
  }
  switch (policy) {
    case SamplerPolicy::kCirculant: {
      const auto* f = std::get_if<Fbm>(&spec);
      if (f == nullptr) throw DomainError("circulant sampler supports fbm only");
      return circulant_sample_fbm(f->H, grid, M, seed);
    }
    case SamplerPolicy::kSpectral: {
      if (const auto* x = std::get_if<LeiNualartX>(&spec)) {
        return spectral_sample_X(x->K, std::nullopt, SpectralScheme::geometric(x->K), grid, M, seed);
      }
      if (const auto* x = std::get_if<TimeChangedX>(&spec)) {
        return spectral_sample_X(x->K, x->H, SpectralScheme::geometric(x->K), grid, M, seed);
      }
      throw DomainError("spectral sampler supports x and xh only");
    }
    case SamplerPolicy::kCholesky:
      if (const auto* g = std::get_if<Gprocess>(&spec)) (void)GKernel(g->H, g->gamma);
      return cholesky_sample(spec, grid, M, seed);
    case SamplerPolicy::kAuto:
      break;
  }
  if (const auto* f = std::get_if<Fbm>(&spec)) return circulant_sample_fbm(f->H, grid, M, seed);
  if (const auto* g = std::get_if<Gprocess>(&spec)) {
    const auto decomposition =
        make_decomposition(DecompositionKind::kHarnettNualart, {g->H, 1.0, g->gamma});
    return compose_paths(decomposition, grid, M, seed);
  }
  return cholesky_sample(spec, grid, M, seed);
}

}  // namespace gpb
