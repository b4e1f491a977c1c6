#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gpb/ensemble_io.h"
#include "gpb/errors.h"
#include "gpb/rng.h"
#include "gpb/sampling.h"
#include "gpb/stats.h"

namespace {

namespace fs = std::filesystem;

// Fraction of covariance entries (t_i, t_j), i <= j, i, j >= 1, whose
// analytic value lies within `z` standard errors of the sample mean of X_i X_j.
double band_coverage(const gpb::RowMatrix& x, const gpb::ProcessSpec& spec, const gpb::Grid& grid, double z) {
  const auto n = x.cols();
  const double M = static_cast<double>(x.rows());
  int inside = 0, total = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto prod = (x.col(i).array() * x.col(j).array()).eval();
      const double m = prod.mean();
      const double sd = std::sqrt((prod - m).square().sum() / (M - 1.0));
      const double target = gpb::kernel(spec, grid.at(i), grid.at(j));
      inside += std::abs(m - target) <= z * sd / std::sqrt(M);
      ++total;
    }
  }
  return static_cast<double>(inside) / total;
}

class ThreadGuard {
 public:
  ThreadGuard() : saved_(omp_get_max_threads()) {}
  ~ThreadGuard() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

TEST(Grid, Basics) {
  const gpb::Grid g(6);
  EXPECT_EQ(g.size(), 65u);
  EXPECT_EQ(g.at(0), 0.0);
  EXPECT_EQ(g.at(64), 1.0);
  EXPECT_EQ(g.step(), 1.0 / 64.0);
  EXPECT_THROW(gpb::Grid(-1), gpb::DomainError);
  EXPECT_THROW(gpb::Grid(gpb::Grid::kMaxLevel + 1), gpb::DomainError);
}

TEST(Rng, SubstreamsAreDeterministicAndDistinct) {
  std::vector<double> a(16), b(16), c(16);
  gpb::fill_standard_normal(5, 0, a);
  gpb::fill_standard_normal(5, 0, b);
  gpb::fill_standard_normal(5, 1, c);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_NE(gpb::substream_seed(1, 0), gpb::substream_seed(2, 0));
  EXPECT_NE(gpb::component_seed(1, 0), gpb::component_seed(1, 1));
}

TEST(Rng, StandardNormalMoments) {
  std::vector<double> x(200000);
  gpb::fill_standard_normal(9, 3, x);
  EXPECT_NEAR(gpb::mean(x), 0.0, 4.0 / std::sqrt(200000.0));
  EXPECT_NEAR(gpb::sample_sd(x), 1.0, 0.01);
}

TEST(Factor, PositiveDefiniteNeedsNoJitter) {
  const gpb::Matrix c = gpb::build_covariance_matrix(gpb::Fbm{0.5}, std::vector<double>{0.25, 0.5, 0.75, 1.0});
  const auto f = gpb::factor_covariance(c);
  EXPECT_EQ(f.jitter, 0.0);
  EXPECT_TRUE((f.lower * f.lower.transpose()).isApprox(c, 1e-14));
}

TEST(Factor, SingularMatrixGetsJitter) {
  gpb::Matrix c = gpb::Matrix::Ones(3, 3);
  const auto f = gpb::factor_covariance(c);
  EXPECT_GT(f.jitter, 0.0);
  EXPECT_LE(f.jitter, 1e-8);
}

TEST(Factor, IndefiniteMatrixReportsEigenvalue) {
  gpb::Matrix c(2, 2);
  c << 1.0, 2.0, 2.0, 1.0;
  try {
    gpb::factor_covariance(c);
    FAIL();
  } catch (const gpb::FactorizationError& e) {
    EXPECT_NEAR(e.smallest_eigenvalue(), -1.0, 1e-12);
  }
}

TEST(Cholesky, StartsAtZeroAndIsCentered) {
  const gpb::Grid grid(4);
  const auto ens = gpb::cholesky_sample(gpb::Bfbm{0.6, 1.4}, grid, 5000, 2);
  EXPECT_TRUE((ens.paths().col(0).array() == 0.0).all());
  int outside = 0;
  for (Eigen::Index i = 1; i < ens.paths().cols(); ++i) {
    const auto col = ens.paths().col(i);
    const double m = col.mean();
    const double sd = std::sqrt((col.array() - m).square().sum() / (5000.0 - 1.0));
    outside += std::abs(m) > 3.0 * sd / std::sqrt(5000.0);
  }
  EXPECT_LE(outside, 1);
}

TEST(Cholesky, ParallelMatchesSerialReference) {
  const gpb::Grid grid(6);
  for (const gpb::ProcessSpec& spec : {gpb::ProcessSpec{gpb::Sfbm{0.3}}, gpb::ProcessSpec{gpb::TimeChangedX{0.5, 0.8}}}) {
    const auto a = gpb::cholesky_sample(spec, grid, 37, 4).paths();
    const auto b = gpb::cholesky_sample_serial(spec, grid, 37, 4).paths();
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Cholesky, ThreadCountDoesNotChangeBits) {
  ThreadGuard guard;
  const gpb::Grid grid(7);
  omp_set_num_threads(1);
  const auto a = gpb::cholesky_sample(gpb::Bfbm{0.3, 0.5}, grid, 70, 8).paths();
  omp_set_num_threads(4);
  const auto b = gpb::cholesky_sample(gpb::Bfbm{0.3, 0.5}, grid, 70, 8).paths();
  EXPECT_TRUE(a == b);
}

TEST(Cholesky, EmpiricalCovarianceInBand) {
  const gpb::Grid grid(3);
  for (const gpb::ProcessSpec& spec : {gpb::ProcessSpec{gpb::Bfbm{0.6, 1.4}}, gpb::ProcessSpec{gpb::Sfbm{0.3}},
                                       gpb::ProcessSpec{gpb::LeiNualartX{0.8}}}) {
    const auto ens = gpb::cholesky_sample(spec, grid, 20000, 17);
    EXPECT_GE(band_coverage(ens.paths(), spec, grid, 3.5), 0.97) << gpb::family_name(spec);
  }
}

TEST(Circulant, EigenvaluesNonNegative) {
  for (double H : {0.2, 0.5, 0.8}) {
    for (double ev : gpb::circulant_eigenvalues(H, gpb::Grid(8))) EXPECT_GE(ev, -1e-10) << H;
  }
}

TEST(Circulant, ParallelEqualsSerialBitwise) {
  const gpb::Grid grid(8);
  const auto a = gpb::circulant_sample_fbm(0.7, grid, 33, 6).paths();
  const auto b = gpb::circulant_sample_fbm_serial(0.7, grid, 33, 6).paths();
  EXPECT_TRUE(a == b);
}

TEST(Circulant, BrownianIncrementsAreIid) {
  const gpb::Grid grid(5);
  const auto ens = gpb::circulant_sample_fbm(0.5, grid, 4000, 12);
  EXPECT_EQ(ens.sampler(), "circulant");
  const auto& x = ens.paths();
  std::vector<double> inc;
  for (Eigen::Index m = 0; m < x.rows(); ++m) inc.push_back(x(m, 7) - x(m, 6));
  EXPECT_NEAR(gpb::sample_sd(inc) * gpb::sample_sd(inc), grid.step(), 0.1 * grid.step());
  std::vector<double> a, b;
  for (Eigen::Index m = 0; m < x.rows(); ++m) {
    a.push_back(x(m, 1));
    b.push_back(x(m, 2) - x(m, 1));
  }
  double c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) c += a[i] * b[i];
  c /= static_cast<double>(a.size()) * grid.step();
  EXPECT_LT(std::abs(c), 4.0 / std::sqrt(4000.0));
}

TEST(Circulant, EmpiricalCovarianceInBand) {
  const gpb::Grid grid(3);
  const auto ens = gpb::circulant_sample_fbm(0.3, grid, 20000, 5);
  EXPECT_GE(band_coverage(ens.paths(), gpb::Fbm{0.3}, grid, 3.5), 0.97);
}

TEST(Sampling, IndependenceAcrossPaths) {
  const auto ens = gpb::sample_process(gpb::Fbm{0.7}, gpb::Grid(4), 20000, 3);
  const auto col = ens.paths().col(16);
  double num = 0.0, den = 0.0;
  for (Eigen::Index m = 0; m + 1 < col.size(); ++m) num += col(m) * col(m + 1);
  for (Eigen::Index m = 0; m < col.size(); ++m) den += col(m) * col(m);
  EXPECT_LT(std::abs(num / den), 3.0 / std::sqrt(20000.0));
}

TEST(Sampling, DispatchAndErrors) {
  const gpb::Grid grid(4);
  EXPECT_EQ(gpb::sample_process(gpb::Fbm{0.5}, grid, 2, 1).sampler(), "circulant");
  EXPECT_EQ(gpb::sample_process(gpb::Fbm{0.5}, grid, 2, 1, gpb::SamplerPolicy::kCholesky).sampler(), "cholesky");
  EXPECT_EQ(gpb::sample_process(gpb::Sfbm{0.3}, grid, 2, 1).sampler(), "cholesky");
  EXPECT_EQ(gpb::sample_process(gpb::Gprocess{0.7, 1.0}, grid, 2, 1).sampler().rfind("compose:", 0), 0u);
  EXPECT_THROW(gpb::sample_process(gpb::Fbm{1.5}, grid, 2, 1), gpb::DomainError);
  EXPECT_THROW(gpb::sample_process(gpb::Sfbm{0.3}, grid, 2, 1, gpb::SamplerPolicy::kCirculant), gpb::DomainError);
  EXPECT_THROW(gpb::sample_process(gpb::Yprocess{1.0}, grid, 2, 1), gpb::UnsupportedRegion);
  EXPECT_THROW(gpb::sample_process(gpb::Fbm{0.5}, grid, 0, 1), gpb::DomainError);
  EXPECT_THROW(gpb::sampler_policy_from_string("magic"), gpb::DomainError);
}

TEST(Sampling, Reproducible) {
  const gpb::Grid grid(5);
  for (const gpb::ProcessSpec& spec : {gpb::ProcessSpec{gpb::Fbm{0.3}}, gpb::ProcessSpec{gpb::Gprocess{0.7, 1.0}},
                                       gpb::ProcessSpec{gpb::Bfbm{0.6, 1.4}}}) {
    const auto a = gpb::sample_process(spec, grid, 9, 77);
    const auto b = gpb::sample_process(spec, grid, 9, 77);
    const auto c = gpb::sample_process(spec, grid, 9, 78);
    EXPECT_TRUE(a.paths() == b.paths());
    EXPECT_FALSE(a.paths() == c.paths());
    EXPECT_EQ(a.provenance(), b.provenance());
  }
}

TEST(Spectral, CovarianceApproximatesClosedForm) {
  for (double K : {0.5, 1.0, 1.5}) {
    const auto scheme = gpb::SpectralScheme::geometric(K);
    for (auto [u, v] : {std::pair{1.0, 1.0}, std::pair{0.1, 0.6}, std::pair{0.01, 0.02}}) {
      const double ref = gpb::cov_leinualartX(K, u, v);
      EXPECT_NEAR(gpb::spectral_covariance(scheme, u, v), ref, 1e-3 * ref) << K << " " << u << " " << v;
    }
  }
}

TEST(Spectral, SamplerStartsAtZero) {
  const auto scheme = gpb::SpectralScheme::geometric(0.8, 1e-8, 1e8, 256);
  const auto ens = gpb::spectral_sample_X(0.8, 0.5, scheme, gpb::Grid(4), 10, 1);
  EXPECT_TRUE((ens.paths().col(0).array() == 0.0).all());
  EXPECT_THROW(gpb::spectral_sample_X(0.5, std::nullopt, scheme, gpb::Grid(4), 10, 1), gpb::DomainError);
  gpb::SpectralScheme bad = scheme;
  bad.nodes.resize(1);
  bad.weights.resize(1);
  EXPECT_THROW(bad.validate(), gpb::DomainError);
}

TEST(EnsembleIo, RoundTrips) {
  const fs::path dir = fs::temp_directory_path() / "gpb_io_test";
  fs::create_directories(dir);
  const auto ens = gpb::sample_process(gpb::Bfbm{0.6, 1.4}, gpb::Grid(4), 3, 5);
  gpb::write_csv(ens, dir / "p.csv");
  gpb::write_binary(ens, dir / "p.bin");
  EXPECT_TRUE(gpb::read_binary(dir / "p.bin") == ens.paths());
  EXPECT_TRUE(gpb::read_csv(dir / "p.csv") == ens.paths());
  std::ifstream in(dir / "p.bin", std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "GPBE");
  EXPECT_EQ(fs::file_size(dir / "p.bin"), 4u + 4u + 8u + 8u + 3u * 17u * 8u);
  gpb::write_sidecar(ens, dir / "p.json");
  std::ifstream side(dir / "p.json");
  const auto j = nlohmann::json::parse(side);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["sampler"], "cholesky");
  fs::remove_all(dir);
}

TEST(EnsembleIo, SeventeenDigits) {
  EXPECT_EQ(std::stod(gpb::format_double(0.1)), 0.1);
  EXPECT_EQ(std::stod(gpb::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
