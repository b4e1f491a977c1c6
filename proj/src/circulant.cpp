#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <sstream>

#include "gpb/errors.h"
#include "gpb/rng.h"
#include "gpb/sampling.h"

namespace gpb {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)), size(n) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

class ForwardPlan {
 public:
  explicit ForwardPlan(std::size_t n) : n_(n) {
    FftwBuffer in(n);
    FftwBuffer out(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fftw planning failed");
  }
  ~ForwardPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  ForwardPlan(const ForwardPlan&) = delete;
  ForwardPlan& operator=(const ForwardPlan&) = delete;

  void execute(FftwBuffer& in, FftwBuffer& out) const { fftw_execute_dft(plan_, in.data, out.data); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_plan plan_;
};

double increment_autocovariance(double H, double step, std::size_t k) {
  const double h2 = 2.0 * H;
  const double kk = static_cast<double>(k);
  const double lag = 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
  return std::pow(step, h2) * lag;
}

std::vector<double> embedding_eigenvalues(double H, const Grid& grid, const ForwardPlan& plan) {
  const std::size_t n = grid.intervals();
  const std::size_t size = 2 * n;
  FftwBuffer in(size);
  FftwBuffer out(size);
  for (std::size_t j = 0; j < size; ++j) {
    const std::size_t lag = j <= n ? j : size - j;
    in.data[j][0] = increment_autocovariance(H, grid.step(), lag);
    in.data[j][1] = 0.0;
  }
  plan.execute(in, out);
  std::vector<double> lambda(size);
  for (std::size_t k = 0; k < size; ++k) lambda[k] = out.data[k][0];
  return lambda;
}

// Returns the clipped eigenvalues scaled by 1/(2n), or an empty vector when
// the embedding is not non-negative within tolerance.
std::vector<double> usable_spectrum(const std::vector<double>& lambda) {
  double lmax = 0.0;
  double lmin = 0.0;
  for (double l : lambda) {
    lmax = std::max(lmax, l);
    lmin = std::min(lmin, l);
  }
  if (lmin < -1e-10 * lmax) return {};
  std::vector<double> scale(lambda.size());
  const double inv = 1.0 / static_cast<double>(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) scale[k] = std::sqrt(std::max(lambda[k], 0.0) * inv);
  return scale;
}

// One path: Re(FFT(sqrt(lambda/2n) * (xi_1 + i xi_2))) gives the increments.
void draw_path(const ForwardPlan& plan, const std::vector<double>& scale, std::uint64_t seed, std::size_t m,
               FftwBuffer& in, FftwBuffer& out, std::vector<double>& normals, double* row, std::size_t n) {
  const std::size_t size = plan.size();
  fill_standard_normal(seed, m, normals);
  for (std::size_t k = 0; k < size; ++k) {
    in.data[k][0] = scale[k] * normals[2 * k];
    in.data[k][1] = scale[k] * normals[2 * k + 1];
  }
  plan.execute(in, out);
  double acc = 0.0;
  row[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += out.data[i][0];
    row[i + 1] = acc;
  }
}

PathEnsemble fallback(double H, const Grid& grid, std::size_t M, std::uint64_t seed, double lmin) {
  PathEnsemble chol = cholesky_sample(Fbm{H}, grid, M, seed);
  std::ostringstream notice;
  notice << "circulant embedding had eigenvalue " << lmin << "; fell back to cholesky";
  return PathEnsemble(chol.grid(), chol.paths(), seed, "cholesky", Fbm{H}, chol.jitter(), notice.str());
}

void check_args(double H, std::size_t M) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("circulant_sample_fbm: requires 0<H<1");
  if (M == 0) throw DomainError("circulant_sample_fbm: requires M>=1");
}

}  // namespace

std::vector<double> circulant_eigenvalues(double H, const Grid& grid) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("circulant_eigenvalues: requires 0<H<1");
  const ForwardPlan plan(2 * grid.intervals());
  return embedding_eigenvalues(H, grid, plan);
}

PathEnsemble circulant_sample_fbm(double H, const Grid& grid, std::size_t M, std::uint64_t seed) {
  check_args(H, M);
  const std::size_t n = grid.intervals();
  const ForwardPlan plan(2 * n);
  const std::vector<double> lambda = embedding_eigenvalues(H, grid, plan);
  const std::vector<double> scale = usable_spectrum(lambda);
  if (scale.empty()) return fallback(H, grid, M, seed, *std::min_element(lambda.begin(), lambda.end()));

  RowMatrix paths(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(n + 1));
#pragma omp parallel
  {
    FftwBuffer in(2 * n);
    FftwBuffer out(2 * n);
    std::vector<double> normals(4 * n);
#pragma omp for schedule(static)
    for (std::size_t m = 0; m < M; ++m) {
      draw_path(plan, scale, seed, m, in, out, normals, paths.row(static_cast<Eigen::Index>(m)).data(), n);
    }
  }
  return PathEnsemble(grid, std::move(paths), seed, "circulant", Fbm{H});
}

PathEnsemble circulant_sample_fbm_serial(double H, const Grid& grid, std::size_t M, std::uint64_t seed) {
  check_args(H, M);
  const std::size_t n = grid.intervals();
  const ForwardPlan plan(2 * n);
  const std::vector<double> lambda = embedding_eigenvalues(H, grid, plan);
  const std::vector<double> scale = usable_spectrum(lambda);
  if (scale.empty()) return fallback(H, grid, M, seed, *std::min_element(lambda.begin(), lambda.end()));

  RowMatrix paths(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(n + 1));
  FftwBuffer in(2 * n);
  FftwBuffer out(2 * n);
  std::vector<double> normals(4 * n);
  for (std::size_t m = 0; m < M; ++m) {
    draw_path(plan, scale, seed, m, in, out, normals, paths.row(static_cast<Eigen::Index>(m)).data(), n);
  }
  return PathEnsemble(grid, std::move(paths), seed, "circulant", Fbm{H});
}

}  // namespace gpb
