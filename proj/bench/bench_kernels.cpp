// Serial reference kernels against their OpenMP counterparts.
#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "gpb/besov.h"
#include "gpb/sampling.h"

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, double max_diff) {
  std::printf("%-22s %10.4f %10.4f %8.2fx  max|diff|=%.3g\n", name, serial, parallel, serial / parallel, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gpb kernel benchmark"};
  int level = 10;
  std::size_t paths = 256;
  int reps = 3;
  int threads = 0;
  app.add_option("--level", level, "grid level J")->check(CLI::Range(4, 16));
  app.add_option("--paths", paths, "paths per run");
  app.add_option("--reps", reps, "repetitions (best time is reported)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const gpb::Grid grid(level);
  std::printf("J=%d M=%zu threads=%d\n", level, paths, omp_get_max_threads());
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  {
    const gpb::ProcessSpec spec = gpb::Bfbm{0.6, 1.4};
    gpb::RowMatrix a, b;
    const double ts = seconds([&] { a = gpb::cholesky_sample_serial(spec, grid, paths, 7).paths(); }, reps);
    const double tp = seconds([&] { b = gpb::cholesky_sample(spec, grid, paths, 7).paths(); }, reps);
    row("cholesky bfbm", ts, tp, (a - b).cwiseAbs().maxCoeff());
  }
  {
    const gpb::Grid fine(std::min(level + 4, 20));
    gpb::RowMatrix a, b;
    const double ts = seconds([&] { a = gpb::circulant_sample_fbm_serial(0.7, fine, paths, 7).paths(); }, reps);
    const double tp = seconds([&] { b = gpb::circulant_sample_fbm(0.7, fine, paths, 7).paths(); }, reps);
    row("circulant fbm (J+4)", ts, tp, (a - b).cwiseAbs().maxCoeff());
  }
  {
    const gpb::RowMatrix x = gpb::circulant_sample_fbm(0.5, grid, paths, 11).paths();
    gpb::NormReport a, b;
    const gpb::NormParams params;
    const double ts = seconds([&] { a = gpb::evaluate_norms_serial(x, grid, params); }, reps);
    const double tp = seconds([&] { b = gpb::evaluate_norms(x, grid, params); }, reps);
    double diff = 0.0;
    for (std::size_t m = 0; m < a.paths.size(); ++m) {
      diff = std::max(diff, std::abs(a.paths[m].besov_orlicz.value - b.paths[m].besov_orlicz.value));
    }
    row("besov-orlicz norms", ts, tp, diff);
  }
  return 0;
}
