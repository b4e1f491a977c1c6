#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <span>
#include <vector>

#include "gpb/grid.h"
#include "gpb/sampling.h"

namespace gpb {

using PathView = std::span<const double>;

/// (2^{-J} sum_{i=1}^{2^J} |f(t_i)|^p)^{1/p}.
double lp_norm(PathView path, const Grid& grid, double p);

/// L^p norm over I(2^{-n}) of i -> f(t_{i + 2^{J-n}}) - f(t_i), i = 0..2^J - 2^{J-n} - 1,
/// with cell weight 2^{-J}.
double shifted_lp_norm(PathView path, const Grid& grid, double p, int n);

struct OrliczValue {
  double value = 0.0;
  int argmax_p = 1;      // integer p attaining the sup
  int last_p = 1;        // largest p evaluated before the sup was certified
  bool truncated = false;  // sup attained at p_max, larger p might exceed it
};

/// sup over integer p in [1, p_max] of p^{-1/beta} ||f||_{L^p}. Stops once
/// p^{-1/beta} max|f| falls below the running maximum, which certifies the
/// result because ||f||_{L^p} <= max|f| on a domain of measure <= 1.
OrliczValue orlicz_norm(PathView path, const Grid& grid, int p_max = 256, double beta = 2.0);

/// Same sup without early termination (reference).
OrliczValue orlicz_norm_bruteforce(PathView path, const Grid& grid, int p_max = 256, double beta = 2.0);

/// Orlicz norm of the n-shifted increments over I(2^{-n}).
OrliczValue shifted_orlicz_norm(PathView path, const Grid& grid, int n, int p_max = 256, double beta = 2.0,
                                bool early_exit = true);

/// max over n in [1, J] of 2^{n alpha} shifted_lp_norm(n).
double besov_seminorm(PathView path, const Grid& grid, double p, double alpha);

/// Orlicz norm of the path and of its increments at every dyadic lag,
/// enough to evaluate the Besov-Orlicz norm for any alpha.
struct OrliczProfile {
  OrliczValue path;
  std::vector<OrliczValue> shifted;  // index n - 1 for n = 1..J
};

OrliczProfile orlicz_profile(PathView path, const Grid& grid, int p_max = 256, double beta = 2.0,
                             bool early_exit = true);

struct BesovOrliczValue {
  double value = 0.0;
  double seminorm = 0.0;
  int n_star = 1;
  int p_star = 1;
};

BesovOrliczValue besov_orlicz_from_profile(const OrliczProfile& profile, double alpha);

/// ||f||_{L^Phi} + max_n 2^{n alpha} ||f(. + 2^{-n}) - f||_{L^Phi(I(2^{-n}))}.
double besov_orlicz_norm(PathView path, const Grid& grid, double alpha, int p_max = 256, double beta = 2.0);

/// Double max over (n, p) evaluated cell by cell without early termination.
double besov_orlicz_norm_bruteforce(PathView path, const Grid& grid, double alpha, int p_max = 256,
                                    double beta = 2.0);

/// Y_{n,p} = 2^{nHK} ||f(. + 2^{-n}) - f||_{L^p(I(2^{-n}))}.
double ynp_statistic(PathView path, const Grid& grid, double H, double K, int n, double p);

/// sup_{n <= J} sup_{p <= p_max} p^{-1/2} Y_{n,p}.
double ynp_sup(PathView path, const Grid& grid, double H, double K, int p_max = 256);

struct NormParams {
  double alpha = 0.5;
  double beta = 2.0;
  int p_max = 256;
  std::vector<double> p_list = {1.0, 2.0, 4.0, 8.0};
  std::optional<double> ynp_exponent;  // HK; enables the Y_{n,p} table

  void validate(int level) const;
};

struct PathNorms {
  std::vector<double> lp;              // per p_list
  OrliczValue orlicz;
  std::vector<double> besov_seminorm;  // per p_list
  BesovOrliczValue besov_orlicz;
  std::vector<std::vector<double>> ynp;  // [n-1][p index]
};

struct NormReport {
  NormParams params;
  int grid_level = 0;
  std::vector<PathNorms> paths;

  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& file) const;
};

PathNorms evaluate_path_norms(PathView path, const Grid& grid, const NormParams& params);

/// Per-path evaluation parallel over paths; bit-identical to the serial version.
NormReport evaluate_norms(const RowMatrix& paths, const Grid& grid, const NormParams& params);
NormReport evaluate_norms_serial(const RowMatrix& paths, const Grid& grid, const NormParams& params);

}  // namespace gpb
