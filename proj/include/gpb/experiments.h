#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gpb/besov.h"
#include "gpb/process.h"
#include "gpb/quadrature.h"

namespace gpb {

struct VerdictThresholds {
  double max_drift = 0.25;        // max/min - 1 of the critical medians
  double super_offset = 0.15;     // alpha_super = alpha_crit + offset
  double min_super_ratio = 1.3;   // top/bottom median at alpha_super
};

struct ExperimentConfig {
  std::string id = "regularity";  // regularity, ynp or moment
  std::optional<ProcessSpec> process;
  std::vector<int> levels = {8, 10, 12};
  std::size_t M = 256;
  std::uint64_t seed = 1;
  NormParams norms;
  std::vector<double> alphas;     // empty: critical and super-critical only
  std::vector<double> times = {0.25, 0.5, 1.0};
  VerdictThresholds thresholds;

  void validate() const;
  nlohmann::json to_json() const;
};

// Moment identity E|X^{H,K}_t|^p = c_p^p C_K^{p/2} t^{HKp}.

struct MomentCheck {
  double t = 0.0;
  double p = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  double target = 0.0;
  double z = 0.0;  // (empirical - target) / SE
  bool pass = false;
};

struct MomentReport {
  double H = 0.0;
  double K = 0.0;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  double band = 3.0;
  std::vector<MomentCheck> checks;
  bool pass = false;

  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& file) const;
};

double moment_target(double H, double K, double t, double p);

MomentReport verify_moment_formula(double H, double K, const std::vector<double>& times,
                                   const std::vector<double>& p_list, std::size_t M, std::uint64_t seed);

// Increment variance bounds: increments F_h(t) = X^{H,K}_{t+h} - X^{H,K}_t.

struct LemmaOneConstants {
  double A_HK = 0.0;
  double B_HK = 0.0;
  double D_H = 0.0;
  double lambda_exp = 0.0;

  static LemmaOneConstants compute(double H, double K);
};

/// Var F_h(t) = Gamma(2-K) int int_{[t^{2H}, (t+h)^{2H}]^2} (u+v)^{K-2} du dv, closed form.
double lemma1_variance(double H, double K, double t, double h);
/// Same double integral by iterated quadrature.
QuadResult lemma1_variance_quadrature(double H, double K, double t, double h, const QuadratureSettings& settings = {});

struct LemmaOnePoint {
  double t = 0.0;
  double h = 0.0;
  double variance = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool small_t = false;  // t <= h uses the A bound, otherwise the B bound
  bool pass = false;
};

struct LemmaOneReport {
  double H = 0.0;
  double K = 0.0;
  LemmaOneConstants constants;
  double slack = 1e-12;
  std::vector<LemmaOnePoint> points;
  double max_ratio = 0.0;
  bool nonvacuous = false;        // some ratio > 0.2
  double quadrature_max_rel_err = 0.0;
  bool quadrature_pass = false;   // closed form within 1e-8 of quadrature
  bool pass = false;

  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& file) const;
};

/// Default h list 2^{-k}, k = 2..11.
std::vector<double> default_lemma1_h_list();

LemmaOneReport verify_lemma1_bounds(double H, double K, const std::vector<double>& h_list, int t_resolution = 50);

// Regularity: Besov-Orlicz norm distribution across grid levels.

struct RegularityCell {
  int level = 0;
  double alpha = 0.0;
  std::vector<double> values;  // per path
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct RegularityReport {
  ProcessSpec process;
  std::string sampler;
  std::vector<int> levels;
  std::vector<double> alphas;
  double alpha_critical = 0.0;
  double alpha_super = 0.0;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  NormParams norms;
  VerdictThresholds thresholds;
  std::vector<RegularityCell> cells;
  double critical_drift = 0.0;
  bool critical_pass = false;
  double super_ratio = 0.0;
  bool super_increasing = false;
  bool super_pass = false;  // auxiliary evidence, not a proved property

  const RegularityCell& cell(int level, double alpha) const;
  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& file) const;
};

RegularityReport run_regularity_experiment(const ProcessSpec& spec, const std::vector<double>& alpha_list,
                                           const std::vector<int>& levels, std::size_t M, std::uint64_t seed,
                                           const NormParams& params = {}, const VerdictThresholds& thresholds = {});

// Y_{n,p} statistic for X^{H,K}.

struct YnpLevel {
  int level = 0;
  std::vector<double> sup_values;           // per path sup_n sup_p p^{-1/2} Y_{n,p}
  double median = 0.0;
  std::vector<std::vector<double>> mean_ynp;  // [n-1][p index], mean over paths of Y_{n,p}^p
};

struct YnpReport {
  double H = 0.0;
  double K = 0.0;
  std::vector<int> levels;
  std::vector<double> p_list;
  int p_max = 256;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  double max_drift = 0.25;
  std::vector<YnpLevel> per_level;
  double drift = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& file) const;
};

YnpReport run_ynp_experiment(double H, double K, const std::vector<int>& levels, const std::vector<double>& p_list,
                             std::size_t M, std::uint64_t seed, int p_max = 256, double max_drift = 0.25);

/// sup_n sup_{p <= p_max} p^{-1/2} Y_{n,p} for every path of an ensemble.
std::vector<double> ynp_sup_per_path(const RowMatrix& paths, const Grid& grid, double H, double K, int p_max);

/// Values of fine-grid paths at the points of a coarser dyadic grid.
RowMatrix restrict_to_level(const RowMatrix& paths, int from_level, int to_level);

/// max/min - 1 of a list of positive medians (infinite if some median is 0).
double median_drift(const std::vector<double>& medians);

}  // namespace gpb
