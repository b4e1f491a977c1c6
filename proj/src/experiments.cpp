#include "gpb/experiments.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "gpb/ensemble_io.h"
#include "gpb/errors.h"
#include "gpb/kernels.h"
#include "gpb/rng.h"
#include "gpb/sampling.h"
#include "gpb/specialfn.h"
#include "gpb/stats.h"

namespace gpb {
namespace {

constexpr double kNonvacuousRatio = 0.2;
constexpr double kLemmaQuadratureTolerance = 1e-8;

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  return os;
}

nlohmann::json norms_json(const NormParams& p) {
  nlohmann::json j = {{"alpha", p.alpha}, {"beta", p.beta}, {"p_max", p.p_max}, {"p_list", p.p_list}};
  if (p.ynp_exponent) j["ynp_exponent"] = *p.ynp_exponent;
  return j;
}

nlohmann::json thresholds_json(const VerdictThresholds& t) {
  return {{"max_drift", t.max_drift}, {"super_offset", t.super_offset}, {"min_super_ratio", t.min_super_ratio}};
}

void check_levels(const std::vector<int>& levels) {
  if (levels.empty()) throw DomainError("experiment needs at least one grid level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || levels[i] > Grid::kMaxLevel) throw DomainError("grid level out of range [1, 24]");
    if (i > 0 && levels[i] <= levels[i - 1]) throw DomainError("grid levels must be strictly ascending");
  }
}

void check_hk(double H, double K) {
  validate(TimeChangedX{H, K});
  if (!(H * K < 1.0)) throw DomainError("requires HK<1");
}

}  // namespace

RowMatrix restrict_to_level(const RowMatrix& paths, int from_level, int to_level) {
  if (to_level < 1 || to_level > from_level) throw DomainError("can only restrict to a coarser level");
  if (static_cast<std::size_t>(paths.cols()) != Grid(from_level).size()) {
    throw DomainError("path length does not match the source level");
  }
  const Eigen::Index stride = Eigen::Index{1} << (from_level - to_level);
  const auto n = static_cast<Eigen::Index>(Grid(to_level).size());
  RowMatrix out(paths.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) out.col(j) = paths.col(j * stride);
  return out;
}

double median_drift(const std::vector<double>& medians) {
  if (medians.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(medians.begin(), medians.end());
  if (*lo <= 0.0) return *hi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return *hi / *lo - 1.0;
}

void ExperimentConfig::validate() const {
  if (id != "regularity" && id != "ynp" && id != "moment") {
    throw DomainError("unknown experiment '" + id + "' (expected regularity, ynp or moment)");
  }
  check_levels(levels);
  if (M < 100) throw DomainError("statistical suites require M>=100");
  norms.validate(levels.front());
  if (!process) throw DomainError("experiment '" + id + "' requires a process");
  gpb::validate(*process);
  if (id != "regularity" && !std::holds_alternative<TimeChangedX>(*process)) {
    throw DomainError("experiment '" + id + "' runs on the time-changed process xh");
  }
  if (id == "moment") {
    for (double t : times) {
      if (!(t >= 0.0 && t <= 1.0)) throw DomainError("moment times must lie in [0, 1]");
    }
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  if (process) j["process"] = gpb::to_json(*process);
  j["levels"] = levels;
  j["M"] = M;
  j["seed"] = seed;
  j["norms"] = norms_json(norms);
  j["alphas"] = alphas;
  j["times"] = times;
  j["thresholds"] = thresholds_json(thresholds);
  return j;
}

double moment_target(double H, double K, double t, double p) {
  return std::pow(eval_cp(p), p) * std::pow(eval_CK(K), p / 2.0) * std::pow(t, H * K * p);
}

MomentReport verify_moment_formula(double H, double K, const std::vector<double>& times,
                                   const std::vector<double>& p_list, std::size_t M, std::uint64_t seed) {
  validate(TimeChangedX{H, K});
  if (M < 2) throw DomainError("moment check needs M>=2");
  for (double p : p_list) {
    if (p != 1.0 && p != 2.0 && p != 4.0) throw DomainError("moment check supports p in {1, 2, 4}");
  }
  std::vector<double> positive;
  for (double t : times) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("moment times must lie in [0, 1]");
    if (t > 0.0) positive.push_back(t);
  }
  RowMatrix draws;
  if (!positive.empty()) {
    const CholeskyFactor f = factor_covariance(build_covariance_matrix(TimeChangedX{H, K}, positive));
    draws = sample_with_factor(f.lower, M, seed);
  }

  MomentReport report{H, K, M, seed, 3.0, {}, true};
  for (double p : p_list) {
    std::size_t col = 0;
    for (double t : times) {
      MomentCheck c;
      c.t = t;
      c.p = p;
      if (t > 0.0) {
        ++col;
        std::vector<double> x(M);
        for (std::size_t m = 0; m < M; ++m) {
          x[m] = std::pow(std::abs(draws(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(col))), p);
        }
        c.empirical = mean(x);
        c.standard_error = standard_error(x);
        c.target = moment_target(H, K, t, p);
        c.z = (c.empirical - c.target) / c.standard_error;
        c.pass = std::abs(c.empirical - c.target) <= report.band * c.standard_error;
      } else {
        c.pass = true;
      }
      report.pass = report.pass && c.pass;
      report.checks.push_back(c);
    }
  }
  return report;
}

nlohmann::json MomentReport::to_json() const {
  nlohmann::json j = {{"experiment", "moment"}, {"H", H}, {"K", K}, {"M", M}, {"seed", seed}, {"band_se", band},
                      {"pass", pass}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"t", c.t}, {"p", c.p}, {"empirical", c.empirical}, {"standard_error", c.standard_error},
                           {"target", c.target}, {"z", c.z}, {"pass", c.pass}});
  }
  return j;
}

void MomentReport::write_csv(const std::filesystem::path& file) const {
  auto os = open_out(file);
  os << "t,p,empirical,standard_error,target,z,pass\n";
  for (const auto& c : checks) {
    os << format_double(c.t) << ',' << format_double(c.p) << ',' << format_double(c.empirical) << ','
       << format_double(c.standard_error) << ',' << format_double(c.target) << ',' << format_double(c.z) << ','
       << (c.pass ? 1 : 0) << '\n';
  }
}

LemmaOneConstants LemmaOneConstants::compute(double H, double K) {
  check_hk(H, K);
  LemmaOneConstants c;
  const double g = gamma_fn(2.0 - K);
  c.D_H = H * std::exp2(std::max(1.0, 2.0 * H));
  c.A_HK = std::exp2(H * K) * std::sqrt(g * eval_CprimeK(K));
  c.B_HK = std::exp2(0.5 * (K - 1.0)) * c.D_H * std::sqrt(g);
  c.lambda_exp = 1.0 - H * K;
  return c;
}

double lemma1_variance(double H, double K, double t, double h) {
  const double a = std::pow(t, 2.0 * H);
  const double b = std::pow(t + h, 2.0 * H);
  const double c = a + b;
  const double d = b - a;
  if (d < 0.125 * c) {
    // Even Taylor terms of the second difference around c; the direct form cancels when h << t.
    const double r2 = (d / c) * (d / c);
    double term = std::pow(c, K - 2.0) * d * d;  // k = 1
    double sum = term;
    for (int k = 2; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
      term *= r2 * (K - (2 * k - 2)) * (K - (2 * k - 1)) / ((2.0 * k - 1.0) * (2.0 * k));
      sum += term;
    }
    return gamma_fn(2.0 - K) * sum;
  }
  auto g = [K](double x) { return phi_K(K, x) / K; };
  return gamma_fn(2.0 - K) * ((g(2.0 * b) - g(a + b)) - (g(a + b) - g(2.0 * a)));
}

QuadResult lemma1_variance_quadrature(double H, double K, double t, double h, const QuadratureSettings& settings) {
  const double a = std::pow(t, 2.0 * H);
  const double b = std::pow(t + h, 2.0 * H);
  auto f = [K](double u, double v) { return std::pow(u + v, K - 2.0); };
  auto lo = [a](double) { return a; };
  auto hi = [b](double) { return b; };
  QuadResult r = integrate_2d(f, a, b, lo, hi, {}, settings);
  const double g = gamma_fn(2.0 - K);
  r.value *= g;
  r.abs_error *= g;
  return r;
}

std::vector<double> default_lemma1_h_list() {
  std::vector<double> h;
  for (int k = 2; k <= 11; ++k) h.push_back(std::exp2(-k));
  return h;
}

LemmaOneReport verify_lemma1_bounds(double H, double K, const std::vector<double>& h_list, int t_resolution) {
  check_hk(H, K);
  if (h_list.empty()) throw DomainError("lemma1 check needs at least one h");
  if (t_resolution < 2) throw DomainError("lemma1 check needs t_resolution>=2");
  for (double h : h_list) {
    if (!(h > 0.0 && h < 0.5)) throw DomainError("lemma1 check requires 0<h<1/2");
  }
  LemmaOneReport report;
  report.H = H;
  report.K = K;
  report.constants = LemmaOneConstants::compute(H, K);
  const double A2 = report.constants.A_HK * report.constants.A_HK;
  const double B2 = report.constants.B_HK * report.constants.B_HK;
  report.pass = true;
  for (double h : h_list) {
    for (int i = 0; i < t_resolution; ++i) {
      LemmaOnePoint pt;
      pt.h = h;
      pt.t = (1.0 - h) * static_cast<double>(i) / static_cast<double>(t_resolution - 1);
      pt.variance = lemma1_variance(H, K, pt.t, h);
      pt.small_t = pt.t <= h;
      pt.bound = pt.small_t ? A2 * std::pow(h, 2.0 * H * K)
                            : B2 * h * h * std::pow(pt.t, -2.0 * report.constants.lambda_exp);
      pt.ratio = pt.variance / pt.bound;
      pt.pass = pt.variance <= pt.bound * (1.0 + report.slack);
      report.max_ratio = std::max(report.max_ratio, pt.ratio);
      report.pass = report.pass && pt.pass;
      report.points.push_back(pt);
    }
  }
  report.nonvacuous = report.max_ratio > kNonvacuousRatio;

  // Closed form against quadrature at t = 0, the middle of the grid and t = 1 - h.
  QuadratureSettings qs;
  qs.abs_tol = 1e-14;
  qs.rel_tol = 1e-10;
  for (double h : h_list) {
    for (double t : {0.0, 0.5 * (1.0 - h), 1.0 - h}) {
      const double closed = lemma1_variance(H, K, t, h);
      const double quad = lemma1_variance_quadrature(H, K, t, h, qs).value;
      report.quadrature_max_rel_err = std::max(report.quadrature_max_rel_err, std::abs(closed - quad) / std::abs(quad));
    }
  }
  report.quadrature_pass = report.quadrature_max_rel_err <= kLemmaQuadratureTolerance;
  report.pass = report.pass && report.nonvacuous && report.quadrature_pass;
  return report;
}

nlohmann::json LemmaOneReport::to_json() const {
  nlohmann::json j = {{"experiment", "lemma1"},
                      {"H", H},
                      {"K", K},
                      {"constants",
                       {{"A_HK", constants.A_HK},
                        {"B_HK", constants.B_HK},
                        {"D_H", constants.D_H},
                        {"lambda_exp", constants.lambda_exp}}},
                      {"slack", slack},
                      {"max_ratio", max_ratio},
                      {"nonvacuous", nonvacuous},
                      {"quadrature_max_rel_err", quadrature_max_rel_err},
                      {"quadrature_pass", quadrature_pass},
                      {"pass", pass},
                      {"points", points.size()}};
  const LemmaOnePoint* worst = nullptr;
  for (const auto& p : points) {
    if (worst == nullptr || p.ratio > worst->ratio) worst = &p;
  }
  if (worst != nullptr) {
    j["worst"] = {{"t", worst->t}, {"h", worst->h}, {"variance", worst->variance}, {"bound", worst->bound},
                  {"ratio", worst->ratio}, {"bound_kind", worst->small_t ? "A" : "B"}};
  }
  return j;
}

void LemmaOneReport::write_csv(const std::filesystem::path& file) const {
  auto os = open_out(file);
  os << "t,h,variance,bound,bound_kind,ratio,pass\n";
  for (const auto& p : points) {
    os << format_double(p.t) << ',' << format_double(p.h) << ',' << format_double(p.variance) << ','
       << format_double(p.bound) << ',' << (p.small_t ? 'A' : 'B') << ',' << format_double(p.ratio) << ','
       << (p.pass ? 1 : 0) << '\n';
  }
}

const RegularityCell& RegularityReport::cell(int level, double alpha) const {
  for (const auto& c : cells) {
    if (c.level == level && c.alpha == alpha) return c;
  }
  throw DomainError("no regularity cell for the requested (level, alpha)");
}

RegularityReport run_regularity_experiment(const ProcessSpec& spec, const std::vector<double>& alpha_list,
                                           const std::vector<int>& levels, std::size_t M, std::uint64_t seed,
                                           const NormParams& params, const VerdictThresholds& thresholds) {
  validate(spec);
  check_levels(levels);
  if (M < 1) throw DomainError("regularity experiment requires M>=1");
  params.validate(levels.front());

  RegularityReport report;
  report.process = spec;
  report.levels = levels;
  report.M = M;
  report.seed = seed;
  report.norms = params;
  report.thresholds = thresholds;
  report.alpha_critical = critical_exponent(spec);
  report.alpha_super = report.alpha_critical + thresholds.super_offset;
  std::set<double> alphas(alpha_list.begin(), alpha_list.end());
  alphas.insert(report.alpha_critical);
  alphas.insert(report.alpha_super);
  for (double a : alphas) {
    if (!(a > 0.0)) throw DomainError("regularity exponents must be > 0");
  }
  report.alphas.assign(alphas.begin(), alphas.end());

  // One ensemble at the finest level; coarser levels see the same paths
  // restricted to their grid points, which is exact in law at every level.
  const PathEnsemble fine = sample_process(spec, Grid(levels.back()), M, seed);
  report.sampler = fine.sampler();
  for (int level : levels) {
    const Grid grid(level);
    const RowMatrix paths = restrict_to_level(fine.paths(), levels.back(), level);
    std::vector<OrliczProfile> profiles(M);
    const auto cols = static_cast<std::size_t>(paths.cols());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t m = 0; m < M; ++m) {
      profiles[m] = orlicz_profile({paths.row(static_cast<Eigen::Index>(m)).data(), cols}, grid, params.p_max,
                                   params.beta, true);
    }
    for (double alpha : report.alphas) {
      RegularityCell cell;
      cell.level = level;
      cell.alpha = alpha;
      cell.values.reserve(M);
      for (const auto& prof : profiles) cell.values.push_back(besov_orlicz_from_profile(prof, alpha).value);
      cell.median = median(cell.values);
      cell.q1 = quantile(cell.values, 0.25);
      cell.q3 = quantile(cell.values, 0.75);
      cell.max = *std::max_element(cell.values.begin(), cell.values.end());
      report.cells.push_back(std::move(cell));
    }
  }

  std::vector<double> crit;
  std::vector<double> super;
  for (int level : levels) {
    crit.push_back(report.cell(level, report.alpha_critical).median);
    super.push_back(report.cell(level, report.alpha_super).median);
  }
  report.critical_drift = median_drift(crit);
  report.critical_pass = report.critical_drift <= thresholds.max_drift;
  report.super_increasing = true;
  for (std::size_t i = 1; i < super.size(); ++i) report.super_increasing = report.super_increasing && super[i] > super[i - 1];
  report.super_ratio = super.front() > 0.0 ? super.back() / super.front() : 0.0;
  report.super_pass = report.super_increasing && report.super_ratio >= thresholds.min_super_ratio;
  return report;
}

nlohmann::json RegularityReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = "regularity";
  j["process"] = gpb::to_json(process);
  j["sampler"] = sampler;
  j["levels"] = levels;
  j["alphas"] = alphas;
  j["alpha_critical"] = alpha_critical;
  j["alpha_super"] = alpha_super;
  j["M"] = M;
  j["seed"] = seed;
  j["norms"] = norms_json(norms);
  j["thresholds"] = thresholds_json(thresholds);
  j["verdicts"] = {
      {"critical_stability",
       {{"pass", critical_pass}, {"median_drift", critical_drift}, {"max_drift", thresholds.max_drift}}},
      {"supercritical_growth",
       {{"pass", super_pass},
        {"increasing", super_increasing},
        {"ratio", super_ratio},
        {"min_ratio", thresholds.min_super_ratio},
        {"auxiliary", true},
        {"note", "auxiliary evidence only: membership is proved at the critical exponent, non-membership above it "
                 "is not a proved statement"}}}};
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) {
    j["cells"].push_back({{"level", c.level}, {"alpha", c.alpha}, {"median", c.median}, {"q1", c.q1}, {"q3", c.q3},
                          {"iqr", c.q3 - c.q1}, {"max", c.max}, {"values", c.values}});
  }
  return j;
}

void RegularityReport::write_csv(const std::filesystem::path& file) const {
  auto os = open_out(file);
  os << "level,alpha,path,besov_orlicz\n";
  for (const auto& c : cells) {
    for (std::size_t m = 0; m < c.values.size(); ++m) {
      os << c.level << ',' << format_double(c.alpha) << ',' << m << ',' << format_double(c.values[m]) << '\n';
    }
  }
}

std::vector<double> ynp_sup_per_path(const RowMatrix& paths, const Grid& grid, double H, double K, int p_max) {
  if (static_cast<std::size_t>(paths.cols()) != grid.size()) throw DomainError("path length does not match the grid");
  std::vector<double> out(static_cast<std::size_t>(paths.rows()));
  const auto cols = static_cast<std::size_t>(paths.cols());
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index m = 0; m < paths.rows(); ++m) {
    out[static_cast<std::size_t>(m)] = ynp_sup({paths.row(m).data(), cols}, grid, H, K, p_max);
  }
  return out;
}

YnpReport run_ynp_experiment(double H, double K, const std::vector<int>& levels, const std::vector<double>& p_list,
                             std::size_t M, std::uint64_t seed, int p_max, double max_drift) {
  check_hk(H, K);
  check_levels(levels);
  if (M < 1) throw DomainError("ynp experiment requires M>=1");
  if (p_max < 1) throw DomainError("ynp experiment requires p_max>=1");
  for (double p : p_list) {
    if (!(p >= 1.0)) throw DomainError("ynp experiment requires p>=1");
  }
  YnpReport report{H, K, levels, p_list, p_max, M, seed, max_drift, {}, 0.0, false};
  std::vector<double> medians;
  const PathEnsemble fine = cholesky_sample(TimeChangedX{H, K}, Grid(levels.back()), M, seed);
  for (int level : levels) {
    const Grid grid(level);
    const RowMatrix paths = restrict_to_level(fine.paths(), levels.back(), level);
    const auto cols = static_cast<std::size_t>(paths.cols());
    YnpLevel row;
    row.level = level;
    row.sup_values = ynp_sup_per_path(paths, grid, H, K, p_max);
    row.median = median(row.sup_values);
    for (int n = 1; n <= level; ++n) {
      std::vector<double> means;
      for (double p : p_list) {
        double acc = 0.0;
        for (Eigen::Index m = 0; m < paths.rows(); ++m) {
          acc += std::pow(ynp_statistic({paths.row(m).data(), cols}, grid, H, K, n, p), p);
        }
        means.push_back(acc / static_cast<double>(M));
      }
      row.mean_ynp.push_back(std::move(means));
    }
    medians.push_back(row.median);
    report.per_level.push_back(std::move(row));
  }
  report.drift = median_drift(medians);
  report.pass = report.drift <= max_drift;
  return report;
}

nlohmann::json YnpReport::to_json() const {
  nlohmann::json j = {{"experiment", "ynp"}, {"H", H},         {"K", K},       {"levels", levels},
                      {"p_list", p_list},    {"p_max", p_max}, {"M", M},       {"seed", seed},
                      {"max_drift", max_drift}, {"median_drift", drift}, {"pass", pass}};
  j["per_level"] = nlohmann::json::array();
  for (const auto& r : per_level) {
    j["per_level"].push_back(
        {{"level", r.level}, {"median", r.median}, {"sup_values", r.sup_values}, {"mean_ynp_pow_p", r.mean_ynp}});
  }
  return j;
}

void YnpReport::write_csv(const std::filesystem::path& file) const {
  auto os = open_out(file);
  os << "level,path,ynp_sup\n";
  for (const auto& r : per_level) {
    for (std::size_t m = 0; m < r.sup_values.size(); ++m) {
      os << r.level << ',' << m << ',' << format_double(r.sup_values[m]) << '\n';
    }
  }
}

}  // namespace gpb
