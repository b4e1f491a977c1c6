#include "gpb/besov.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "gpb/ensemble_io.h"
#include "gpb/errors.h"

namespace gpb {
namespace {

// Powers below this are flushed to zero: they cannot move a sum that
// contains the exact 1 contributed by the maximal element, and keeping them
// would drag the loops into subnormal arithmetic at large p.
constexpr double kFlush = 1e-250;
// Integer exponents up to this bound use repeated multiplication so that
// lp_norm and the incremental Orlicz loop produce identical bits.
constexpr double kMaxIntegerExponent = 1 << 16;
// Relative slack on the certified upper bound p^{-1/beta} max|f|.
constexpr double kBoundSlack = 1e-12;

void check_path(PathView path, const Grid& grid) {
  if (path.size() != grid.size()) throw DomainError("path length does not match the grid");
}

void check_shift(int n, const Grid& grid) {
  if (n < 1 || n > grid.level()) {
    throw DomainError("dyadic shift n must satisfy 1<=n<=J=" + std::to_string(grid.level()) + ", got " +
                      std::to_string(n));
  }
}

// |values| / max|values| together with the max.
struct Normalized {
  std::vector<double> ratio;
  double max = 0.0;
};

Normalized normalize(std::span<const double> values) {
  Normalized out;
  for (double v : values) out.max = std::max(out.max, std::abs(v));
  out.ratio.resize(values.size());
  if (out.max > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out.ratio[i] = std::abs(values[i]) / out.max;
  }
  return out;
}

double int_power(double r, long p) {
  double x = 1.0;
  for (long k = 0; k < p; ++k) {
    x *= r;
    if (x < kFlush) return 0.0;
  }
  return x;
}

double lp_of(const Normalized& v, double weight, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm requires p>=1");
  if (v.max == 0.0 || v.ratio.empty()) return 0.0;
  double s = 0.0;
  if (p == std::floor(p) && p <= kMaxIntegerExponent) {
    const long ip = static_cast<long>(p);
    for (double r : v.ratio) s += int_power(r, ip);
  } else {
    for (double r : v.ratio) s += std::pow(r, p);
  }
  return v.max * std::pow(s * weight, 1.0 / p);
}

OrliczValue orlicz_of(const Normalized& v, double weight, int p_max, double beta, bool early_exit) {
  if (p_max < 1) throw DomainError("Orlicz norm requires p_max>=1");
  if (!(beta > 0.0)) throw DomainError("Orlicz norm requires beta>0");
  OrliczValue out;
  if (v.max == 0.0 || v.ratio.empty()) return out;
  std::vector<double> power(v.ratio.size(), 1.0);
  double best = -1.0;
  for (int p = 1; p <= p_max; ++p) {
    const double scale = std::pow(static_cast<double>(p), -1.0 / beta);
    if (early_exit && best >= 0.0 && scale * v.max * (1.0 + kBoundSlack) < best) break;
    double s = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i) {
      double x = power[i] * v.ratio[i];
      if (x < kFlush) x = 0.0;
      power[i] = x;
      s += x;
    }
    const double term = scale * (v.max * std::pow(s * weight, 1.0 / static_cast<double>(p)));
    out.last_p = p;
    if (term > best) {
      best = term;
      out.argmax_p = p;
    }
  }
  out.value = best;
  out.truncated = out.argmax_p == p_max;
  return out;
}

std::vector<double> increments(PathView path, const Grid& grid, int n) {
  const std::size_t shift = std::size_t{1} << (grid.level() - n);
  const std::size_t count = grid.intervals() - shift;
  std::vector<double> d(count);
  for (std::size_t i = 0; i < count; ++i) d[i] = path[i + shift] - path[i];
  return d;
}

}  // namespace

double lp_norm(PathView path, const Grid& grid, double p) {
  check_path(path, grid);
  return lp_of(normalize(path.subspan(1)), grid.step(), p);
}

double shifted_lp_norm(PathView path, const Grid& grid, double p, int n) {
  check_path(path, grid);
  check_shift(n, grid);
  const auto d = increments(path, grid, n);
  return lp_of(normalize(d), grid.step(), p);
}

OrliczValue orlicz_norm(PathView path, const Grid& grid, int p_max, double beta) {
  check_path(path, grid);
  return orlicz_of(normalize(path.subspan(1)), grid.step(), p_max, beta, true);
}

OrliczValue orlicz_norm_bruteforce(PathView path, const Grid& grid, int p_max, double beta) {
  check_path(path, grid);
  return orlicz_of(normalize(path.subspan(1)), grid.step(), p_max, beta, false);
}

OrliczValue shifted_orlicz_norm(PathView path, const Grid& grid, int n, int p_max, double beta, bool early_exit) {
  check_path(path, grid);
  check_shift(n, grid);
  const auto d = increments(path, grid, n);
  return orlicz_of(normalize(d), grid.step(), p_max, beta, early_exit);
}

double besov_seminorm(PathView path, const Grid& grid, double p, double alpha) {
  check_path(path, grid);
  double best = 0.0;
  for (int n = 1; n <= grid.level(); ++n) {
    best = std::max(best, std::exp2(n * alpha) * shifted_lp_norm(path, grid, p, n));
  }
  return best;
}

OrliczProfile orlicz_profile(PathView path, const Grid& grid, int p_max, double beta, bool early_exit) {
  check_path(path, grid);
  OrliczProfile prof;
  prof.path = orlicz_of(normalize(path.subspan(1)), grid.step(), p_max, beta, early_exit);
  prof.shifted.reserve(static_cast<std::size_t>(grid.level()));
  for (int n = 1; n <= grid.level(); ++n) {
    prof.shifted.push_back(shifted_orlicz_norm(path, grid, n, p_max, beta, early_exit));
  }
  return prof;
}

BesovOrliczValue besov_orlicz_from_profile(const OrliczProfile& profile, double alpha) {
  BesovOrliczValue out;
  double best = 0.0;
  for (std::size_t k = 0; k < profile.shifted.size(); ++k) {
    const int n = static_cast<int>(k) + 1;
    const double v = std::exp2(n * alpha) * profile.shifted[k].value;
    if (v > best) {
      best = v;
      out.n_star = n;
      out.p_star = profile.shifted[k].argmax_p;
    }
  }
  out.seminorm = best;
  out.value = profile.path.value + best;
  return out;
}

double besov_orlicz_norm(PathView path, const Grid& grid, double alpha, int p_max, double beta) {
  return besov_orlicz_from_profile(orlicz_profile(path, grid, p_max, beta, true), alpha).value;
}

double besov_orlicz_norm_bruteforce(PathView path, const Grid& grid, double alpha, int p_max, double beta) {
  check_path(path, grid);
  // Every (n, p) cell is evaluated. Rounding is monotone, so scaling the
  // per-n maximum by 2^{n alpha} equals the maximum of the scaled cells.
  const double orlicz = orlicz_of(normalize(path.subspan(1)), grid.step(), p_max, beta, false).value;
  double semi = 0.0;
  for (int n = 1; n <= grid.level(); ++n) {
    const OrliczValue v = orlicz_of(normalize(increments(path, grid, n)), grid.step(), p_max, beta, false);
    semi = std::max(semi, std::exp2(n * alpha) * v.value);
  }
  return orlicz + semi;
}

double ynp_statistic(PathView path, const Grid& grid, double H, double K, int n, double p) {
  return std::exp2(n * H * K) * shifted_lp_norm(path, grid, p, n);
}

double ynp_sup(PathView path, const Grid& grid, double H, double K, int p_max) {
  check_path(path, grid);
  double best = 0.0;
  for (int n = 1; n <= grid.level(); ++n) {
    best = std::max(best, std::exp2(n * H * K) * shifted_orlicz_norm(path, grid, n, p_max, 2.0).value);
  }
  return best;
}

void NormParams::validate(int level) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("norm params: requires 0<alpha<1");
  if (!(beta > 0.0)) throw DomainError("norm params: requires beta>0");
  if (p_max < 1) throw DomainError("norm params: requires p_max>=1");
  if (level < 1) throw DomainError("norm params: requires J>=1");
  for (double p : p_list) {
    if (!(p >= 1.0)) throw DomainError("norm params: every tabulated p must be >=1");
  }
}

PathNorms evaluate_path_norms(PathView path, const Grid& grid, const NormParams& params) {
  PathNorms out;
  const OrliczProfile prof = orlicz_profile(path, grid, params.p_max, params.beta, true);
  out.orlicz = prof.path;
  out.besov_orlicz = besov_orlicz_from_profile(prof, params.alpha);
  for (double p : params.p_list) {
    out.lp.push_back(lp_norm(path, grid, p));
    out.besov_seminorm.push_back(besov_seminorm(path, grid, p, params.alpha));
  }
  if (params.ynp_exponent) {
    for (int n = 1; n <= grid.level(); ++n) {
      std::vector<double> row;
      for (double p : params.p_list) row.push_back(std::exp2(n * *params.ynp_exponent) * shifted_lp_norm(path, grid, p, n));
      out.ynp.push_back(std::move(row));
    }
  }
  return out;
}

NormReport evaluate_norms(const RowMatrix& paths, const Grid& grid, const NormParams& params) {
  params.validate(grid.level());
  if (static_cast<std::size_t>(paths.cols()) != grid.size()) throw DomainError("path length does not match the grid");
  NormReport report{params, grid.level(), std::vector<PathNorms>(static_cast<std::size_t>(paths.rows()))};
  const auto cols = static_cast<std::size_t>(paths.cols());
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index m = 0; m < paths.rows(); ++m) {
    report.paths[static_cast<std::size_t>(m)] = evaluate_path_norms({paths.row(m).data(), cols}, grid, params);
  }
  return report;
}

NormReport evaluate_norms_serial(const RowMatrix& paths, const Grid& grid, const NormParams& params) {
  params.validate(grid.level());
  if (static_cast<std::size_t>(paths.cols()) != grid.size()) throw DomainError("path length does not match the grid");
  NormReport report{params, grid.level(), {}};
  const auto cols = static_cast<std::size_t>(paths.cols());
  for (Eigen::Index m = 0; m < paths.rows(); ++m) {
    report.paths.push_back(evaluate_path_norms({paths.row(m).data(), cols}, grid, params));
  }
  return report;
}

nlohmann::json NormReport::to_json() const {
  nlohmann::json j;
  j["grid_level"] = grid_level;
  j["params"] = {{"alpha", params.alpha}, {"beta", params.beta}, {"p_max", params.p_max}, {"p_list", params.p_list}};
  if (params.ynp_exponent) j["params"]["ynp_exponent"] = *params.ynp_exponent;
  j["paths"] = nlohmann::json::array();
  for (const auto& p : paths) {
    nlohmann::json e;
    e["lp"] = p.lp;
    e["orlicz"] = p.orlicz.value;
    e["orlicz_argmax_p"] = p.orlicz.argmax_p;
    e["orlicz_truncated"] = p.orlicz.truncated;
    e["besov_seminorm"] = p.besov_seminorm;
    e["besov_orlicz"] = p.besov_orlicz.value;
    e["n_star"] = p.besov_orlicz.n_star;
    e["p_star"] = p.besov_orlicz.p_star;
    if (!p.ynp.empty()) e["ynp"] = p.ynp;
    j["paths"].push_back(std::move(e));
  }
  return j;
}

void NormReport::write_csv(const std::filesystem::path& file) const {
  std::ofstream os(file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  os << "path";
  for (double p : params.p_list) os << ",lp_" << format_double(p);
  os << ",orlicz,orlicz_argmax_p";
  for (double p : params.p_list) os << ",besov_" << format_double(p);
  os << ",besov_orlicz,n_star,p_star\n";
  for (std::size_t m = 0; m < paths.size(); ++m) {
    const auto& p = paths[m];
    os << m;
    for (double v : p.lp) os << ',' << format_double(v);
    os << ',' << format_double(p.orlicz.value) << ',' << p.orlicz.argmax_p;
    for (double v : p.besov_seminorm) os << ',' << format_double(v);
    os << ',' << format_double(p.besov_orlicz.value) << ',' << p.besov_orlicz.n_star << ',' << p.besov_orlicz.p_star
       << '\n';
  }
}

}  // namespace gpb
