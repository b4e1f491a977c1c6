#include "gpb/decomposition.h"

#include <cmath>
#include <sstream>

#include "gpb/errors.h"
#include "gpb/rng.h"

namespace gpb {
namespace {

double weight_of(const std::vector<NamedConstant>& constants, const std::string& name) {
  for (const auto& c : constants) {
    if (c.name == name) return c.value;
  }
  throw DomainError("missing decomposition constant " + name);
}

}  // namespace

void DecompositionSpec::validate() const {
  gpb::validate(lhs);
  if (components.empty()) throw DomainError("decomposition has no components");
  if (!(std::isfinite(lhs_weight) && lhs_weight > 0.0)) throw DomainError("decomposition lhs weight must be > 0");
  bool any_nonzero = false;
  for (const auto& c : components) {
    if (!std::isfinite(c.weight)) throw DomainError("decomposition weight is not finite");
    if (c.weight != 0.0) any_nonzero = true;
    gpb::validate(c.process);
  }
  if (!any_nonzero) throw DomainError("decomposition has only zero weights");
}

nlohmann::json DecompositionSpec::to_json() const {
  nlohmann::json j;
  j["name"] = to_string(kind);
  j["params"] = {{"H", params.H}, {"K", params.K}, {"gamma", params.gamma}};
  j["lhs"] = gpb::to_json(lhs);
  j["lhs_weight"] = lhs_weight;
  j["components"] = nlohmann::json::array();
  for (const auto& c : components) j["components"].push_back({{"weight", c.weight}, {"process", gpb::to_json(c.process)}});
  return j;
}

DecompositionSpec make_decomposition(DecompositionKind kind, const DecompositionParams& p,
                                     const QuadratureSettings& settings) {
  const auto constants = decomposition_constants(kind, p, settings);
  DecompositionSpec spec{kind, p, Fbm{0.5}, 1.0, {}};
  switch (kind) {
    case DecompositionKind::kLeiNualart:
      spec.lhs = Fbm{p.H * p.K};
      spec.lhs_weight = weight_of(constants, "c2");
      spec.components = {{1.0, Bfbm{p.H, p.K}}, {weight_of(constants, "c1"), TimeChangedX{p.H, p.K}}};
      break;
    case DecompositionKind::kBardinaEsSebaiy:
      spec.lhs = Bfbm{p.H, p.K};
      spec.components = {{weight_of(constants, "a"), Fbm{p.H * p.K}},
                         {weight_of(constants, "b"), TimeChangedX{p.H, p.K}}};
      break;
    case DecompositionKind::kSfbmLow:
      spec.lhs = Sfbm{p.H};
      spec.components = {{1.0, Fbm{p.H}}, {weight_of(constants, "c3"), LeiNualartX{2.0 * p.H}}};
      break;
    case DecompositionKind::kSfbmHigh:
      spec.lhs = Fbm{p.H};
      spec.components = {{1.0, Sfbm{p.H}}, {weight_of(constants, "c4"), LeiNualartX{2.0 * p.H}}};
      break;
    case DecompositionKind::kHarnettNualart: {
      const double alpha = weight_of(constants, "alpha");
      spec.lhs = Gprocess{p.H, p.gamma};
      spec.components = {{std::sqrt(weight_of(constants, "kappa")), Fbm{0.5 * alpha}},
                         {std::sqrt(weight_of(constants, "lambda")), LeiNualartX{2.0 * alpha + 1.0}}};
      break;
    }
  }
  spec.validate();
  return spec;
}

PathEnsemble compose_paths(const DecompositionSpec& spec, const Grid& grid, std::size_t M, std::uint64_t seed) {
  spec.validate();
  if (M == 0) throw DomainError("compose_paths: requires M>=1");
  RowMatrix sum = RowMatrix::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(grid.size()));
  double jitter = 0.0;
  std::string notice;
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const auto& c = spec.components[i];
    const PathEnsemble part = sample_process(c.process, grid, M, component_seed(seed, i));
    sum += c.weight * part.paths();
    jitter = std::max(jitter, part.jitter());
    if (!part.notice().empty()) notice += part.notice() + ";";
  }
  sum /= spec.lhs_weight;
  return PathEnsemble(grid, std::move(sum), seed, "compose:" + to_string(spec.kind), spec.lhs, jitter, notice);
}

nlohmann::json IdentityReport::to_json() const {
  return {{"spec", spec},
          {"grid_level", grid_level},
          {"max_abs_err", max_abs_err},
          {"tolerance", tolerance},
          {"pass", pass},
          {"worst_point", {worst_t, worst_s}}};
}

namespace {

IdentityReport compare(std::string name, int level, std::vector<double> times, const Matrix& lhs, const Matrix& rhs,
                       double tolerance) {
  IdentityReport r;
  r.spec = std::move(name);
  r.grid_level = level;
  r.tolerance = tolerance;
  r.errors = (lhs - rhs).cwiseAbs();
  Eigen::Index wi = 0;
  Eigen::Index wj = 0;
  r.max_abs_err = r.errors.size() > 0 ? r.errors.maxCoeff(&wi, &wj) : 0.0;
  r.worst_t = times.empty() ? 0.0 : times[static_cast<std::size_t>(wi)];
  r.worst_s = times.empty() ? 0.0 : times[static_cast<std::size_t>(wj)];
  r.times = std::move(times);
  r.pass = r.max_abs_err <= tolerance;
  return r;
}

}  // namespace

IdentityReport verify_covariance_identity(const DecompositionSpec& spec, const Grid& grid) {
  spec.validate();
  const std::vector<double> times = grid.points();
  const Matrix lhs = spec.lhs_weight * spec.lhs_weight * build_covariance_matrix(spec.lhs, times);
  Matrix rhs = Matrix::Zero(lhs.rows(), lhs.cols());
  for (const auto& c : spec.components) rhs += c.weight * c.weight * build_covariance_matrix(c.process, times);
  return compare(to_string(spec.kind), grid.level(), times, lhs, rhs, kIdentityTolerance);
}

IdentityReport verify_G_against_heat(double H, double gamma, const Grid& grid, const QuadratureSettings& settings) {
  const GKernel g(H, gamma, settings);  // throws UnsupportedRegion for alpha >= 1/2
  std::vector<double> times = grid.points();
  times.erase(times.begin());
  const auto n = static_cast<Eigen::Index>(times.size());
  Matrix cov_g(n, n);
  Matrix cov_h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov_g(i, j) = cov_g(j, i) = g(times[i], times[j]);
    }
  }
  // Quadrature failures must surface as exceptions, so the pairs run serially.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov_h(i, j) = cov_h(j, i) = cov_heat_numeric(H, gamma, times[i], times[j], settings);
    }
  }
  std::ostringstream name;
  name << "harnett-vs-heat(H=" << H << ",gamma=" << gamma << ")";
  return compare(name.str(), grid.level(), times, correlation(cov_g), correlation(cov_h),
                 kHeatCorrelationTolerance);
}

}  // namespace gpb
