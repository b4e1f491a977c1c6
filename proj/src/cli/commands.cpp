#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <limits>

#include "gpb/besov.h"
#include "gpb/cli.h"
#include "gpb/decomposition.h"
#include "gpb/ensemble_io.h"
#include "gpb/experiments.h"
#include "gpb/kernels.h"
#include "gpb/sampling.h"
#include "gpb/specialfn.h"

namespace gpb::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kConstantQuadratureTolerance = 1e-8;

struct Context {
  std::string command;
  std::vector<std::string> argv;
  Config config;
  int threads = 1;
  std::optional<std::filesystem::path> manifest_path;
  std::ostream& out;
  std::ostream& err;
};

// Flag -> config key bindings for one subcommand.
class Bindings {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    values_.emplace_back();
    app->add_option(flag, values_.back(), help);
    keys_.push_back({flag.substr(0, flag.find(',')), key});
  }
  void apply(CLI::App* app, Config& cfg) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (app->count(keys_[i].first) > 0) cfg.set(keys_[i].second, values_[i]);
    }
  }

 private:
  std::deque<std::string> values_;
  std::vector<std::pair<std::string, std::string>> keys_;
};

void write_json(const std::filesystem::path& file, const nlohmann::json& j) {
  std::ofstream os(file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  os << j.dump(2) << '\n';
}

std::filesystem::path output_dir(const Config& cfg, const std::string& key, const std::string& fallback) {
  std::filesystem::path dir = cfg.get(key).value_or(fallback);
  std::filesystem::create_directories(dir);
  return dir;
}

double param(const Config& cfg, const std::string& key) { return cfg.get_double(key).value_or(kNaN); }

double require_double(const Config& cfg, const std::string& key) {
  cfg.require(key);
  return *cfg.get_double(key);
}

void finish_manifest(RunManifest& m, const Context& ctx, int code, const std::filesystem::path& file) {
  m.command = ctx.command;
  m.argv = ctx.argv;
  m.config = ctx.config.to_json();
  m.threads = ctx.threads;
  m.exit_code = code;
  m.finished_at = utc_timestamp();
  m.write(file);
}

// ---- constants ----

struct ConstantRow {
  std::vector<std::string> inputs;
  std::string domain;
  std::function<NamedConstant(const Config&)> eval;
};

NamedConstant closed(const std::string& name, double v) { return {name, v, 0.0}; }

const std::map<std::string, ConstantRow>& constant_table() {
  static const std::map<std::string, ConstantRow> table = {
      {"cp", {{"p"}, "p>=1", [](const Config& c) { return closed("cp", eval_cp(require_double(c, "p"))); }}},
      {"CK", {{"K"}, "0<K<2", [](const Config& c) { return closed("CK", eval_CK(require_double(c, "K"))); }}},
      {"CprimeK",
       {{"K"}, "0<K<2", [](const Config& c) { return closed("CprimeK", eval_CprimeK(require_double(c, "K"))); }}},
      {"c1", {{"K"}, "0<K<1-1e-6", [](const Config& c) { return closed("c1", const_c1(require_double(c, "K"))); }}},
      {"c2", {{"K"}, "0<K<=1", [](const Config& c) { return closed("c2", const_c2(require_double(c, "K"))); }}},
      {"a", {{"K"}, "1<K<2", [](const Config& c) { return closed("a", const_a(require_double(c, "K"))); }}},
      {"b", {{"K"}, "1<K<2", [](const Config& c) { return closed("b", const_b(require_double(c, "K"))); }}},
      {"c3", {{"H"}, "0<H<1/2", [](const Config& c) { return closed("c3", const_c3(require_double(c, "H"))); }}},
      {"c4", {{"H"}, "1/2<H<1", [](const Config& c) { return closed("c4", const_c4(require_double(c, "H"))); }}},
      {"kappa", {{"gamma"}, "0<gamma<2", [](const Config& c) { return const_kappa(require_double(c, "gamma")); }}},
      {"lambda",
       {{"H", "gamma"}, "1/2<H<1, 0<gamma<2H",
        [](const Config& c) { return const_lambda(require_double(c, "H"), require_double(c, "gamma")); }}},
      {"A_HK",
       {{"H", "K"}, "0<H<1, 0<K<2, HK<1",
        [](const Config& c) {
          return closed("A_HK", LemmaOneConstants::compute(require_double(c, "H"), require_double(c, "K")).A_HK);
        }}},
      {"B_HK",
       {{"H", "K"}, "0<H<1, 0<K<2, HK<1",
        [](const Config& c) {
          return closed("B_HK", LemmaOneConstants::compute(require_double(c, "H"), require_double(c, "K")).B_HK);
        }}},
      {"D_H", {{"H"}, "0<H<1", [](const Config& c) {
                 const double H = require_double(c, "H");
                 if (!(H > 0.0 && H < 1.0)) throw DomainError("D_H requires 0<H<1");
                 return closed("D_H", H * std::exp2(std::max(1.0, 2.0 * H)));
               }}},
  };
  return table;
}

int cmd_constants(Context& ctx) {
  const Config& cfg = ctx.config;
  const std::string name = cfg.require("name");
  const auto& table = constant_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const auto& [k, v] : table) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown constant '" + name + "' (known: " + known + ")");
  }
  const NamedConstant c = it->second.eval(cfg);
  nlohmann::json j;
  j["name"] = name;
  j["inputs"] = nlohmann::json::object();
  for (const auto& in : it->second.inputs) j["inputs"][in] = *cfg.get_double(in);
  j["value"] = c.value;
  j["domain"] = it->second.domain;
  j["error_estimate"] = c.error_estimate;
  ctx.out << j.dump(2) << '\n';
  return kExitOk;
}

// ---- sample ----

int cmd_sample(Context& ctx) {
  const Config& cfg = ctx.config;
  const ProcessSpec spec =
      make_process(cfg.require("process"), param(cfg, "H"), param(cfg, "K"), param(cfg, "gamma"));
  const auto level = cfg.get_int("levels", 10);
  const auto paths = cfg.get_int("paths", 1);
  if (level < 1 || level > Grid::kMaxLevel) throw ConfigError("key 'levels' must lie in [1, 24]");
  if (paths < 1) throw ConfigError("key 'paths' must be >= 1");
  const std::uint64_t seed = cfg.get_uint64("seed", 1);
  const SamplerPolicy policy = sampler_policy_from_string(cfg.get("sampler").value_or("auto"));
  const std::string format = cfg.get("format").value_or("csv");
  if (format != "csv" && format != "bin") throw ConfigError("key 'format' must be csv or bin");

  RunManifest manifest;
  manifest.started_at = utc_timestamp();
  manifest.seed = seed;
  const Grid grid(static_cast<int>(level));
  const PathEnsemble ens = sample_process(spec, grid, static_cast<std::size_t>(paths), seed, policy);

  const auto dir = output_dir(cfg, "out", ".");
  manifest.resolved = ens.provenance();
  manifest.resolved["format"] = format;
  const auto data = dir / ("paths." + format);
  if (format == "csv") {
    write_csv(ens, data);
  } else {
    write_binary(ens, data);
  }
  const auto sidecar = dir / "paths.json";
  write_sidecar(ens, sidecar);
  manifest.add_output(dir, data);
  manifest.add_output(dir, sidecar);
  finish_manifest(manifest, ctx, kExitOk, ctx.manifest_path.value_or(dir / "manifest.json"));
  ctx.out << ens.provenance().dump(2) << '\n';
  return kExitOk;
}

// ---- verify ----

nlohmann::json ck_quadrature_check(double K) {
  const QuadResult q = quad_improper([K](double th) { return ck_integrand(K, th); });
  const double ck = eval_CK(K);
  QuadratureSettings s2;
  s2.abs_tol = 1e-13;
  const QuadResult q2 = integrate_2d([K](double x, double y) { return std::pow(x + y, K - 2.0); }, 0.0, 1.0,
                                     [](double) { return 0.0; }, [](double) { return 1.0; }, {}, s2);
  const double cp = eval_CprimeK(K);
  const double e1 = std::abs(ck - q.value) / std::abs(q.value);
  const double e2 = std::abs(cp - q2.value) / std::abs(q2.value);
  return {{"K", K},
          {"CK", ck},
          {"CK_quadrature", q.value},
          {"CK_quadrature_error", q.abs_error},
          {"CK_rel_err", e1},
          {"CprimeK", cp},
          {"CprimeK_quadrature", q2.value},
          {"CprimeK_rel_err", e2},
          {"pass", e1 <= kConstantQuadratureTolerance && e2 <= kConstantQuadratureTolerance}};
}

nlohmann::json run_check(const Config& cfg, const std::string& check) {
  if (check == "decomposition") {
    const DecompositionKind kind = decomposition_kind_from_string(cfg.require("name"));
    const DecompositionParams p{cfg.get_double("H", 0.5), cfg.get_double("K", 1.0), cfg.get_double("gamma", 1.0)};
    const auto level = cfg.get_int("levels", 6);
    if (level < 1 || level > 12) throw ConfigError("key 'levels' must lie in [1, 12] for identity checks");
    const DecompositionSpec spec = make_decomposition(kind, p);
    nlohmann::json j = verify_covariance_identity(spec, Grid(static_cast<int>(level))).to_json();
    j["decomposition"] = spec.to_json();
    return j;
  }
  if (check == "g-heat") {
    const auto level = cfg.get_int("levels", 3);
    if (level < 1 || level > 6) throw ConfigError("key 'levels' must lie in [1, 6] for the heat cross-check");
    return verify_G_against_heat(require_double(cfg, "H"), require_double(cfg, "gamma"),
                                 Grid(static_cast<int>(level)))
        .to_json();
  }
  if (check == "lemma1") {
    const auto res = cfg.get_int("t_resolution", 50);
    if (res < 2) throw ConfigError("key 't_resolution' must be >= 2");
    const auto h_list = cfg.get_double_list("h_list", default_lemma1_h_list());
    return verify_lemma1_bounds(require_double(cfg, "H"), require_double(cfg, "K"), h_list, static_cast<int>(res))
        .to_json();
  }
  if (check == "moments") {
    const auto paths = cfg.get_int("paths", 20000);
    if (paths < 2) throw ConfigError("key 'paths' must be >= 2");
    return verify_moment_formula(require_double(cfg, "H"), require_double(cfg, "K"),
                                 cfg.get_double_list("times", {0.25, 0.5, 1.0}),
                                 cfg.get_double_list("p_list", {1.0, 2.0, 4.0}), static_cast<std::size_t>(paths),
                                 cfg.get_uint64("seed", 1))
        .to_json();
  }
  if (check == "ck-quadrature") {
    const std::vector<double> Ks = cfg.has("K") ? std::vector<double>{*cfg.get_double("K")}
                                                : std::vector<double>{0.2, 0.5, 0.999, 1.0, 1.001, 1.5, 1.8};
    nlohmann::json j;
    j["checks"] = nlohmann::json::array();
    bool pass = true;
    for (double K : Ks) {
      auto c = ck_quadrature_check(K);
      pass = pass && c["pass"].get<bool>();
      j["checks"].push_back(std::move(c));
    }
    j["tolerance"] = kConstantQuadratureTolerance;
    j["pass"] = pass;
    return j;
  }
  throw ConfigError("unknown check '" + check + "' (expected decomposition, lemma1, moments, g-heat or ck-quadrature)");
}

int cmd_verify(Context& ctx) {
  const Config& cfg = ctx.config;
  RunManifest manifest;
  manifest.started_at = utc_timestamp();
  const std::string check = cfg.require("check");
  if (check == "moments") manifest.seed = cfg.get_uint64("seed", 1);
  nlohmann::json report = run_check(cfg, check);
  report["check"] = check;
  const int code = report.at("pass").get<bool>() ? kExitOk : kExitFail;
  ctx.out << report.dump(2) << '\n';
  if (cfg.has("out") || ctx.manifest_path) {
    const auto dir = output_dir(cfg, "out", ".");
    const auto file = dir / "report.json";
    write_json(file, report);
    manifest.add_output(dir, file);
    finish_manifest(manifest, ctx, code, ctx.manifest_path.value_or(dir / "manifest.json"));
  }
  return code;
}

// ---- experiment ----

const std::set<std::string>& experiment_keys() {
  static const std::set<std::string> keys = {
      "experiment.id",      "experiment.levels",    "experiment.paths",          "experiment.seed",
      "experiment.alphas",  "experiment.times",     "experiment.p_list",         "process.family",
      "process.H",          "process.K",            "process.gamma",             "norms.alpha",
      "norms.beta",         "norms.p_max",          "norms.p_list",              "thresholds.max_drift",
      "thresholds.super_offset", "thresholds.min_super_ratio", "output.dir"};
  return keys;
}

ExperimentConfig resolve_experiment(const Config& cfg) {
  cfg.check_known(experiment_keys());
  ExperimentConfig ec;
  ec.id = cfg.require("experiment.id");
  const bool moment = ec.id == "moment";
  ec.levels = cfg.get_int_list("experiment.levels", ec.levels);
  const auto M = cfg.get_int("experiment.paths", moment ? 20000 : 256);
  if (M < 1) throw ConfigError("key 'experiment.paths' must be >= 1");
  ec.M = static_cast<std::size_t>(M);
  ec.seed = cfg.get_uint64("experiment.seed", 1);
  ec.alphas = cfg.get_double_list("experiment.alphas", {});
  ec.times = cfg.get_double_list("experiment.times", ec.times);
  ec.norms.alpha = cfg.get_double("norms.alpha", ec.norms.alpha);
  ec.norms.beta = cfg.get_double("norms.beta", ec.norms.beta);
  const auto p_max = cfg.get_int("norms.p_max", ec.norms.p_max);
  if (p_max < 1 || p_max > 1 << 20) throw ConfigError("key 'norms.p_max' must lie in [1, 2^20]");
  ec.norms.p_max = static_cast<int>(p_max);
  ec.norms.p_list = cfg.get_double_list("norms.p_list", moment ? std::vector<double>{1.0, 2.0, 4.0} : ec.norms.p_list);
  ec.thresholds.max_drift = cfg.get_double("thresholds.max_drift", ec.thresholds.max_drift);
  ec.thresholds.super_offset = cfg.get_double("thresholds.super_offset", ec.thresholds.super_offset);
  ec.thresholds.min_super_ratio = cfg.get_double("thresholds.min_super_ratio", ec.thresholds.min_super_ratio);
  if (ec.id == "regularity") {
    ec.process = make_process(cfg.require("process.family"), param(cfg, "process.H"), param(cfg, "process.K"),
                              param(cfg, "process.gamma"));
  } else {
    const std::string family = cfg.get("process.family").value_or("xh");
    if (family != "xh") throw ConfigError("key 'process.family': experiment '" + ec.id + "' runs on xh");
    ec.process = TimeChangedX{require_double(cfg, "process.H"), require_double(cfg, "process.K")};
  }
  ec.validate();
  return ec;
}

int cmd_experiment(Context& ctx) {
  RunManifest manifest;
  manifest.started_at = utc_timestamp();
  const ExperimentConfig ec = resolve_experiment(ctx.config);
  manifest.seed = ec.seed;
  manifest.resolved = ec.to_json();
  const auto dir = output_dir(ctx.config, "output.dir", ".");
  nlohmann::json report;
  nlohmann::json verdict;
  const auto csv = dir / "distribution.csv";
  int code = kExitOk;
  if (ec.id == "regularity") {
    const RegularityReport r =
        run_regularity_experiment(*ec.process, ec.alphas, ec.levels, ec.M, ec.seed, ec.norms, ec.thresholds);
    report = r.to_json();
    r.write_csv(csv);
    verdict = report["verdicts"];
    code = r.critical_pass ? kExitOk : kExitFail;
  } else if (ec.id == "ynp") {
    const auto& x = std::get<TimeChangedX>(*ec.process);
    const YnpReport r = run_ynp_experiment(x.H, x.K, ec.levels, ec.norms.p_list, ec.M, ec.seed, ec.norms.p_max,
                                           ec.thresholds.max_drift);
    report = r.to_json();
    r.write_csv(csv);
    verdict = {{"stable_statistic", {{"pass", r.pass}, {"median_drift", r.drift}, {"max_drift", r.max_drift}}}};
    code = r.pass ? kExitOk : kExitFail;
  } else {
    const auto& x = std::get<TimeChangedX>(*ec.process);
    const MomentReport r = verify_moment_formula(x.H, x.K, ec.times, ec.norms.p_list, ec.M, ec.seed);
    report = r.to_json();
    r.write_csv(csv);
    verdict = {{"moment_identity", {{"pass", r.pass}, {"band_se", r.band}}}};
    code = r.pass ? kExitOk : kExitFail;
  }
  report["config"] = ec.to_json();
  const auto json_file = dir / "report.json";
  write_json(json_file, report);
  manifest.add_output(dir, json_file);
  manifest.add_output(dir, csv);
  finish_manifest(manifest, ctx, code, ctx.manifest_path.value_or(dir / "manifest.json"));
  ctx.out << nlohmann::json{{"experiment", ec.id}, {"verdicts", verdict}}.dump(2) << '\n';
  return code;
}

// ---- norms ----

int cmd_norms(Context& ctx) {
  const Config& cfg = ctx.config;
  RunManifest manifest;
  manifest.started_at = utc_timestamp();
  const std::filesystem::path in = cfg.require("in");
  const RowMatrix paths = in.extension() == ".bin" ? read_binary(in) : read_csv(in);
  const auto cols = static_cast<std::size_t>(paths.cols());
  int level = 0;
  while (level <= Grid::kMaxLevel && (std::size_t{1} << level) + 1 != cols) ++level;
  if (level < 1 || level > Grid::kMaxLevel) throw ConfigError("input rows must hold 2^J + 1 values");
  const Grid grid(level);
  NormParams params;
  params.alpha = cfg.get_double("alpha", params.alpha);
  params.beta = cfg.get_double("beta", params.beta);
  params.p_max = static_cast<int>(cfg.get_int("p_max", params.p_max));
  params.p_list = cfg.get_double_list("p_list", params.p_list);
  if (auto e = cfg.get_double("ynp_exponent")) params.ynp_exponent = *e;
  const NormReport report = evaluate_norms(paths, grid, params);
  manifest.resolved = report.to_json()["params"];
  manifest.resolved["grid_level"] = level;
  const auto dir = output_dir(cfg, "out", ".");
  const auto json_file = dir / "norms.json";
  const auto csv_file = dir / "norms.csv";
  write_json(json_file, report.to_json());
  report.write_csv(csv_file);
  manifest.add_output(dir, json_file);
  manifest.add_output(dir, csv_file);
  finish_manifest(manifest, ctx, kExitOk, ctx.manifest_path.value_or(dir / "manifest.json"));
  ctx.out << nlohmann::json{{"paths", report.paths.size()}, {"grid_level", level}}.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian process sampling, decomposition checks and Besov-Orlicz norms", "gpb"};
  app.require_subcommand(1);
  int threads = 0;
  std::string manifest;
  app.add_option("--threads", threads, "OpenMP thread count (results do not depend on it)")->check(CLI::NonNegativeNumber);
  app.add_option("--manifest", manifest, "write the run manifest to this file");
  app.set_version_flag("--version", tool_version());

  Bindings b_const, b_sample, b_verify, b_exp, b_norms;
  auto* constants = app.add_subcommand("constants", "evaluate a named constant");
  b_const.add(constants, "--name", "name", "constant name");
  for (const char* k : {"p", "K", "H", "gamma"}) b_const.add(constants, std::string("--") + k, k, k);

  auto* sample = app.add_subcommand("sample", "draw sample paths");
  b_sample.add(sample, "--process", "process", "fbm, bfbm, sfbm, x, xh, y or g");
  for (const char* k : {"H", "K", "gamma"}) b_sample.add(sample, std::string("--") + k, k, k);
  b_sample.add(sample, "--levels", "levels", "grid level J (2^J + 1 points)");
  b_sample.add(sample, "--paths", "paths", "number of paths");
  b_sample.add(sample, "--seed", "seed", "RNG seed");
  b_sample.add(sample, "--sampler", "sampler", "auto, cholesky, circulant or spectral");
  b_sample.add(sample, "--out", "out", "output directory");
  b_sample.add(sample, "--format", "format", "csv or bin");

  auto* verify = app.add_subcommand("verify", "deterministic verification");
  b_verify.add(verify, "--check", "check", "decomposition, lemma1, moments, g-heat or ck-quadrature");
  b_verify.add(verify, "--name", "name", "decomposition name");
  for (const char* k : {"H", "K", "gamma"}) b_verify.add(verify, std::string("--") + k, k, k);
  b_verify.add(verify, "--levels", "levels", "grid level");
  b_verify.add(verify, "--paths", "paths", "Monte Carlo paths (moments)");
  b_verify.add(verify, "--seed", "seed", "RNG seed (moments)");
  b_verify.add(verify, "--t-resolution", "t_resolution", "t points per h (lemma1)");
  b_verify.add(verify, "--out", "out", "write report.json and manifest.json here");

  auto* experiment = app.add_subcommand("experiment", "statistical experiment");
  std::string config_file;
  experiment->add_option("--config", config_file, "config file")->check(CLI::ExistingFile);
  b_exp.add(experiment, "--experiment", "experiment.id", "regularity, ynp or moment");
  b_exp.add(experiment, "--process", "process.family", "process family");
  b_exp.add(experiment, "--H", "process.H", "H");
  b_exp.add(experiment, "--K", "process.K", "K");
  b_exp.add(experiment, "--gamma", "process.gamma", "gamma");
  b_exp.add(experiment, "--levels", "experiment.levels", "comma-separated grid levels");
  b_exp.add(experiment, "--paths", "experiment.paths", "paths per level");
  b_exp.add(experiment, "--seed", "experiment.seed", "RNG seed");
  b_exp.add(experiment, "--alphas", "experiment.alphas", "extra exponents");
  b_exp.add(experiment, "--p-max", "norms.p_max", "largest integer p");
  b_exp.add(experiment, "--out", "output.dir", "output directory");

  auto* norms = app.add_subcommand("norms", "norms of stored paths");
  b_norms.add(norms, "--in", "in", "paths file (.csv or .bin)");
  b_norms.add(norms, "--alpha", "alpha", "Besov exponent");
  b_norms.add(norms, "--beta", "beta", "Orlicz exponent");
  b_norms.add(norms, "--p-max", "p_max", "largest integer p");
  b_norms.add(norms, "--p-list", "p_list", "tabulated p values");
  b_norms.add(norms, "--ynp-exponent", "ynp_exponent", "HK for the Y_{n,p} table");
  b_norms.add(norms, "--out", "out", "output directory");

  try {
    std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gpb: " << e.what() << '\n';
    return kExitUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);
  Context ctx{"", args, {}, omp_get_max_threads(), std::nullopt, out, err};
  if (!manifest.empty()) ctx.manifest_path = manifest;
  try {
    if (*constants) {
      ctx.command = "constants";
      b_const.apply(constants, ctx.config);
      return cmd_constants(ctx);
    }
    if (*sample) {
      ctx.command = "sample";
      b_sample.apply(sample, ctx.config);
      return cmd_sample(ctx);
    }
    if (*verify) {
      ctx.command = "verify";
      b_verify.apply(verify, ctx.config);
      return cmd_verify(ctx);
    }
    if (*experiment) {
      ctx.command = "experiment";
      if (!config_file.empty()) ctx.config = Config::load(config_file);
      b_exp.apply(experiment, ctx.config);
      return cmd_experiment(ctx);
    }
    ctx.command = "norms";
    b_norms.apply(norms, ctx.config);
    return cmd_norms(ctx);
  } catch (const UnsupportedRegion& e) {
    err << "gpb: unsupported parameter region: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const DomainError& e) {
    err << "gpb: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gpb: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace gpb::cli
