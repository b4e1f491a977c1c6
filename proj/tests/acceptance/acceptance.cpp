// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gpb/besov.h"
#include "gpb/cli.h"
#include "gpb/decomposition.h"
#include "gpb/experiments.h"
#include "gpb/sampling.h"
#include "gpb/specialfn.h"
#include "gpb/stats.h"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // <= 0: no runtime budget
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---- 1 ----

Outcome constant_fidelity() {
  Outcome o{true, ""};
  double worst = 0.0;
  for (double K : {0.2, 0.5, 0.999, 1.0, 1.001, 1.5, 1.8}) {
    const double q = gpb::quad_improper([K](double th) { return gpb::ck_integrand(K, th); }).value;
    gpb::QuadratureSettings s2;
    s2.abs_tol = 1e-13;
    const double q2 = gpb::integrate_2d([K](double x, double y) { return std::pow(x + y, K - 2.0); }, 0.0, 1.0,
                                        [](double) { return 0.0; }, [](double) { return 1.0; }, nullptr, s2)
                          .value;
    const double e1 = std::abs(gpb::eval_CK(K) - q) / q;
    const double e2 = std::abs(gpb::eval_CprimeK(K) - q2) / q2;
    worst = std::max({worst, e1, e2});
    if (e1 > 1e-8 || e2 > 1e-8) {
      o.pass = false;
      o.detail += "K=" + fmt("%g", K) + " rel err " + fmt("%.3g", std::max(e1, e2)) + "; ";
    }
  }
  const double k1 = std::abs(gpb::eval_CK(1.0) - 2.0 * std::numbers::ln2);
  if (k1 > 1e-12) o.pass = false;
  o.detail += "max rel err vs quadrature " + fmt("%.3g", worst) + " (tol 1e-8), |C_1 - 2 log 2| = " + fmt("%.3g", k1) +
              " (tol 1e-12)";
  return o;
}

// ---- 2 ----

Outcome decomposition_identities() {
  using K = gpb::DecompositionKind;
  const gpb::Grid grid(6);
  std::vector<std::pair<K, gpb::DecompositionParams>> cases;
  for (auto [H, k] : {std::pair{0.3, 0.5}, std::pair{0.5, 0.5}, std::pair{0.7, 0.9}, std::pair{0.6, 1.4},
                      std::pair{0.45, 1.9}}) {
    cases.push_back({k < 1.0 ? K::kLeiNualart : K::kBardinaEsSebaiy, {H, k, 1.0}});
  }
  for (double H : {0.2, 0.35}) cases.push_back({K::kSfbmLow, {H, 1.0, 1.0}});
  for (double H : {0.65, 0.8}) cases.push_back({K::kSfbmHigh, {H, 1.0, 1.0}});
  Outcome o{true, ""};
  double worst = 0.0;
  for (const auto& [kind, p] : cases) {
    const auto r = gpb::verify_covariance_identity(gpb::make_decomposition(kind, p), grid);
    worst = std::max(worst, r.max_abs_err);
    if (!r.pass) {
      o.pass = false;
      o.detail += r.spec + " err " + fmt("%.3g", r.max_abs_err) + "; ";
    }
  }
  o.detail += std::to_string(cases.size()) + " identities, max abs err " + fmt("%.3g", worst) + " (tol 1e-10)";
  return o;
}

// ---- 3 ----

Outcome harnett_heat() {
  const auto r = gpb::verify_G_against_heat(0.7, 1.0, gpb::Grid(3));
  return {r.pass, "max |corr_G - corr_heat| = " + fmt("%.4g", r.max_abs_err) + " at (t,s)=(" + fmt("%g", r.worst_t) +
                      "," + fmt("%g", r.worst_s) + ") (tol 1e-3)"};
}

// ---- 4 ----

Outcome moment_identity() {
  Outcome o{true, ""};
  for (auto [H, K] : {std::pair{0.5, 0.8}, std::pair{0.6, 1.4}}) {
    const auto r = gpb::verify_moment_formula(H, K, {0.25, 0.5, 1.0}, {1.0, 2.0, 4.0}, 20000, 1);
    double zmax = 0.0;
    for (const auto& c : r.checks) zmax = std::max(zmax, std::abs(c.z));
    o.pass = o.pass && r.pass;
    o.detail += "(H,K)=(" + fmt("%g", H) + "," + fmt("%g", K) + ") max|z| " + fmt("%.2f", zmax) + "; ";
  }
  o.detail += "band 3 SE, M=20000";
  return o;
}

// ---- 5 ----

Outcome lemma_one() {
  Outcome o{true, ""};
  for (auto [H, K] : {std::pair{0.3, 0.5}, std::pair{0.5, 0.8}, std::pair{0.6, 1.4}}) {
    const auto r = gpb::verify_lemma1_bounds(H, K, gpb::default_lemma1_h_list(), 50);
    std::size_t bad = 0;
    for (const auto& p : r.points) bad += !p.pass;
    o.pass = o.pass && r.pass;
    o.detail += "(" + fmt("%g", H) + "," + fmt("%g", K) + ") " + std::to_string(r.points.size() - bad) + "/" +
                std::to_string(r.points.size()) + " points, max ratio " + fmt("%.3f", r.max_ratio) +
                ", quad rel err " + fmt("%.2g", r.quadrature_max_rel_err) + "; ";
  }
  return o;
}

// ---- 6 ----

double band_coverage(const gpb::RowMatrix& x, const gpb::ProcessSpec& spec, const gpb::Grid& grid) {
  const double M = static_cast<double>(x.rows());
  int inside = 0, total = 0;
  for (Eigen::Index i = 1; i < x.cols(); ++i) {
    for (Eigen::Index j = i; j < x.cols(); ++j) {
      const auto prod = (x.col(i).array() * x.col(j).array()).eval();
      const double m = prod.mean();
      const double se = std::sqrt((prod - m).square().sum() / (M - 1.0) / M);
      inside += std::abs(m - gpb::kernel(spec, grid.at(i), grid.at(j))) <= 3.0 * se;
      ++total;
    }
  }
  return static_cast<double>(inside) / total;
}

Outcome sampler_exactness() {
  const gpb::Grid grid(6);
  const std::size_t M = 20000;
  Outcome o{true, ""};
  auto check = [&](const std::string& label, const gpb::PathEnsemble& ens) {
    const double cov = band_coverage(ens.paths(), ens.process(), grid);
    o.pass = o.pass && cov >= 0.99;
    o.detail += label + " " + fmt("%.4f", cov) + "; ";
  };
  const auto circ = gpb::circulant_sample_fbm(0.7, grid, M, 1);
  check("circulant fBm(0.7)", circ);
  check("bfBm(0.6,1.4)", gpb::cholesky_sample(gpb::Bfbm{0.6, 1.4}, grid, M, 1));
  check("sfBm(0.3)", gpb::cholesky_sample(gpb::Sfbm{0.3}, grid, M, 1));
  check("X^0.8", gpb::cholesky_sample(gpb::LeiNualartX{0.8}, grid, M, 1));
  check("X^{0.5,0.8}", gpb::cholesky_sample(gpb::TimeChangedX{0.5, 0.8}, grid, M, 1));
  const auto chol = gpb::cholesky_sample(gpb::Fbm{0.7}, grid, M, 2);
  std::vector<double> a(M), b(M);
  for (std::size_t m = 0; m < M; ++m) {
    a[m] = circ.paths()(m, 64);
    b[m] = chol.paths()(m, 64);
  }
  const auto ks = gpb::ks_two_sample(a, b);
  o.pass = o.pass && ks.p_value > 0.01;
  o.detail += "coverage >= 0.99 at 3 SE; KS circulant vs cholesky at t=1: D=" + fmt("%.4f", ks.statistic) +
              " p=" + fmt("%.3f", ks.p_value);
  return o;
}

// ---- 7 ----

Outcome regularity_suite() {
  const std::vector<std::pair<std::string, gpb::ProcessSpec>> fams = {
      {"fBm(0.5)", gpb::Fbm{0.5}},           {"bfBm(0.6,1.4)", gpb::Bfbm{0.6, 1.4}},
      {"sfBm(0.3)", gpb::Sfbm{0.3}},         {"sfBm(0.75)", gpb::Sfbm{0.75}},
      {"X^{0.5,0.8}", gpb::TimeChangedX{0.5, 0.8}}, {"G(0.7,1.0)", gpb::Gprocess{0.7, 1.0}}};
  Outcome o{true, ""};
  for (const auto& [label, spec] : fams) {
    const auto r = gpb::run_regularity_experiment(spec, {}, {8, 10, 12}, 256, 1);
    o.pass = o.pass && r.critical_pass && r.super_pass;
    o.detail += "\n    " + label + ": critical drift " + fmt("%.4f", r.critical_drift) +
                (r.critical_pass ? " ok" : " FAIL") + ", super ratio " + fmt("%.3f", r.super_ratio) +
                (r.super_increasing ? " increasing" : " not increasing") + (r.super_pass ? " ok" : " FAIL");
  }
  o.detail = "drift <= 0.25, super-critical ratio >= 1.3 (auxiliary)" + o.detail;
  return o;
}

// ---- 8 ----

Outcome norm_oracles() {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const gpb::Grid grid(8);
  std::size_t mismatches = 0;
  double homog = 0.0, tri = 0.0;
  auto make = [&](int m) {
    std::vector<double> f(grid.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
      f[i] = m % 2 == 0 ? f[i - 1] + std::sqrt(grid.step()) * n01(gen) : u(gen);
    }
    return f;
  };
  for (int m = 0; m < 100; ++m) {
    const auto f = make(m), g = make(m + 1);
    const double alpha = 0.1 + 0.8 * (m % 9) / 8.0;
    if (gpb::orlicz_norm(f, grid, 1024).value != gpb::orlicz_norm_bruteforce(f, grid, 1024).value) ++mismatches;
    const double bo = gpb::besov_orlicz_norm(f, grid, alpha, 1024);
    if (bo != gpb::besov_orlicz_norm_bruteforce(f, grid, alpha, 1024)) ++mismatches;
    const double c = 0.25 + m;
    std::vector<double> cf(f), s(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      cf[i] *= c;
      s[i] += g[i];
    }
    homog = std::max(homog, std::abs(gpb::besov_orlicz_norm(cf, grid, alpha, 1024) - c * bo) / (c * bo));
    homog = std::max(homog, std::abs(gpb::orlicz_norm(cf, grid, 1024).value - c * gpb::orlicz_norm(f, grid, 1024).value) /
                                (c * gpb::orlicz_norm(f, grid, 1024).value));
    tri = std::max(tri, gpb::besov_orlicz_norm(s, grid, alpha, 1024) - bo - gpb::besov_orlicz_norm(g, grid, alpha, 1024));
    tri = std::max(tri, gpb::orlicz_norm(s, grid, 1024).value - gpb::orlicz_norm(f, grid, 1024).value -
                            gpb::orlicz_norm(g, grid, 1024).value);
  }
  const bool pass = mismatches == 0 && homog <= 1e-12 && tri <= 1e-10;
  return {pass, "100 paths, p_max=1024: " + std::to_string(mismatches) + " mismatches vs brute force, homogeneity rel err " +
                    fmt("%.2g", homog) + " (tol 1e-12), max triangle excess " + fmt("%.2g", tri) + " (tol 1e-10)"};
}

// ---- 9 ----

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

struct Run {
  int code;
  std::string stdout_bytes;
  std::map<std::string, std::string> files;  // everything but manifest.json
  bool digests_ok;
};

Run run_tool(const std::string& tool, const std::string& threads, const std::vector<std::string>& args,
             const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string cmd = quote(tool);
  if (!threads.empty()) cmd += " --threads " + threads;
  for (const auto& a : args) cmd += " " + quote(a == "@OUT" ? dir.string() : a);
  cmd += " > " + quote((dir / "stdout.txt").string()) + " 2> " + quote((dir / "stderr.txt").string());
  const int status = std::system(cmd.c_str());
  Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "stdout.txt"), {}, true};
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name != "manifest.json" && name != "stdout.txt" && name != "stderr.txt") r.files[name] = slurp(e.path());
  }
  if (fs::exists(dir / "manifest.json")) {
    std::ifstream in(dir / "manifest.json");
    const auto m = nlohmann::json::parse(in);
    for (const auto& o : m["outputs"]) {
      const fs::path p = dir / o["path"].get<std::string>();
      if (!fs::exists(p) || gpb::cli::sha256_file(p) != o["sha256"].get<std::string>()) r.digests_ok = false;
    }
  }
  return r;
}

Outcome reproducibility(const std::string& tool) {
  if (tool.empty()) return {false, "path to the gpb executable not given (--tool)"};
  const fs::path root = fs::temp_directory_path() / "gpb_acceptance_repro";
  const fs::path input = root / "input";
  fs::remove_all(root);
  fs::create_directories(input);
  {
    std::ostringstream cmd;
    cmd << quote(tool) << " sample --process fbm --H 0.4 --levels 8 --paths 12 --seed 4 --format bin --out "
        << quote(input.string()) << " > /dev/null";
    if (std::system(cmd.str().c_str()) != 0) return {false, "could not create the norms input"};
  }
  const std::string paths_bin = (input / "paths.bin").string();
  const std::vector<std::vector<std::string>> commands = {
      {"constants", "--name", "CK", "--K", "0.7"},
      {"constants", "--name", "lambda", "--H", "0.7", "--gamma", "1"},
      {"sample", "--process", "fbm", "--H", "0.3", "--levels", "9", "--paths", "16", "--seed", "3", "--out", "@OUT"},
      {"sample", "--process", "bfbm", "--H", "0.6", "--K", "1.4", "--levels", "7", "--paths", "40", "--format", "bin",
       "--out", "@OUT"},
      {"sample", "--process", "g", "--H", "0.7", "--gamma", "1", "--levels", "7", "--paths", "40", "--out", "@OUT"},
      {"sample", "--process", "xh", "--H", "0.5", "--K", "0.8", "--levels", "6", "--paths", "40", "--sampler",
       "spectral", "--out", "@OUT"},
      {"verify", "--check", "decomposition", "--name", "lei", "--H", "0.5", "--K", "0.5", "--out", "@OUT"},
      {"verify", "--check", "lemma1", "--H", "0.6", "--K", "1.4", "--out", "@OUT"},
      {"verify", "--check", "moments", "--H", "0.5", "--K", "0.8", "--paths", "3000", "--out", "@OUT"},
      {"verify", "--check", "ck-quadrature"},
      {"verify", "--check", "g-heat", "--H", "0.7", "--gamma", "1", "--levels", "2", "--out", "@OUT"},
      {"experiment", "--experiment", "regularity", "--process", "sfbm", "--H", "0.3", "--levels", "6,7,8", "--paths",
       "100", "--out", "@OUT"},
      {"experiment", "--experiment", "ynp", "--H", "0.5", "--K", "0.8", "--levels", "6,7,8", "--paths", "100",
       "--out", "@OUT"},
      {"experiment", "--experiment", "moment", "--H", "0.6", "--K", "1.4", "--paths", "2000", "--out", "@OUT"},
      {"norms", "--in", paths_bin, "--alpha", "0.35", "--ynp-exponent", "0.4", "--out", "@OUT"},
  };
  Outcome o{true, ""};
  int idx = 0;
  std::size_t files = 0;
  for (const auto& args : commands) {
    const fs::path base = root / std::to_string(idx++);
    const Run a = run_tool(tool, "", args, base / "a");
    const Run b = run_tool(tool, "1", args, base / "b");
    const Run c = run_tool(tool, "4", args, base / "c");
    const bool same = a.code == b.code && a.code == c.code && a.stdout_bytes == b.stdout_bytes &&
                      a.stdout_bytes == c.stdout_bytes && a.files == b.files && a.files == c.files;
    const bool ok = same && a.digests_ok && b.digests_ok && c.digests_ok && (a.code == 0 || a.code == 1) &&
                    !a.stdout_bytes.empty();
    files += a.files.size();
    if (!ok) {
      o.pass = false;
      o.detail += "'" + args[0] + " " + args[1] + " " + args[2] + "' differs or failed (exit " + std::to_string(a.code) +
                  "); ";
    }
  }
  fs::remove_all(root);
  o.detail += std::to_string(commands.size()) + " commands x {default, --threads 1, --threads 4}, " +
              std::to_string(files) + " output files + stdout compared byte for byte";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string tool;
  std::set<int> only;
  app.add_option("--tool", tool, "path to the gpb executable");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "constant fidelity", 5, constant_fidelity},
      {2, "decomposition identities", 5, decomposition_identities},
      {3, "G vs heat-equation covariance", 120, harnett_heat},
      {4, "moment identity", 60, moment_identity},
      {5, "increment variance bounds", 10, lemma_one},
      {6, "sampler exactness", 120, sampler_exactness},
      {7, "regularity suite", 600, regularity_suite},
      {8, "norm-engine oracles", 60, norm_oracles},
      {9, "reproducibility", 0, [&tool] { return reproducibility(tool); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s <= 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0) timing += fmt(" / budget %.0f s", c.budget_s);
    if (!in_time) timing += " OVER BUDGET";
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << timing << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
