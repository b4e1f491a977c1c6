#include "gpb/process.h"

#include <cmath>
#include <sstream>

#include "gpb/errors.h"
#include "gpb/grid.h"

namespace gpb {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_H(double H, const char* family) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError(std::string(family) + ": requires 0<H<1, got H=" + fmt(H));
}

void check_K(double K, const char* family) {
  if (!(K > 0.0 && K < 2.0)) throw DomainError(std::string(family) + ": requires 0<K<2, got K=" + fmt(K));
}

}  // namespace

Grid::Grid(int level) : level_(level) {
  if (level < 1 || level > kMaxLevel) {
    throw DomainError("grid level must be in [1, " + std::to_string(kMaxLevel) + "], got " + std::to_string(level));
  }
}

std::vector<double> Grid::points() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = at(i);
  return t;
}

void validate(const ProcessSpec& spec) {
  std::visit(overloaded{
                 [](const Fbm& p) { check_H(p.H, "fbm"); },
                 [](const Bfbm& p) {
                   check_H(p.H, "bfbm");
                   check_K(p.K, "bfbm");
                   if (!(p.H * p.K < 1.0)) throw DomainError("bfbm: requires HK<1, got HK=" + fmt(p.H * p.K));
                 },
                 [](const Sfbm& p) { check_H(p.H, "sfbm"); },
                 [](const LeiNualartX& p) { check_K(p.K, "x"); },
                 [](const TimeChangedX& p) {
                   check_H(p.H, "xh");
                   check_K(p.K, "xh");
                 },
                 [](const Yprocess& p) { check_K(p.K, "y"); },
                 [](const Gprocess& p) {
                   if (!(p.H > 0.5 && p.H < 1.0)) throw DomainError("g: requires 1/2<H<1, got H=" + fmt(p.H));
                   if (!(p.gamma > 0.0 && p.gamma < 2.0 * p.H)) {
                     throw DomainError("g: requires 0<gamma<2H, got gamma=" + fmt(p.gamma));
                   }
                 },
             },
             spec);
}

std::string family_name(const ProcessSpec& spec) {
  return std::visit(overloaded{
                        [](const Fbm&) { return std::string("fbm"); },
                        [](const Bfbm&) { return std::string("bfbm"); },
                        [](const Sfbm&) { return std::string("sfbm"); },
                        [](const LeiNualartX&) { return std::string("x"); },
                        [](const TimeChangedX&) { return std::string("xh"); },
                        [](const Yprocess&) { return std::string("y"); },
                        [](const Gprocess&) { return std::string("g"); },
                    },
                    spec);
}

ProcessSpec make_process(const std::string& family, double H, double K, double gamma) {
  auto need = [&](double v, const char* name) {
    if (std::isnan(v)) throw DomainError("process '" + family + "' requires parameter " + name);
    return v;
  };
  ProcessSpec spec;
  if (family == "fbm") {
    spec = Fbm{need(H, "H")};
  } else if (family == "bfbm") {
    spec = Bfbm{need(H, "H"), need(K, "K")};
  } else if (family == "sfbm") {
    spec = Sfbm{need(H, "H")};
  } else if (family == "x") {
    spec = LeiNualartX{need(K, "K")};
  } else if (family == "xh") {
    spec = TimeChangedX{need(H, "H"), need(K, "K")};
  } else if (family == "y") {
    spec = Yprocess{need(K, "K")};
  } else if (family == "g") {
    spec = Gprocess{need(H, "H"), need(gamma, "gamma")};
  } else {
    throw DomainError("unknown process family '" + family + "' (expected fbm, bfbm, sfbm, x, xh, y or g)");
  }
  validate(spec);
  return spec;
}

nlohmann::json to_json(const ProcessSpec& spec) {
  nlohmann::json j;
  j["family"] = family_name(spec);
  std::visit(overloaded{
                 [&](const Fbm& p) { j["H"] = p.H; },
                 [&](const Bfbm& p) {
                   j["H"] = p.H;
                   j["K"] = p.K;
                 },
                 [&](const Sfbm& p) { j["H"] = p.H; },
                 [&](const LeiNualartX& p) { j["K"] = p.K; },
                 [&](const TimeChangedX& p) {
                   j["H"] = p.H;
                   j["K"] = p.K;
                 },
                 [&](const Yprocess& p) { j["K"] = p.K; },
                 [&](const Gprocess& p) {
                   j["H"] = p.H;
                   j["gamma"] = p.gamma;
                 },
             },
             spec);
  return j;
}

ProcessSpec process_from_json(const nlohmann::json& j) {
  const double nan = std::nan("");
  auto get = [&](const char* key) { return j.contains(key) ? j.at(key).get<double>() : nan; };
  return make_process(j.at("family").get<std::string>(), get("H"), get("K"), get("gamma"));
}

double critical_exponent(const ProcessSpec& spec) {
  return std::visit(overloaded{
                        [](const Fbm& p) { return p.H; },
                        [](const Bfbm& p) { return p.H * p.K; },
                        [](const Sfbm& p) { return p.H; },
                        [](const LeiNualartX& p) { return 0.5 * p.K; },
                        [](const TimeChangedX& p) { return p.H * p.K; },
                        [](const Yprocess&) -> double { throw UnsupportedRegion("y: no path regularity index"); },
                        [](const Gprocess& p) { return p.H - 0.5 * p.gamma; },
                    },
                    spec);
}

}  // namespace gpb
