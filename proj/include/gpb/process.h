#pragma once

#include <json.hpp>
#include <string>
#include <variant>

namespace gpb {

struct Fbm {
  double H;
};
struct Bfbm {
  double H;
  double K;
};
struct Sfbm {
  double H;
};
struct LeiNualartX {
  double K;
};
struct TimeChangedX {
  double H;
  double K;
};
struct Yprocess {
  double K;
};
struct Gprocess {
  double H;
  double gamma;
};

using ProcessSpec = std::variant<Fbm, Bfbm, Sfbm, LeiNualartX, TimeChangedX, Yprocess, Gprocess>;

/// Throws DomainError naming the violated constraint.
void validate(const ProcessSpec& spec);

std::string family_name(const ProcessSpec& spec);

/// Builds a spec from a family name ("fbm", "bfbm", "sfbm", "x", "xh",
/// "y", "g") and a parameter lookup; missing parameters throw DomainError.
ProcessSpec make_process(const std::string& family, double H, double K, double gamma);

nlohmann::json to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const nlohmann::json& j);

/// Smoothness index at which the family's paths are proved to lie in the
/// Besov-Orlicz space: HK for bfBm and X^{H,K}, H for fBm and sfBm,
/// H - gamma/2 for G, K/2 for X^K.
double critical_exponent(const ProcessSpec& spec);

}  // namespace gpb
