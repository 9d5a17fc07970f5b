#ifndef FELLBAND_CONFIG_HPP
#define FELLBAND_CONFIG_HPP

#include <optional>
#include <string>

#include "fellband/norms.hpp"
#include "fellband/section.hpp"
#include "fellband/weight.hpp"

// vendored single-header nlohmann/json
#include <json.hpp>

namespace fellband {

using Json = nlohmann::json;

// Exact rational parsing: "p/q" strings or plain decimals.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool exact = true;  // false when parsed from a decimal
  double real = 0.0;

  double value() const {
    return exact ? static_cast<double>(num) / static_cast<double>(den) : real;
  }
};

Rational parse_rational(const std::string& text);
Rational parse_rational(const Json& j);

// {"kind":"Zd","d":2} | {"kind":"Heis3"} | {"kind":"Cyclic","m":6}
// | {"kind":"DirectSumZ2","bits":10} | {"kind":"Product","left":..,"right":..},
// optional "normalized_measure": true.  Shorthand: "Zd:2", "Cyclic:6", ...
GroupModel parse_group(const Json& j);
GroupModel parse_group_shorthand(const std::string& text);

// {"kind":"none","k":1} | {"kind":"nc_torus","theta":"1/3"}
// | {"kind":"carry","beta":0.37} | {"kind":"inner_rot","angle":0.7}
// | {"kind":"pauli"} | {"kind":"perm_diag"}.
// Shorthand: "none", "nc_torus:1/3", "carry:0.37", "inner_rot:0.7", "pauli",
// "perm_diag".
TwistedSystem::Ptr parse_twist(const Json& j, GroupModel group);
TwistedSystem::Ptr parse_twist_shorthand(const std::string& text, GroupModel group);

// {"kind":"one"|"word"|"word_power","s":2} | {"kind":"locally_finite","m":[..]}.
// Shorthand: "one", "word", "word_power:2", "locally_finite:1,2,4".
Weight parse_weight(const Json& j, std::shared_ptr<CayleyBall> ball);
Weight parse_weight_shorthand(const std::string& text, std::shared_ptr<CayleyBall> ball);

// Section literals: {"points":[{"point":[1,0],"fiber":[[[re,im],...],...]},...]}
// Named elements: {"name":"laplacian"|"harper"|"unit"|"shifted_laplacian"}
// Recipes: {"random":{"radius":2,"points":6,"selfadjoint":true,"seed":7}}
CrossSection parse_section(const Json& j, TwistedSystem::Ptr sys);
CrossSection named_section(const std::string& name, TwistedSystem::Ptr sys);

Json section_to_json(const CrossSection& phi);
// CSV rows: coords..., i, j, re, im
std::string section_to_csv(const CrossSection& phi);

// NormReport serialization: value, method tag, bound flag, error budget.
Json norm_report_json(const NormReport& report);

struct ExperimentConfig {
  GroupModel group = GroupModel::zd(1);
  TwistedSystem::Ptr system;
  std::optional<std::string> weight_kind;  // raw spec, resolved lazily
  Json weight_json;
  Json phi_json;
  std::string op;  // growth | calculus | invert | spectrum | verify | weights
  double tol = 1e-6;
  double p = 2.0;
  std::uint64_t seed = 7;
  std::size_t budget_elems = CayleyBall::kDefaultBudget;
  std::string out_dir = ".";
  std::string emit = "json";  // csv | json
  Json extra;                 // subcommand-specific knobs

  static ExperimentConfig from_json(const Json& j);
};

}  // namespace fellband

#endif
