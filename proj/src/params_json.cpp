#include "tpa/params_json.hpp"

#include <array>
#include <string>
#include <string_view>

#include "tpa/errors.hpp"

namespace tpa {
namespace {

template <std::size_t N>
void require_exact_keys(const nlohmann::json& obj, const std::array<std::string_view, N>& keys,
                        std::string_view where) {
  if (!obj.is_object()) throw InvalidParameter(std::string(where) + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw InvalidParameter(std::string(where) + ": unknown key '" + key + "'");
  }
  for (auto k : keys) {
    if (!obj.contains(std::string(k)))
      throw InvalidParameter(std::string(where) + ": missing key '" + std::string(k) + "'");
  }
}

double number(const nlohmann::json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw InvalidParameter(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json to_json(const ParameterSet& p) {
  return {{"gamma", p.atom.gamma},
          {"delta_big", p.atom.delta_big},
          {"mu", p.atom.mu},
          {"phi", p.field.phi},
          {"a_ratio", p.field.a_ratio},
          {"delta", p.field.delta},
          {"dist", {{"kind", std::string(to_string(p.dist.kind))}, {"gamma_v", p.dist.gamma_v}}}};
}

ParameterSet parameter_set_from_json(const nlohmann::json& doc) {
  static constexpr std::array<std::string_view, 7> top = {"gamma", "delta_big", "mu",  "phi",
                                                          "a_ratio", "delta",   "dist"};
  static constexpr std::array<std::string_view, 2> dist_keys = {"kind", "gamma_v"};
  require_exact_keys(doc, top, "parameters");
  require_exact_keys(doc.at("dist"), dist_keys, "parameters.dist");

  const auto& kind = doc.at("dist").at("kind");
  if (!kind.is_string()) throw InvalidParameter("dist.kind must be a string");

  ParameterSet p;
  p.atom = {number(doc, "gamma"), number(doc, "delta_big"), number(doc, "mu")};
  p.field = {number(doc, "phi"), number(doc, "a_ratio"), number(doc, "delta")};
  p.dist = {distribution_kind_from_string(kind.get<std::string>()),
            number(doc.at("dist"), "gamma_v")};
  validate(p.atom);
  validate(p.field);
  validate(p.dist);
  return p;
}

}  // namespace tpa
