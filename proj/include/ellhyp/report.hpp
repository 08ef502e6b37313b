#pragma once
// Scenarios, residual reports and their JSON form. Complex numbers are
// [re, im] pairs; a non-finite residual is written as null and read back as
// +inf.

#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "core.hpp"
#include "json.hpp"

namespace ellhyp {

using ParamMap = std::map<std::string, cplx>;

struct Scenario {
  std::string check_id;
  ParamMap parameters;
  std::uint64_t seed = 0;
};

struct ResidualReport {
  std::string check_id;
  ParamMap parameters;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int nodes_used = 0;
  std::int64_t runtime_ms = 0;
  std::string notes;

  bool operator==(const ResidualReport&) const = default;
};

inline nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw invalid_argument("json: complex values are [re, im] or a real number");
}

inline nlohmann::json params_to_json(const ParamMap& P) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : P) j[k] = complex_to_json(v);
  return j;
}

inline ParamMap params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw invalid_argument("json: parameters must be an object");
  ParamMap P;
  for (auto it = j.begin(); it != j.end(); ++it) P[it.key()] = complex_from_json(it.value());
  return P;
}

// ordered_json keeps the field order of the report type
inline nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["check_id"] = r.check_id;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.parameters) p[k] = {v.real(), v.imag()};
  j["parameters"] = p;
  if (std::isfinite(r.residual))
    j["residual"] = r.residual;
  else
    j["residual"] = nullptr;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["nodes_used"] = r.nodes_used;
  j["runtime_ms"] = r.runtime_ms;
  j["notes"] = r.notes;
  return j;
}

inline std::string to_json_line(const ResidualReport& r) { return to_json(r).dump(); }

inline ResidualReport report_from_json(const nlohmann::json& j) {
  ResidualReport r;
  r.check_id = j.at("check_id").get<std::string>();
  r.parameters = params_from_json(j.at("parameters"));
  const auto& res = j.at("residual");
  r.residual = res.is_null() ? std::numeric_limits<double>::infinity() : res.get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.nodes_used = j.at("nodes_used").get<int>();
  r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
  r.notes = j.at("notes").get<std::string>();
  return r;
}

inline ResidualReport report_from_json_line(const std::string& line) {
  return report_from_json(nlohmann::json::parse(line));
}

}  // namespace ellhyp
