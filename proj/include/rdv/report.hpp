#pragma once

// Analysis reports: named scalars, measures, verdicts and tolerances with a
// JSON round trip and a flat CSV export of the scalars.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdv/core.hpp"
#include "rdv/spaces.hpp"

namespace rdv {

struct AnalysisReport {
  std::string space_name;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> measures;
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> tolerances;

  bool operator==(const AnalysisReport&) const = default;
};

namespace detail {

// JSON has no infinities; they travel as the strings "inf" and "-inf".
inline nlohmann::json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) throw Error(ErrorCode::NonFiniteEntry, "report value is NaN");
  return v;
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
  }
  throw Error(ErrorCode::SchemaError, "expected a number in report");
}

}  // namespace detail

inline nlohmann::json report_to_json(const AnalysisReport& r) {
  nlohmann::json doc;
  doc["space_name"] = r.space_name;
  doc["parameters"] = r.parameters;
  auto& scalars = doc["scalars"] = nlohmann::json::object();
  for (const auto& [k, v] : r.scalars) scalars[k] = detail::number_to_json(v);
  auto& measures = doc["measures"] = nlohmann::json::object();
  for (const auto& [k, v] : r.measures) {
    auto arr = nlohmann::json::array();
    for (double x : v) arr.push_back(detail::number_to_json(x));
    measures[k] = std::move(arr);
  }
  doc["verdicts"] = r.verdicts;
  auto& tolerances = doc["tolerances"] = nlohmann::json::object();
  for (const auto& [k, v] : r.tolerances) tolerances[k] = detail::number_to_json(v);
  return doc;
}

inline AnalysisReport report_from_json(const nlohmann::json& doc) {
  AnalysisReport r;
  try {
    r.space_name = doc.at("space_name").get<std::string>();
    r.parameters = doc.at("parameters").get<std::map<std::string, std::string>>();
    for (const auto& [k, v] : doc.at("scalars").items()) r.scalars[k] = detail::number_from_json(v);
    for (const auto& [k, v] : doc.at("measures").items()) {
      auto& out = r.measures[k];
      for (const auto& x : v) out.push_back(detail::number_from_json(x));
    }
    r.verdicts = doc.at("verdicts").get<std::map<std::string, bool>>();
    for (const auto& [k, v] : doc.at("tolerances").items()) {
      r.tolerances[k] = detail::number_from_json(v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  return r;
}

inline std::string report_to_string(const AnalysisReport& r) {
  return report_to_json(r).dump(2) + "\n";
}

inline AnalysisReport report_from_string(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return report_from_json(doc);
}

inline void save_report(const AnalysisReport& r, const std::string& path) {
  write_text_file(path, report_to_string(r));
}

inline AnalysisReport load_report(const std::string& path) {
  return report_from_string(read_text_file(path));
}

/// One "name,value" line per scalar, sorted by name.
inline std::string report_to_csv(const AnalysisReport& r) {
  std::string out = "name,value\n";
  for (const auto& [k, v] : r.scalars) {
    out += k;
    out += ',';
    const auto j = detail::number_to_json(v);
    out += j.is_string() ? j.get<std::string>() : j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace rdv
