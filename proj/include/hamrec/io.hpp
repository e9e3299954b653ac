#pragma once

// JSON serialization of the public record types and CSV float formatting.

#include <cstdio>
#include <string>

#include <json.hpp>

#include "hamrec/models.hpp"
#include "hamrec/pipeline.hpp"
#include "hamrec/spectral.hpp"

namespace hamrec {

// 17 significant digits round-trips a double exactly.
inline std::string format_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline nlohmann::json to_json(const CoefficientVector& a) {
  nlohmann::json j;
  j["kind"] = model_name(a.kind);
  j["L"] = a.length;
  j["seed"] = a.seed;
  j["values"] = std::vector<double>(a.values.begin(), a.values.end());
  return j;
}

inline CoefficientVector coefficients_from_json(const nlohmann::json& j) {
  CoefficientVector a;
  a.kind = model_from_name(j.at("kind").get<std::string>());
  a.length = j.at("L").get<int>();
  a.seed = j.at("seed").get<std::uint64_t>();
  const auto vals = j.at("values").get<std::vector<double>>();
  a.values = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  return a;
}

inline nlohmann::json to_json(const SteadyStateSpec& spec) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : spec.classes)
    classes.push_back({{"weight", c.weight}, {"indices", c.indices}});
  return {{"classes", classes}};
}

inline SteadyStateSpec steady_state_spec_from_json(const nlohmann::json& j) {
  SteadyStateSpec spec;
  for (const auto& c : j.at("classes")) {
    WeightClass wc;
    wc.weight = c.at("weight").get<double>();
    wc.indices = c.at("indices").get<std::vector<int>>();
    spec.classes.push_back(std::move(wc));
  }
  return spec;
}

inline nlohmann::json to_json(const TrialResult& t) {
  nlohmann::json j;
  j["kind"] = model_name(t.kind);
  j["L"] = t.length;
  j["profile"] = t.profile;
  j["seed"] = t.seed;
  j["S"] = t.s_count;
  j["N"] = t.n_terms;
  j["rank"] = t.report.rank;
  j["nullity"] = t.report.nullity;
  j["delta"] = t.report.delta;
  j["success"] = t.report.success;
  j["singular_tail"] = {t.report.singular_tail[0], t.report.singular_tail[1],
                        t.report.singular_tail[2]};
  return j;
}

}  // namespace hamrec
