#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rejectlab/abstain.hpp"
#include "rejectlab/checks.hpp"
#include "rejectlab/constructions.hpp"
#include "rejectlab/curves.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/erm.hpp"
#include "rejectlab/errors.hpp"

namespace rejectlab {

using json = nlohmann::json;

namespace detail {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw validation_error(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw validation_error(std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace detail

// shortest-round-trip-free fixed formatting: 17 significant digits always
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json distribution_to_json(const FiniteDistribution& dist) {
  json j;
  j["m"] = dist.domain_size();
  std::vector<double> w(dist.domain_size()), e(dist.domain_size());
  for (std::size_t x = 0; x < dist.domain_size(); ++x) {
    w[x] = dist.weight(x);
    e[x] = dist.eta1(x);
  }
  j["weights"] = w;
  j["eta1"] = e;
  return j;
}

inline FiniteDistribution distribution_from_json(const json& j) {
  const auto m = detail::get_field<std::size_t>(j, "m");
  auto w = detail::get_field<std::vector<double>>(j, "weights");
  auto e = detail::get_field<std::vector<double>>(j, "eta1");
  require(w.size() == m && e.size() == m, "weights/eta1 length must equal m");
  return FiniteDistribution(std::move(w), std::move(e));
}

inline json class_to_json(const HypothesisClass& F) {
  json j;
  j["m"] = F.domain_size();
  std::vector<std::string> members;
  for (std::size_t i = 0; i < F.size(); ++i) members.push_back(F[i].to_string());
  j["members"] = members;
  return j;
}

inline HypothesisClass class_from_json(const json& j) {
  const auto m = detail::get_field<std::size_t>(j, "m");
  const auto bits = detail::get_field<std::vector<std::string>>(j, "members");
  std::vector<Hypothesis> members;
  for (const std::string& b : bits) {
    require(b.size() == m, "member string length must equal m");
    members.push_back(Hypothesis::from_string(b));
  }
  return HypothesisClass(m, std::move(members));
}

inline std::string abstaining_to_string(const AbstainingHypothesis& f) {
  std::string s(f.domain_size(), '0');
  for (std::size_t x = 0; x < f.domain_size(); ++x)
    s[x] = f.abstains(x) ? '*' : static_cast<char>('0' + f(x));
  return s;
}

inline json abstainer_to_json(const AbstainerModel& model) {
  json j;
  j["base"] = model.base_index;
  j["partner"] = model.partner_index;
  j["p"] = model.p;
  j["c"] = model.c;
  j["delta"] = model.delta;
  j["split"] = model.split;
  j["abstain_atoms"] = model.predictor.abstain_atoms();
  j["predictor"] = abstaining_to_string(model.predictor);
  return j;
}

inline json almost_erm_to_json(const AlmostErmSet& set) {
  json j;
  j["erm"] = set.erm_index;
  j["members"] = set.members;
  j["alpha"] = set.alpha;
  j["c"] = set.c;
  return j;
}

inline json deviation_to_json(const DeviationStatistic& stat, const std::string& check, json params) {
  json j;
  j["check"] = check;
  j["params"] = std::move(params);
  j["trials"] = stat.trials;
  j["quantile_levels"] = stat.quantile_levels;
  j["quantiles"] = stat.quantile_values;
  return j;
}

inline json construction_meta_to_json(const ConstructionMeta& meta) {
  json j;
  j["family"] = meta.family;
  j["parameters"] = meta.parameters;
  j["margin"] = meta.h;
  j["diameter"] = meta.diameter;
  j["vc"] = meta.vc;
  j["best_index"] = meta.fstar_index;
  j["best_risk"] = meta.fstar_risk;
  j["approx_error"] = meta.approx_error;
  return j;
}

inline std::string curve_to_csv(const LearningCurve& curve) {
  std::string out = "n,mean_excess,stderr,abstain_mass,reps\n";
  for (const CurveRow& row : curve.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.mean_excess);
    out += ',';
    out += format_double(row.stderr_excess);
    out += ',';
    out += format_double(row.mean_abstain_mass);
    out += ',';
    out += std::to_string(row.reps);
    out += '\n';
  }
  return out;
}

inline json curve_to_json(const LearningCurve& curve) {
  json j;
  j["learner"] = curve.learner;
  j["risk"] = curve.risk;
  j["seed"] = curve.seed;
  json rows = json::array();
  for (const CurveRow& row : curve.rows) {
    json r;
    r["n"] = row.n;
    r["mean_excess"] = row.mean_excess;
    r["stderr"] = row.stderr_excess;
    r["abstain_mass"] = row.mean_abstain_mass;
    r["reps"] = row.reps;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

// Complete file write or no file at all: write to a sibling temp path, then
// rename into place.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw validation_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline json json_from_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw validation_error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// 16-hex-digit digest of a canonical (sorted-key) JSON dump, used for
// deterministic output file naming.
inline std::string config_hash(const json& j) {
  const std::uint64_t h = fnv1a64(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rejectlab
