#include "dyadic/dyad_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dyadic/errors.hpp"

namespace dyadic {
namespace {

using nlohmann::json;

constexpr std::array<const char*, kTestbedVars> kResidualKeys{"heart", "sleep", "sqrtstep", "mood_target",
                                                              "mood_partner"};
constexpr std::array<const char*, 4> kStatKeys{"heart", "sleep", "sqrtstep", "mood"};

class RecordReader {
 public:
  RecordReader(const json& j, std::size_t index) : j_(j), index_(index) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ParseError("dyad record " + std::to_string(index_) + ", field \"" + field + "\": " + what);
  }

  const json& at(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  double number(const std::string& key) const { return number(at(j_, key, ""), key); }

  template <std::size_t N>
  std::array<double, N> array(const std::string& key) const {
    const json& v = at(j_, key, "");
    if (!v.is_array()) fail(key, "expected an array");
    if (v.size() != N) fail(key, "expected " + std::to_string(N) + " numbers, got " + std::to_string(v.size()));
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], key + "[" + std::to_string(i) + "]");
    return out;
  }

  double nested(const std::string& group, const std::string& name, const std::string& field) const {
    const json& g = at(j_, group, "");
    const json& n = at(g, name, group);
    return number(at(n, field, group + "." + name), group + "." + name + "." + field);
  }

 private:
  const json& j_;
  std::size_t index_;
};

}  // namespace

std::string dyad_models_to_json(const std::vector<DyadModel>& models) {
  json doc;
  doc["schema_version"] = kDyadSchemaVersion;
  json list = json::array();
  for (const DyadModel& m : models) {
    json r;
    r["beta_heart"] = m.beta_heart;
    r["beta_sleep"] = m.beta_sleep;
    r["beta_sqrtstep"] = m.beta_sqrtstep;
    r["theta_mood_target"] = m.theta_mood_target;
    r["theta_mood_partner"] = m.theta_mood_partner;
    for (std::size_t i = 0; i < kResidualKeys.size(); ++i)
      r["residual"][kResidualKeys[i]] = {{"rho", m.residual[i].rho}, {"innovation_sd", m.residual[i].innovation_sd}};
    r["tau0"] = m.tau0;
    r["tau1"] = m.tau1;
    r["tau_high"] = m.tau_high;
    for (std::size_t i = 0; i < kStatKeys.size(); ++i)
      r["stats"][kStatKeys[i]] = {{"mean", m.stats[i].mean}, {"std", m.stats[i].std}};
    list.push_back(std::move(r));
  }
  doc["dyads"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::vector<DyadModel> dyad_models_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dyad model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("dyad model file must be a JSON object");
  const auto version = doc.find("schema_version");
  if (version == doc.end() || !version->is_number_integer())
    throw ParseError("dyad model file: missing integer \"schema_version\"");
  if (version->get<int>() != kDyadSchemaVersion)
    throw ParseError("dyad model file: unsupported schema_version " + std::to_string(version->get<int>()));
  const auto dyads = doc.find("dyads");
  if (dyads == doc.end() || !dyads->is_array()) throw ParseError("dyad model file: missing array \"dyads\"");

  std::vector<DyadModel> out;
  out.reserve(dyads->size());
  for (std::size_t i = 0; i < dyads->size(); ++i) {
    const RecordReader rd((*dyads)[i], i);
    if (!(*dyads)[i].is_object()) rd.fail("", "expected an object");
    DyadModel m;
    m.beta_heart = rd.array<6>("beta_heart");
    m.beta_sleep = rd.array<6>("beta_sleep");
    m.beta_sqrtstep = rd.array<6>("beta_sqrtstep");
    m.theta_mood_target = rd.array<3>("theta_mood_target");
    m.theta_mood_partner = rd.array<3>("theta_mood_partner");
    for (std::size_t v = 0; v < kResidualKeys.size(); ++v) {
      m.residual[v].rho = rd.nested("residual", kResidualKeys[v], "rho");
      m.residual[v].innovation_sd = rd.nested("residual", kResidualKeys[v], "innovation_sd");
    }
    m.tau0 = rd.number("tau0");
    m.tau1 = rd.number("tau1");
    m.tau_high = rd.number("tau_high");
    for (std::size_t s = 0; s < kStatKeys.size(); ++s) {
      m.stats[s].mean = rd.nested("stats", kStatKeys[s], "mean");
      m.stats[s].std = rd.nested("stats", kStatKeys[s], "std");
    }
    try {
      check_model(m);
    } catch (const InvalidInput& e) {
      rd.fail(std::string(e.what()).substr(0, std::string(e.what()).find(' ')), e.what());
    }
    out.push_back(m);
  }
  return out;
}

void write_dyad_models(const std::filesystem::path& path, const std::vector<DyadModel>& models) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << dyad_models_to_json(models);
  if (!os) throw IoError("write to " + path.string() + " failed");
}

std::vector<DyadModel> ingest_dyad_models(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return dyad_models_from_json(ss.str());
}

}  // namespace dyadic
