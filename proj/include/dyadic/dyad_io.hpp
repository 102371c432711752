#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dyadic/testbed.hpp"

namespace dyadic {

inline constexpr int kDyadSchemaVersion = 1;

// JSON document: {"schema_version": 1, "dyads": [record, ...]}. Each record
// holds beta_heart, beta_sleep, beta_sqrtstep (6 numbers each),
// theta_mood_target, theta_mood_partner (3 each), residual.{heart, sleep,
// sqrtstep, mood_target, mood_partner}.{rho, innovation_sd}, tau0, tau1,
// tau_high, and stats.{heart, sleep, sqrtstep, mood}.{mean, std}.
std::string dyad_models_to_json(const std::vector<DyadModel>& models);
// Throws ParseError naming the record index and field.
std::vector<DyadModel> dyad_models_from_json(const std::string& text);

void write_dyad_models(const std::filesystem::path& path, const std::vector<DyadModel>& models);
std::vector<DyadModel> ingest_dyad_models(const std::filesystem::path& path);

}  // namespace dyadic
