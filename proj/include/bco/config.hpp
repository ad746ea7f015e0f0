#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bco/experiment.hpp"

namespace bco::io {

// Configuration problems carry the offending key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputSettings {
  std::string directory = "out";
  std::string prefix;  // defaults to the run name
};

struct RunConfig {
  experiments::ExperimentPlan plan;
  OutputSettings output;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);

  // Reads and validates a config file. The BCOCOEX_SEEDS environment variable
  // (comma-separated integers) overrides the seed list when set.
  static RunConfig load(const std::string& path);

  // Hash of the canonical serialized form; equal hashes mean semantically
  // identical plans.
  std::size_t plan_hash() const;
};

// Reference documentation for every config key, printed by the schema
// subcommand.
std::string schema_text();

nlohmann::json default_config_json();

}  // namespace bco::io
