#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "heom/types.hpp"

namespace heom {

// A validated run configuration. `doc` is the canonical form: all defaults
// filled, so serialize/parse round-trips to an identical structure.
struct RunConfig {
  nlohmann::json* doc = nullptr;  // owned; pimpl to keep json out of the ABI

  RunConfig();
  RunConfig(const RunConfig&);
  RunConfig(RunConfig&&) noexcept;
  RunConfig& operator=(RunConfig);
  ~RunConfig();

  const nlohmann::json& json() const { return *doc; }
  nlohmann::json& json() { return *doc; }
};

// Parses and validates a configuration document. Unknown keys are rejected;
// violations raise ConfigError with a path-qualified message.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::string serialize(const RunConfig& config);

}  // namespace heom
