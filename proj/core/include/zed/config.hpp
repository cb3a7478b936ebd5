#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "zed/sim.hpp"

namespace zed::config {

using Json = nlohmann::ordered_json;

/// Strict parse: unknown keys, wrong types and failed validation are all
/// reported together in one ConfigError. Missing keys take defaults.
sim::ScenarioConfig from_json(const Json& j);

/// Full serialization of the fields the configured engine reads, in a fixed
/// key order. from_json(to_json(c)) == c.
Json to_json(const sim::ScenarioConfig& c);

sim::ScenarioConfig load(const std::string& path);
sim::ScenarioConfig parse(std::istream& in);

/// Value of SEED from the environment, if set to a valid unsigned integer.
std::optional<std::uint64_t> seed_from_env();

}  // namespace zed::config
