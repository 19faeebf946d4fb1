#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "srwe/scenarios.hpp"

namespace srwe {

/// Raised on malformed configuration files; the message carries the offending
/// key or the parser's position diagnostics.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    EvChargingConfig game;  // robustness epsilons live in game.epsilons
    PerturbationConfig perturbation;
    PoaConfig poa;
};

/// Strict JSON load: unknown keys are rejected by name, missing required
/// blocks are listed, defaults are filled as documented in the README.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

/// Serializes the effective configuration (all defaults resolved);
/// parse_config_text(write_config(c)) reproduces c.
std::string write_config(const RunConfig& config);

}  // namespace srwe
