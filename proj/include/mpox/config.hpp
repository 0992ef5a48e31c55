#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mpox/analysis.hpp"
#include "mpox/model.hpp"
#include "mpox/simulator.hpp"

namespace mpox {

inline constexpr const char* kVersion = "0.1.0";

struct OutputConfig {
    std::string dir = "out";

    bool operator==(const OutputConfig&) const = default;
};

struct ScanConfig {
    std::string x_name = "mu_h";
    double x_lo = 5e-4;
    double x_hi = 2e-2;
    std::string y_name = "mu_r";
    double y_lo = 5e-7;
    double y_hi = 2e-3;
    int resolution = 50;

    bool operator==(const ScanConfig&) const = default;
};

struct RunConfig {
    ModelParams model = baseline_params();
    StructuralBounds bounds;
    SimConfig sim;
    OutputConfig output;
    ScanConfig scan;

    bool operator==(const RunConfig&) const = default;
};

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line_in = 0) : std::runtime_error(what), line(line_in) {}
    int line; // 1-based source line, 0 when not tied to one
};

struct ParsedConfig {
    RunConfig config;
    std::vector<std::string> defaulted; // "section.key" for every field left at its default
};

// Flat sectioned key-value text. Empty input yields the full baseline.
// Unknown sections or keys, malformed values, and violated invariants all
// throw ConfigError naming the key, the constraint, and the line.
ParsedConfig parse_config(const std::string& text);

// Inverse of parse_config up to formatting: parse(serialize(c)).config == c.
std::string serialize_config(const RunConfig& cfg);

} // namespace mpox
