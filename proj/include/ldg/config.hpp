#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ldg/flow.hpp"
#include "ldg/grid.hpp"

namespace ldg {

// Full description of one run. Serialized as a single JSON document; unknown
// keys are rejected everywhere (typo safety), and parse(emit(c)) == c.
struct RunConfig {
    int n = 513;
    double epsilon = 0.01;
    double beta = 2.0;
    BoundarySpec boundary;           // delta1=0.3, delta2=0.2, phases 0
    FlowConfig flow;
    std::vector<double> annulus_radii;  // empty = geometric ladder [5 eps, 0.15]
    int annulus_circles = 12;
    double expansion_r = 0.1;
    std::string outdir = "out";
    bool deterministic = true;
    std::uint64_t seed = 20260814;

    // Throws ValidationError (or CoreUnresolved) naming the offending field.
    void validate() const;
    // Radii to use for the circle diagnostics (the ladder default if unset).
    std::vector<double> radii() const;
};

RunConfig parse_config_json(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& p);
std::string emit_config_json(const RunConfig& c);

// Artifact inventory written at the end of a command: config echo, version,
// wall time, and every emitted file with size and checksum. Written last so
// its presence certifies a complete artifact set.
struct ManifestEntry {
    std::string path;      // relative to the manifest directory
    std::uint64_t bytes = 0;
    std::string fnv1a64;   // hex
};

struct RunManifest {
    std::string command;
    std::string config_json;
    double wall_seconds = 0.0;
    std::vector<std::string> notes;   // e.g. failed sweep points
    std::vector<ManifestEntry> files;

    void add_file(const std::filesystem::path& base, const std::filesystem::path& file);
    void write(const std::filesystem::path& path) const;  // path not listed in itself
};

inline constexpr const char* kToolVersion = "ldglab 1.0.0";

}  // namespace ldg
