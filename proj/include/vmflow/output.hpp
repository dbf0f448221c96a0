#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vmflow {

inline constexpr const char* kToolVersion = "vmflow 0.1.0";

// FNV-1a 64-bit over the canonical run inputs. Wall-clock time and thread
// counts never enter the hash, so reruns with the same inputs reproduce the
// same file headers byte for byte.
std::uint64_t fnv1a64(std::string_view s);
std::string hash_hex(std::uint64_t h);

// Shortest round-trip decimal (%.17g), C-locale '.' decimal point.
std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& content);

struct RunManifest {
    std::string command;
    std::string canonical_inputs;  // the exact string the hash covers
    std::uint64_t hash = 0;
    std::vector<int> grid_sizes;
    std::map<std::string, double> tolerances;
    std::vector<std::string> output_paths;
    double wall_clock_seconds = 0.0;  // reporting only, excluded from the hash
    std::string tool_version;
};

RunManifest make_manifest(std::string command, std::string canonical_inputs,
                          std::vector<int> grid_sizes,
                          std::map<std::string, double> tolerances,
                          std::vector<std::string> output_paths);

void write_manifest_json(const RunManifest& manifest, const std::string& path);

// Standalone SVG line plot with labeled axes and the manifest hash in a
// comment. Empty data is rejected without touching the filesystem: returns
// false and stores an explanation in *message. File failures throw IOError.
bool emit_profile_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<double>& x, const std::vector<double>& y,
                      std::uint64_t manifest_hash, std::string* message);

}  // namespace vmflow
