#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vmflow/params.hpp"

namespace vmflow {

// Parameter-sweep request: one model parameter varied over an explicit value
// list (or an inclusive lo..hi range with count >= 2), everything else fixed.
struct SweepSpec {
    std::string axis;                  // ModelParams field name being varied
    std::vector<double> values;        // resolved axis values, ascending input order
    ModelParams fixed;                 // parameters held fixed along the sweep
    std::vector<std::string> outputs;  // subset of {"csv", "json", "svg"}
};

struct Config {
    ModelParams params;
    int grid_n = 1025;
    double tol = 1e-10;
    int max_outer = 64;
    std::optional<SweepSpec> sweep;
};

// Strict JSON loader: unknown keys anywhere are rejected (ValidationError
// naming the key), malformed JSON or wrong value types raise ParseError,
// invariant violations raise ValidationError naming the field.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);

// Canonical serialization; load(save(cfg)) reproduces cfg exactly.
std::string serialize_config(const Config& cfg);
void save_config(const Config& cfg, const std::string& path);

}  // namespace vmflow
