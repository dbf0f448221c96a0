#include "vmflow/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vmflow {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + where + it.key() + "'");
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key))
        throw ValidationError("missing required key '" + where + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ParseError("'" + where + key + "' must be a number");
    return v.get<double>();
}

ModelParams parse_params(const json& obj) {
    static const std::set<std::string> allowed(param_names().begin(), param_names().end());
    reject_unknown_keys(obj, "params.", allowed);
    ModelParams p;
    for (const std::string& name : param_names()) {
        if (name == "omega" && !obj.contains(name)) continue;  // optional, defaults to 1
        set_param_by_name(p, name, require_number(obj, "params.", name));
    }
    p.validate();
    return p;
}

SweepSpec parse_sweep(const json& obj, const ModelParams& fixed) {
    reject_unknown_keys(obj, "sweep.",
                        {"axis", "values", "lo", "hi", "count", "outputs"});
    SweepSpec s;
    s.fixed = fixed;
    if (!obj.contains("axis") || !obj.at("axis").is_string())
        throw ValidationError("sweep.axis: required string naming a parameter");
    s.axis = obj.at("axis").get<std::string>();
    get_param_by_name(fixed, s.axis);  // throws ValidationError for unknown names

    const bool has_values = obj.contains("values");
    const bool has_range = obj.contains("lo") || obj.contains("hi") || obj.contains("count");
    if (has_values == has_range)
        throw ValidationError("sweep: give either 'values' or 'lo'/'hi'/'count'");
    if (has_values) {
        const json& vals = obj.at("values");
        if (!vals.is_array() || vals.empty())
            throw ParseError("sweep.values must be a non-empty array of numbers");
        for (const json& v : vals) {
            if (!v.is_number()) throw ParseError("sweep.values must be numbers");
            s.values.push_back(v.get<double>());
        }
    } else {
        const double lo = require_number(obj, "sweep.", "lo");
        const double hi = require_number(obj, "sweep.", "hi");
        const double count_raw = require_number(obj, "sweep.", "count");
        const int count = static_cast<int>(count_raw);
        if (count != count_raw || count < 2)
            throw ValidationError("sweep.count: must be an integer >= 2");
        for (int i = 0; i < count; ++i)
            s.values.push_back(lo + (hi - lo) * i / (count - 1));
    }
    if (obj.contains("outputs")) {
        const json& outs = obj.at("outputs");
        if (!outs.is_array()) throw ParseError("sweep.outputs must be an array");
        for (const json& o : outs) {
            if (!o.is_string()) throw ParseError("sweep.outputs must be strings");
            const std::string name = o.get<std::string>();
            if (name != "csv" && name != "json" && name != "svg")
                throw ValidationError("sweep.outputs: unknown output '" + name + "'");
            s.outputs.push_back(name);
        }
    } else {
        s.outputs = {"csv", "json"};
    }
    // Every point of the sweep must itself be a valid parameter set.
    for (double v : s.values) {
        ModelParams point = fixed;
        set_param_by_name(point, s.axis, v);
        point.validate();
    }
    return s;
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("config: top level must be an object");
    reject_unknown_keys(root, "", {"params", "grid", "tol", "max_outer", "sweep"});
    if (!root.contains("params") || !root.at("params").is_object())
        throw ValidationError("missing required key 'params'");

    Config cfg;
    try {
        cfg.params = parse_params(root.at("params"));
        if (root.contains("grid")) {
            const json& g = root.at("grid");
            if (!g.is_object()) throw ParseError("'grid' must be an object");
            reject_unknown_keys(g, "grid.", {"n"});
            const double n_raw = require_number(g, "grid.", "n");
            cfg.grid_n = static_cast<int>(n_raw);
            if (cfg.grid_n != n_raw)
                throw ValidationError("grid.n: must be an integer");
        }
        Grid check(cfg.grid_n);  // odd, >= 65
        if (root.contains("tol")) {
            if (!root.at("tol").is_number()) throw ParseError("'tol' must be a number");
            cfg.tol = root.at("tol").get<double>();
            if (!(cfg.tol > 0.0)) throw ValidationError("tol: must be positive");
        }
        if (root.contains("max_outer")) {
            if (!root.at("max_outer").is_number_integer())
                throw ParseError("'max_outer' must be an integer");
            cfg.max_outer = root.at("max_outer").get<int>();
            if (cfg.max_outer < 1) throw ValidationError("max_outer: must be >= 1");
        }
        if (root.contains("sweep"))
            cfg.sweep = parse_sweep(root.at("sweep"), cfg.params);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const Config& cfg) {
    ordered_json root;
    ordered_json params;
    for (const std::string& name : param_names())
        params[name] = get_param_by_name(cfg.params, name);
    root["params"] = params;
    root["grid"] = ordered_json{{"n", cfg.grid_n}};
    root["tol"] = cfg.tol;
    root["max_outer"] = cfg.max_outer;
    if (cfg.sweep) {
        ordered_json sw;
        sw["axis"] = cfg.sweep->axis;
        sw["values"] = cfg.sweep->values;
        sw["outputs"] = cfg.sweep->outputs;
        root["sweep"] = sw;
    }
    return root.dump(2) + "\n";
}

void save_config(const Config& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write config file: " + path);
    out << serialize_config(cfg);
}

}  // namespace vmflow
