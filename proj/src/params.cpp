#include "vmflow/params.hpp"

#include <cmath>
#include <map>

namespace vmflow {

void ModelParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    const std::map<std::string, double> all = {
        {"Re", Re},           {"W", W},
        {"Gr", Gr},           {"Pr", Pr},
        {"A_r", A_r},         {"A_m", A_m},
        {"beta", beta},       {"k_phen", k_phen},
        {"sigma_m", sigma_m}, {"b_m", b_m},
        {"E_A_bar", E_A_bar}, {"theta_bar", theta_bar},
        {"J_plus", J_plus},   {"J_minus", J_minus},
        {"lambda_hat", lambda_hat}, {"A_hat", A_hat},
        {"omega", omega}};
    for (const auto& [name, v] : all)
        if (!finite(v))
            throw ValidationError("params." + name + ": value must be finite");

    if (!(beta > 0.0 && beta < 1.0))
        throw ValidationError("params.beta: must satisfy 0 < beta < 1");
    if (!(Re > 0.0)) throw ValidationError("params.Re: must be positive");
    if (!(W > 0.0)) throw ValidationError("params.W: must be positive");
    if (!(Pr > 0.0)) throw ValidationError("params.Pr: must be positive");
    if (!(b_m > 0.0)) throw ValidationError("params.b_m: must be positive");
    if (!(1.0 + theta_bar > 0.0))
        throw ValidationError("params.theta_bar: must satisfy 1 + theta_bar > 0");
    if (!(sigma_m >= 0.0))
        throw ValidationError("params.sigma_m: must be non-negative");
}

Grid::Grid(int node_count) : n(node_count) {
    if (n < 65) throw ValidationError("grid.n: must be at least 65");
    if (n % 2 == 0) throw ValidationError("grid.n: must be odd");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> ys(n);
    for (int i = 0; i < n; ++i) ys[i] = y(i);
    return ys;
}

namespace {
using Field = double ModelParams::*;
const std::vector<std::pair<std::string, Field>>& field_table() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"Re", &ModelParams::Re},
        {"W", &ModelParams::W},
        {"Gr", &ModelParams::Gr},
        {"Pr", &ModelParams::Pr},
        {"A_r", &ModelParams::A_r},
        {"A_m", &ModelParams::A_m},
        {"beta", &ModelParams::beta},
        {"k_phen", &ModelParams::k_phen},
        {"sigma_m", &ModelParams::sigma_m},
        {"b_m", &ModelParams::b_m},
        {"E_A_bar", &ModelParams::E_A_bar},
        {"theta_bar", &ModelParams::theta_bar},
        {"J_plus", &ModelParams::J_plus},
        {"J_minus", &ModelParams::J_minus},
        {"lambda_hat", &ModelParams::lambda_hat},
        {"A_hat", &ModelParams::A_hat},
        {"omega", &ModelParams::omega},
    };
    return table;
}
}  // namespace

void set_param_by_name(ModelParams& p, const std::string& name, double value) {
    for (const auto& [key, field] : field_table())
        if (key == name) {
            p.*field = value;
            return;
        }
    throw ValidationError("unknown parameter name: " + name);
}

double get_param_by_name(const ModelParams& p, const std::string& name) {
    for (const auto& [key, field] : field_table())
        if (key == name) return p.*field;
    throw ValidationError("unknown parameter name: " + name);
}

const std::vector<std::string>& param_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [key, field] : field_table()) out.push_back(key);
        return out;
    }();
    return names;
}

}  // namespace vmflow
