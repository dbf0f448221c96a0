#pragma once

#include <string>
#include <vector>

#include "vmflow/errors.hpp"

namespace vmflow {

// Physical and model constants of the heated viscoelastic MHD channel problem.
// All quantities are the dimensionless groups of the model equations.
struct ModelParams {
    double Re = 1.0;          // Reynolds number
    double W = 1.0;           // Weissenberg number (relaxation time scale)
    double Gr = 0.0;          // Grashof number (buoyancy coupling)
    double Pr = 1.0;          // Prandtl number
    double A_r = 0.0;         // dissipative heating coefficient, stress part
    double A_m = 0.0;         // dissipative heating coefficient, magnetic part
    double beta = 0.5;        // anisotropy retardation weight, 0 < beta < 1
    double k_phen = 0.0;      // phenomenological closure constant
    double sigma_m = 0.0;     // magnetic interaction number, >= 0
    double b_m = 1.0;         // magnetic diffusivity ratio, > 0
    double E_A_bar = 0.0;     // dimensionless activation energy
    double theta_bar = 0.0;   // wall temperature drop, 1 + theta_bar > 0
    double J_plus = 0.0;      // current-sheet datum at the upper wall
    double J_minus = 0.0;     // current-sheet datum at the lower wall
    double lambda_hat = 0.0;  // mean transverse magnetic field
    double A_hat = 0.0;       // streamwise pressure-drop parameter
    double omega = 1.0;       // streamwise wavenumber of the perturbation ansatz

    // Derived groups; recomputed on demand so they can never go stale.
    double k_bar() const { return k_phen - beta; }
    double kappa_sq() const { return 1.0 / (W * Re); }
    double D_hat() const { return Re * A_hat; }

    // Throws ValidationError naming the offending field.
    void validate() const;
};

// Uniform grid on [-1/2, 1/2]; node count must be odd (Simpson panels, exact
// midpoint node) and at least 65.
struct Grid {
    int n;

    explicit Grid(int node_count);

    double h() const { return 1.0 / (n - 1); }
    double y(int i) const { return -0.5 + i * h(); }
    std::vector<double> nodes() const;
};

// Assign a ModelParams field by its config-file name; throws ValidationError
// for unknown names. Used by the sweep axis machinery.
void set_param_by_name(ModelParams& p, const std::string& name, double value);
double get_param_by_name(const ModelParams& p, const std::string& name);
const std::vector<std::string>& param_names();

}  // namespace vmflow
