#pragma once

#include <map>
#include <string>
#include <vector>

#include "vmflow/params.hpp"

namespace vmflow {

// Scalar type of the stationary solver and its residual verifier. Extended
// precision keeps the storage-rounding floor of 4th-order FD residuals
// (~eps/h^2) far below the quadrature truncation on refinement studies.
using Real = long double;

// Temperature dependence of the relaxation time:
//   J(Z)      = exp(E_A_bar * (Z - 1) / Z)
//   tau0_bar  = 1 / (Z * J(Z))      (dimensionless relaxation time)
//   chi0_star = Z * J(Z)            (its inverse)
struct RelaxationTerms {
    double J_of_Z;
    double tau0_bar;
    double chi0_star;
};
RelaxationTerms relaxation_time_terms(double Z, double E_A_bar);

// Pointwise anisotropy closure: given g = a12^2, solve
//   K*a22 + beta*(g + a22^2)              = 0
//   K*a11 + beta*(g + a11^2) - 2*g*K/A_2  = 0
// with K = 1/W + (k_bar/3)*(a11 + a22), A_2 = 1/W + a22, on the physical
// branch through (0,0) at g = 0.
struct ClosurePair {
    double a11;
    double a22;
};
ClosurePair closure_solve(double g, const ModelParams& params, ClosurePair seed);

// Converged stationary channel state. Profiles are stored in extended
// precision; as_double() converts for downstream consumers.
struct BaseFlow {
    Grid grid;
    std::vector<Real> u_hat;    // streamwise velocity
    std::vector<Real> a11_hat;  // anisotropy tensor, xx
    std::vector<Real> a12_hat;  // anisotropy tensor, xy
    std::vector<Real> a22_hat;  // anisotropy tensor, yy
    std::vector<Real> Z_hat;    // temperature factor, > 0
    std::vector<Real> L_hat;    // in-plane magnetic profile
    std::vector<Real> P_hat;    // hydrostatic pressure, anchored P(0) = 0
    double M_hat = 0.0;         // transverse magnetic component (= lambda_hat)
    Real C_bar = 0.0;           // shear-stress integration constant
    std::map<std::string, double> residuals;  // solver exit diagnostics

    explicit BaseFlow(Grid g) : grid(g) {}
};

std::vector<double> as_double(const std::vector<Real>& v);

// Two-point boundary value solve: outer scalar iteration on C_bar driving the
// upper-wall velocity to zero, inner Picard iteration on (Z_hat, L_hat) with
// under-relaxation. See solver source for the exact sweep order.
BaseFlow solve_base_flow(const ModelParams& params, const Grid& grid,
                         double tol = 1e-12, int max_outer = 64);

// Independent verification of the stationary system by direct substitution of
// the stored profiles with 4th-order centered differences (sup-norms over the
// pure-centered interior). Keys: shear_stress_balance, normal_stress_balance,
// velocity_gradient, closure_a11, closure_a22, heat_balance, induction_balance.
std::map<std::string, double> base_flow_residuals(const BaseFlow& flow,
                                                  const ModelParams& params);

}  // namespace vmflow
