#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "vmflow/baseflow.hpp"
#include "vmflow/params.hpp"

namespace vmflow {

// Every per-node coefficient of the linearized problem, built once from a
// converged base flow. Derivative profiles use 4th-order differences
// (one-sided at the walls); chi0_star' is the analytic dchi/dZ at Z_hat.
struct LinearCoefficients {
    Grid grid;
    ModelParams params;

    // Reynolds-scaled anisotropy and the diagonal transport factors.
    std::vector<double> alpha11, alpha12, alpha22;  // a_ij / Re
    std::vector<double> alpha1, alpha2;             // alpha_ii + kappa^2
    std::vector<double> chi0_star;                  // Z * J(Z)
    std::vector<double> K_I_hat;                    // 1/W + (k_bar/3) I
    std::vector<double> K_tilde_I_hat;              // K_I + beta I

    // Relaxation coupling matrix of the tensor block.
    std::vector<double> R33, R34, R35, R43, R44, R45, R53, R54, R55;
    // Temperature couplings into the tensor block.
    std::vector<double> r11, r12;
    // Thermal forcing factor of the diagonalized system.
    std::vector<double> alpha0;

    // Base profiles and their derivatives.
    std::vector<double> u_hat, u_hat_prime;
    std::vector<double> Z_hat, Z_hat_prime;
    std::vector<double> L_hat, L_hat_prime;
    std::vector<double> alpha11_prime, alpha12_prime, alpha22_prime;

    // Characteristic-speed profile sqrt(Z*alpha2) enters through
    // phi = sqrt(Z/alpha2) and s = 1/sqrt(Z*alpha2).
    std::vector<double> phi, phi_prime, s_profile;

    // Frequency-independent real parts of the two transport diagonals.
    std::vector<double> d11_real_part, d22_real_part;

    LinearCoefficients(Grid g, ModelParams p) : grid(g), params(std::move(p)) {}
};

// Builds all profiles; throws SingularTransform if min(alpha2) <= 0.
LinearCoefficients build_coefficients(const BaseFlow& flow, const ModelParams& params);

// Complex transport diagonals d11(y), d22(y) at the given frequency;
// d22 - d11 = (2/sqrt(Z*alpha2)) * (R43*alpha12/alpha2 + R44/2 + i*omega*u)
// pointwise: the real gap is frequency-free, the imaginary gap is the
// advective Doppler shift that rides the characteristic direction.
std::pair<std::vector<std::complex<double>>, std::vector<std::complex<double>>>
d_diagonals(const LinearCoefficients& coeffs, double omega);

}  // namespace vmflow
