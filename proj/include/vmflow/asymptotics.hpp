#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vmflow/lincoeff.hpp"

namespace vmflow {

// One branch family of the leading-order spectrum:
//   lambda_k = (B_drift + k*pi*i) / A_phase.
// Re(lambda_k) is one shared double across all k, and omega enters only the
// imaginary part of B_drift, so the real parts are bitwise independent of
// both k and omega.
struct EigenFamily {
    double omega = 0.0;
    std::vector<int> k_list;
    std::vector<std::complex<double>> lambdas;
    double A_phase = 0.0;                    // integral of 1/sqrt(Z*alpha2)
    std::complex<double> B_drift{0.0, 0.0};  // integral of s*(i*w*u + R43*a12/a2 + R44/2)
};

// Two equivalent forms of the stability functional. Form B decides the
// classification; form A is an independent cross-check, reported
// A-normalized so the two are directly comparable.
struct StabilityReport {
    double margin_form_A = 0.0;  // A^-1 * integral of s*(R43*alpha12/alpha2 + R44/2)
    double margin_form_B = 0.0;  // integral of chi*s*(a11*(k_bar/3+beta) + 1/(2W))
    std::string classification;  // "necessary-condition-met" (form B < 0) or "violated"
    double discrepancy = 0.0;    // |margin_form_A - margin_form_B / A_phase|
    double A_phase = 0.0;
};

// Phase-scale prefactor A = integral of 1/sqrt(Z_hat*alpha2) over the channel.
double phase_integral(const LinearCoefficients& coeffs);

// Branch family lambda_k for k in [k_lo, k_hi].
EigenFamily asymptotic_eigenvalues(const LinearCoefficients& coeffs, double omega,
                                   int k_lo, int k_hi);

StabilityReport stability_margin(const LinearCoefficients& coeffs);

// Leading-order dispersion function
//   F(lambda) = exp(lambda*A + int d11) - exp(-lambda*A + int d22),
// returned normalized by the dominant exponential so large |Re(lambda)|*A
// stays representable. Roots sit at lambda = (int (d22-d11)/2 + k*pi*i)/A.
std::complex<double> dispersion_residual(const LinearCoefficients& coeffs, double omega,
                                         std::complex<double> lambda);

}  // namespace vmflow
