#include "vmflow/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "vmflow/numerics.hpp"

namespace vmflow {

namespace {

// Real part of the drift integrand: s * (R43*alpha12/alpha2 + R44/2).
std::vector<double> drift_integrand(const LinearCoefficients& c) {
    std::vector<double> f(c.grid.n);
    for (int i = 0; i < c.grid.n; ++i)
        f[i] = c.s_profile[i] * (c.R43[i] * c.alpha12[i] / c.alpha2[i] + 0.5 * c.R44[i]);
    return f;
}

}  // namespace

double phase_integral(const LinearCoefficients& coeffs) {
    return simpson(coeffs.s_profile, coeffs.grid.h());
}

EigenFamily asymptotic_eigenvalues(const LinearCoefficients& coeffs, double omega,
                                   int k_lo, int k_hi) {
    if (k_hi < k_lo)
        throw DomainError("asymptotic_eigenvalues: empty branch range");
    const int n = coeffs.grid.n;
    const double h = coeffs.grid.h();
    const double A = phase_integral(coeffs);
    const double reB = simpson(drift_integrand(coeffs), h);
    std::vector<double> su(n);
    for (int i = 0; i < n; ++i) su[i] = coeffs.s_profile[i] * coeffs.u_hat[i];
    const double imB = omega * simpson(su, h);

    EigenFamily family;
    family.omega = omega;
    family.A_phase = A;
    family.B_drift = {reB, imB};
    family.k_list.reserve(k_hi - k_lo + 1);
    family.lambdas.reserve(k_hi - k_lo + 1);
    // One shared real part, and one fused rounding per imaginary part: with
    // Im lambda_k = fma(k, pi/A, imB/A) each value is within half an ulp of
    // the exact affine ladder, so adjacent spacings reproduce pi/A to within
    // an ulp of the eigenvalue magnitude at any k.
    const double re_shared = reB / A;
    const double im_step = std::numbers::pi / A;
    const double im_base = imB / A;
    for (int k = k_lo; k <= k_hi; ++k) {
        family.k_list.push_back(k);
        family.lambdas.emplace_back(
            re_shared, std::fma(static_cast<double>(k), im_step, im_base));
    }
    return family;
}

StabilityReport stability_margin(const LinearCoefficients& coeffs) {
    const int n = coeffs.grid.n;
    const double h = coeffs.grid.h();
    const ModelParams& p = coeffs.params;
    const double A = phase_integral(coeffs);
    const double form_a = simpson(drift_integrand(coeffs), h) / A;

    const double k3b = p.k_bar() / 3.0 + p.beta;
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        const double a11 = coeffs.alpha11[i] * p.Re;  // undo the Reynolds scaling
        f[i] = coeffs.chi0_star[i] * coeffs.s_profile[i] * (a11 * k3b + 0.5 / p.W);
    }
    const double form_b = simpson(f, h);

    StabilityReport report;
    report.margin_form_A = form_a;
    report.margin_form_B = form_b;
    report.A_phase = A;
    report.classification = form_b < 0.0 ? "necessary-condition-met" : "violated";
    report.discrepancy = std::abs(form_a - form_b / A);
    return report;
}

std::complex<double> dispersion_residual(const LinearCoefficients& coeffs, double omega,
                                         std::complex<double> lambda) {
    const auto [d11, d22] = d_diagonals(coeffs, omega);
    const std::complex<double> hc(coeffs.grid.h(), 0.0);
    const std::complex<double> I1 = simpson(d11, hc);
    const std::complex<double> I2 = simpson(d22, hc);
    const double A = phase_integral(coeffs);
    const std::complex<double> e1 = lambda * A + I1;
    const std::complex<double> e2 = -lambda * A + I2;
    const double m = std::max(e1.real(), e2.real());
    return std::exp(e1 - m) - std::exp(e2 - m);
}

}  // namespace vmflow
