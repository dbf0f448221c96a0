#include "vmflow/lincoeff.hpp"

#include <cmath>

#include "vmflow/numerics.hpp"

namespace vmflow {

LinearCoefficients build_coefficients(const BaseFlow& flow, const ModelParams& params) {
    const int n = flow.grid.n;
    const double h = flow.grid.h();
    LinearCoefficients c(flow.grid, params);

    const std::vector<double> a11 = as_double(flow.a11_hat);
    const std::vector<double> a12 = as_double(flow.a12_hat);
    const std::vector<double> a22 = as_double(flow.a22_hat);
    c.u_hat = as_double(flow.u_hat);
    c.Z_hat = as_double(flow.Z_hat);
    c.L_hat = as_double(flow.L_hat);

    const double Re = params.Re;
    const double W = params.W;
    const double beta = params.beta;
    const double k3 = params.k_bar() / 3.0;
    const double kappa_sq = params.kappa_sq();

    c.alpha11.resize(n);
    c.alpha12.resize(n);
    c.alpha22.resize(n);
    c.alpha1.resize(n);
    c.alpha2.resize(n);
    c.chi0_star.resize(n);
    c.K_I_hat.resize(n);
    c.K_tilde_I_hat.resize(n);
    for (auto* v : {&c.R33, &c.R34, &c.R35, &c.R43, &c.R44, &c.R45, &c.R53, &c.R54,
                    &c.R55, &c.r11, &c.r12, &c.alpha0})
        v->resize(n);

    for (int i = 0; i < n; ++i) {
        const double Z = c.Z_hat[i];
        if (!(Z > 0.0))
            throw SingularTransform("build_coefficients: Z_hat must be positive");
        c.alpha11[i] = a11[i] / Re;
        c.alpha12[i] = a12[i] / Re;
        c.alpha22[i] = a22[i] / Re;
        c.alpha1[i] = c.alpha11[i] + kappa_sq;
        c.alpha2[i] = c.alpha22[i] + kappa_sq;
        const double I = a11[i] + a22[i];
        const RelaxationTerms rt = relaxation_time_terms(Z, params.E_A_bar);
        c.chi0_star[i] = rt.chi0_star;
        c.K_I_hat[i] = 1.0 / W + k3 * I;
        c.K_tilde_I_hat[i] = c.K_I_hat[i] + beta * I;
    }
    for (int i = 0; i < n; ++i)
        if (!(c.alpha2[i] > 0.0))
            throw SingularTransform("build_coefficients: alpha2 <= 0 at node " +
                                    std::to_string(i));

    c.u_hat_prime = derivative1_o4(c.u_hat, h);
    c.Z_hat_prime = derivative1_o4(c.Z_hat, h);
    c.L_hat_prime = derivative1_o4(c.L_hat, h);
    c.alpha11_prime = derivative1_o4(c.alpha11, h);
    c.alpha12_prime = derivative1_o4(c.alpha12, h);
    c.alpha22_prime = derivative1_o4(c.alpha22, h);

    for (int i = 0; i < n; ++i) {
        const double chi = c.chi0_star[i];
        const double up = c.u_hat_prime[i];
        c.R33[i] = chi * (c.K_I_hat[i] + a11[i] * (k3 + 2.0 * beta));
        c.R34[i] = -2.0 * up + 2.0 * beta * a12[i] * chi;
        c.R35[i] = k3 * a11[i] * chi;
        c.R43[i] = a12[i] * chi * (k3 + beta);
        c.R44[i] = chi * c.K_tilde_I_hat[i];
        c.R45[i] = -up + a12[i] * chi * (k3 + beta);
        c.R53[i] = chi * a22[i] * k3;
        c.R54[i] = 2.0 * beta * a12[i] * chi;
        c.R55[i] = chi * (c.K_I_hat[i] + a22[i] * (k3 + 2.0 * beta));
        // dchi/dZ at Z_hat: chi = Z exp(E(Z-1)/Z) => chi' = J(Z) (1 + E/Z).
        const double J = relaxation_time_terms(c.Z_hat[i], params.E_A_bar).J_of_Z;
        const double dchi = J * (1.0 + params.E_A_bar / c.Z_hat[i]);
        c.r11[i] = dchi * 2.0 * c.alpha12[i] * c.alpha12[i] * c.K_tilde_I_hat[i] /
                   c.alpha2[i];
        c.r12[i] = dchi * c.alpha12[i] * c.K_tilde_I_hat[i];
        c.alpha0[i] = (a12[i] * params.A_r * c.Z_hat[i] / params.Pr +
                       params.A_m * params.sigma_m * c.L_hat[i] *
                           (1.0 + params.lambda_hat) / params.Pr) /
                      c.alpha2[i];
    }

    // Definitional identities recomputed through a second expression path.
    for (int i = 0; i < n; ++i) {
        if (c.R44[i] != c.chi0_star[i] * c.K_tilde_I_hat[i])
            throw Error("build_coefficients: R44 identity check failed");
        if (c.R43[i] != a12[i] * c.chi0_star[i] * (k3 + beta))
            throw Error("build_coefficients: R43 identity check failed");
        if (c.alpha1[i] != c.alpha11[i] + kappa_sq ||
            c.alpha2[i] != c.alpha22[i] + kappa_sq)
            throw Error("build_coefficients: alpha_i identity check failed");
    }

    c.phi.resize(n);
    c.s_profile.resize(n);
    for (int i = 0; i < n; ++i) {
        c.phi[i] = std::sqrt(c.Z_hat[i] / c.alpha2[i]);
        c.s_profile[i] = 1.0 / std::sqrt(c.Z_hat[i] * c.alpha2[i]);
    }
    c.phi_prime = derivative1_o4(c.phi, h);

    const auto [d11, d22] = d_diagonals(c, 0.0);
    c.d11_real_part.resize(n);
    c.d22_real_part.resize(n);
    for (int i = 0; i < n; ++i) {
        c.d11_real_part[i] = d11[i].real();
        c.d22_real_part[i] = d22[i].real();
    }
    return c;
}

std::pair<std::vector<std::complex<double>>, std::vector<std::complex<double>>>
d_diagonals(const LinearCoefficients& c, double omega) {
    const int n = c.grid.n;
    const ModelParams& p = c.params;
    std::vector<std::complex<double>> d11(n), d22(n);
    const std::complex<double> iw(0.0, omega);
    const double magn =
        p.sigma_m * (1.0 + p.lambda_hat) * (1.0 + p.lambda_hat) / (2.0 * p.b_m);
    for (int i = 0; i < n; ++i) {
        const double s = c.s_profile[i];
        const double phi = c.phi[i];
        const std::complex<double> common =
            iw * c.alpha12[i] * phi + 0.5 * c.Z_hat_prime[i] / phi +
            0.5 * c.alpha2[i] * c.phi_prime[i];
        // The advective Doppler shift rides the characteristic exponent
        // (lambda + i omega u) * s, so it changes sign with the direction.
        const std::complex<double> split = c.R43[i] * c.alpha12[i] / c.alpha2[i] +
                                           0.5 * c.R44[i] + iw * c.u_hat[i];
        const double thermal = 0.5 * c.alpha12[i] * p.Pr * c.alpha0[i] / phi;
        d11[i] = -s * (common + split) - thermal - magn * s;
        d22[i] = -s * (common - split) - thermal - magn * s;
    }
    return {std::move(d11), std::move(d22)};
}

}  // namespace vmflow
