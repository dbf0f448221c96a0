#include "vmflow/baseflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "vmflow/numerics.hpp"

namespace vmflow {

namespace {

template <class T>
T J_of_impl(T Z, T E_A_bar) {
    return std::exp(E_A_bar * (Z - T(1)) / Z);
}

template <class T>
struct ClosureT {
    T a11, a22;
};

// Newton iteration on the 2x2 closure system; driven to machine precision so
// per-node stopping noise cannot pollute FD residuals of the converged flow.
template <class T>
ClosureT<T> closure_impl(T g, T W, T k_bar, T beta, ClosureT<T> seed) {
    const T Winv = T(1) / W;
    const T k3 = k_bar / T(3);
    T a11 = seed.a11, a22 = seed.a22;
    const T eps = std::numeric_limits<T>::epsilon();
    T res = std::numeric_limits<T>::infinity();
    for (int iter = 0; iter < 50; ++iter) {
        const T A2 = Winv + a22;
        if (!(A2 > T(0)))
            throw BranchLoss("closure_solve: A_2 = 1/W + a22 crossed zero");
        const T K = Winv + k3 * (a11 + a22);
        const T F1 = K * a22 + beta * (g + a22 * a22);
        const T F2 = K * a11 + beta * (g + a11 * a11) - T(2) * g * K / A2;
        res = std::max(std::abs(F1), std::abs(F2));
        const T J11 = k3 * a22;
        const T J12 = K + k3 * a22 + T(2) * beta * a22;
        const T J21 = K + k3 * a11 + T(2) * beta * a11 - T(2) * g * k3 / A2;
        const T J22 = k3 * a11 - T(2) * g * k3 / A2 + T(2) * g * K / (A2 * A2);
        const T det = J11 * J22 - J12 * J21;
        if (std::abs(det) < eps * (std::abs(J11 * J22) + std::abs(J12 * J21) + eps))
            throw BranchLoss("closure_solve: singular Newton system (fold point)");
        const T d11 = (F1 * J22 - F2 * J12) / det;
        const T d22 = (J11 * F2 - J21 * F1) / det;
        a11 -= d11;
        a22 -= d22;
        if (std::max(std::abs(d11), std::abs(d22)) <
            T(16) * eps * (T(1) + std::abs(a11) + std::abs(a22)))
            break;
    }
    {
        const T A2 = Winv + a22;
        if (!(A2 > T(0)))
            throw BranchLoss("closure_solve: A_2 = 1/W + a22 crossed zero");
        const T K = Winv + k3 * (a11 + a22);
        const T F1 = K * a22 + beta * (g + a22 * a22);
        const T F2 = K * a11 + beta * (g + a11 * a11) - T(2) * g * K / A2;
        res = std::max(std::abs(F1), std::abs(F2));
    }
    if (!(res < T(1e-12)))
        throw BranchLoss("closure_solve: no convergence to the physical branch in 50 iterations");
    return {a11, a22};
}

// State produced by one converged inner (Picard) solve at a fixed C_bar.
struct InnerState {
    std::vector<Real> u, a11, a12, a22, Z, L, s_u;
    Real wall_velocity = 0;
    Real inner_change = 0;
    Real stress_identity = 0;
    Real closure_residual = 0;
    int iterations = 0;
};

struct ModelT {
    Real Re, W, Gr, Pr, A_r, A_m, beta, k_bar, sigma_m, b_m, E_A_bar,
        theta_bar, J_plus, J_minus, lambda_hat, D_hat;
};

ModelT to_model(const ModelParams& p) {
    ModelT m;
    m.Re = p.Re;
    m.W = p.W;
    m.Gr = p.Gr;
    m.Pr = p.Pr;
    m.A_r = p.A_r;
    m.A_m = p.A_m;
    m.beta = p.beta;
    m.k_bar = static_cast<Real>(p.k_phen) - static_cast<Real>(p.beta);
    m.sigma_m = p.sigma_m;
    m.b_m = p.b_m;
    m.E_A_bar = p.E_A_bar;
    m.theta_bar = p.theta_bar;
    m.J_plus = p.J_plus;
    m.J_minus = p.J_minus;
    m.lambda_hat = p.lambda_hat;
    m.D_hat = static_cast<Real>(p.Re) * static_cast<Real>(p.A_hat);
    return m;
}

Real shear_constant(const ModelT& m, Real L_val, Real y, Real C_bar) {
    return -(Real(1) + m.lambda_hat) * m.Re * m.sigma_m * (L_val + m.J_plus) +
           m.D_hat * (Real(0.5) - y) + C_bar;
}

InnerState inner_solve(const ModelT& m, const Grid& grid, Real C_bar, Real tol,
                       int max_inner) {
    const int n = grid.n;
    const Real h = Real(1) / Real(n - 1);
    auto yat = [&](int i) { return Real(-0.5) + Real(i) * h; };

    InnerState st;
    st.Z.resize(n);
    st.L.resize(n);
    for (int i = 0; i < n; ++i) {
        st.Z[i] = Real(1) + m.theta_bar * (Real(0.5) - yat(i));
        st.L[i] = -m.J_minus * (Real(0.5) - yat(i)) - m.J_plus * (yat(i) + Real(0.5));
    }
    st.a11.assign(n, Real(0));
    st.a12.assign(n, Real(0));
    st.a22.assign(n, Real(0));
    st.s_u.assign(n, Real(0));

    std::vector<Real> fZ(n), fL(n), Z_new, L_new;
    Real gamma = Real(0.5);
    int monotone_run = 0;
    Real prev_delta = std::numeric_limits<Real>::infinity();
    bool converged = false;

    for (int it = 0; it < max_inner; ++it) {
        st.iterations = it + 1;
        // (a) shear stress identity fixes a12 pointwise.
        for (int i = 0; i < n; ++i) {
            if (!(st.Z[i] > Real(0)))
                throw NoConvergence(
                    "solve_base_flow: temperature factor became non-positive during iteration",
                    {{"inner_sup_change", static_cast<double>(prev_delta)}});
            st.a12[i] = shear_constant(m, st.L[i], yat(i), C_bar) / st.Z[i];
        }
        // (b) closure per node, continuation seeding from the lower wall.
        ClosureT<Real> seed{Real(0), Real(0)};
        for (int i = 0; i < n; ++i) {
            seed = closure_impl<Real>(st.a12[i] * st.a12[i], m.W, m.k_bar, m.beta, seed);
            st.a11[i] = seed.a11;
            st.a22[i] = seed.a22;
        }
        // (c) velocity from its gradient.
        for (int i = 0; i < n; ++i) {
            const Real chi = st.Z[i] * J_of_impl(st.Z[i], m.E_A_bar);
            const Real Ktil =
                Real(1) / m.W + (m.k_bar / Real(3) + m.beta) * (st.a11[i] + st.a22[i]);
            const Real A2 = Real(1) / m.W + st.a22[i];
            st.s_u[i] = chi * Ktil * st.a12[i] / A2;
        }
        st.u = cumulative_integral(st.s_u, h);
        // (d)+(e) temperature and magnetic profiles from their Poisson forms.
        for (int i = 0; i < n; ++i) {
            fZ[i] = -(m.A_r * st.Z[i] * st.a12[i] +
                      m.A_m * m.sigma_m * (Real(1) + m.lambda_hat) * st.L[i]) *
                    st.s_u[i];
            fL[i] = -(Real(1) + m.lambda_hat) * st.s_u[i] / m.b_m;
        }
        Z_new = solve_dirichlet_poisson(fZ, h, Real(1) + m.theta_bar, Real(1));
        L_new = solve_dirichlet_poisson(fL, h, -m.J_minus, -m.J_plus);
        Real delta = Real(0);
        for (int i = 0; i < n; ++i) {
            const Real dz = gamma * (Z_new[i] - st.Z[i]);
            const Real dl = gamma * (L_new[i] - st.L[i]);
            st.Z[i] += dz;
            st.L[i] += dl;
            delta = std::max(delta, std::max(std::abs(dz), std::abs(dl)));
        }
        if (delta < prev_delta)
            ++monotone_run;
        else
            monotone_run = 0;
        if (monotone_run >= 5) gamma = Real(1);
        prev_delta = delta;
        st.inner_change = delta;
        if (delta < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence("solve_base_flow: inner iteration budget exhausted",
                            {{"inner_sup_change", static_cast<double>(st.inner_change)}});

    // Final consistency pass on the converged (Z, L): re-derive the algebraic
    // profiles and velocity so the shear identity holds exactly on return.
    st.stress_identity = Real(0);
    st.closure_residual = Real(0);
    ClosureT<Real> seed{Real(0), Real(0)};
    for (int i = 0; i < n; ++i) {
        const Real R = shear_constant(m, st.L[i], yat(i), C_bar);
        st.a12[i] = R / st.Z[i];
        st.stress_identity =
            std::max(st.stress_identity, std::abs(st.Z[i] * st.a12[i] - R));
        seed = closure_impl<Real>(st.a12[i] * st.a12[i], m.W, m.k_bar, m.beta, seed);
        st.a11[i] = seed.a11;
        st.a22[i] = seed.a22;
        const Real K = Real(1) / m.W + m.k_bar / Real(3) * (st.a11[i] + st.a22[i]);
        const Real A2 = Real(1) / m.W + st.a22[i];
        const Real g = st.a12[i] * st.a12[i];
        const Real F1 = K * st.a22[i] + m.beta * (g + st.a22[i] * st.a22[i]);
        const Real F2 =
            K * st.a11[i] + m.beta * (g + st.a11[i] * st.a11[i]) - Real(2) * g * K / A2;
        st.closure_residual =
            std::max(st.closure_residual, std::max(std::abs(F1), std::abs(F2)));
        const Real chi = st.Z[i] * J_of_impl(st.Z[i], m.E_A_bar);
        const Real Ktil =
            Real(1) / m.W + (m.k_bar / Real(3) + m.beta) * (st.a11[i] + st.a22[i]);
        st.s_u[i] = chi * Ktil * st.a12[i] / A2;
    }
    st.u = cumulative_integral(st.s_u, h);
    st.wall_velocity = st.u[n - 1];
    return st;
}

}  // namespace

RelaxationTerms relaxation_time_terms(double Z, double E_A_bar) {
    if (!(Z > 0.0))
        throw DomainError("relaxation_time_terms: Z must be positive");
    const double J = J_of_impl<double>(Z, E_A_bar);
    const double chi = Z * J;
    return {J, 1.0 / chi, chi};
}

ClosurePair closure_solve(double g, const ModelParams& params, ClosurePair seed) {
    const auto r = closure_impl<double>(g, params.W, params.k_bar(), params.beta,
                                        {seed.a11, seed.a22});
    return {r.a11, r.a22};
}

std::vector<double> as_double(const std::vector<Real>& v) {
    return std::vector<double>(v.begin(), v.end());
}

BaseFlow solve_base_flow(const ModelParams& params, const Grid& grid, double tol,
                         int max_outer) {
    params.validate();
    const ModelT m = to_model(params);
    const int n = grid.n;
    const Real h = Real(1) / Real(n - 1);
    const Real tol_T = tol;
    const int max_inner = 500;

    // The closure algebra has a real branch only while the local shear stays
    // below its fold, so the admissible C_bar window can be narrow.  A failed
    // inner solve during the search therefore means "this C_bar is outside the
    // window", not "no base flow exists"; the search shrinks its step instead
    // of aborting.
    std::string last_failure = "no inner solve attempted";
    auto try_psi = [&](Real C_bar) -> std::optional<InnerState> {
        try {
            return inner_solve(m, grid, C_bar, tol_T, max_inner);
        } catch (const BranchLoss& e) {
            last_failure = e.what();
            return std::nullopt;
        } catch (const NoConvergence& e) {
            last_failure = e.what();
            return std::nullopt;
        }
    };

    InnerState best;
    Real C_best = 0;
    bool have_best = false;
    bool converged = false;
    auto consider = [&](Real c, const InnerState& s) {
        if (!have_best || std::abs(s.wall_velocity) < std::abs(best.wall_velocity)) {
            best = s;
            C_best = c;
            have_best = true;
        }
        if (std::abs(s.wall_velocity) < tol_T) converged = true;
    };

    // The zeroth Picard iterate has linear temperature and magnetic profiles,
    // which makes the shear profile affine in y; the constant that zeroes the
    // wall velocity of that iterate is an informed seed for the root search.
    const Real drive = m.D_hat - (Real(1) + m.lambda_hat) * m.Re * m.sigma_m *
                                     (m.J_plus - m.J_minus);
    const Real c_informed = drive == Real(0) ? Real(0) : -drive / Real(2);
    const Real scale = std::max(
        Real(1), std::max(std::abs(m.D_hat),
                          m.sigma_m * m.Re * (Real(1) + m.lambda_hat) *
                              (std::abs(m.J_plus) + std::abs(m.J_minus))));

    const Real seed_candidates[] = {c_informed,
                                    Real(0),
                                    c_informed / Real(2),
                                    Real(2) * c_informed,
                                    -c_informed,
                                    scale / Real(4),
                                    -scale / Real(4)};
    Real c_seed = 0;
    std::optional<InnerState> s_seed;
    Real tried_prev = std::numeric_limits<Real>::quiet_NaN();
    for (Real cand : seed_candidates) {
        if (!std::isnan(static_cast<double>(tried_prev)) &&
            std::abs(cand - tried_prev) <= Real(1e-12) * (Real(1) + std::abs(cand)))
            continue;
        tried_prev = cand;
        s_seed = try_psi(cand);
        if (s_seed) {
            c_seed = cand;
            break;
        }
    }
    if (!s_seed)
        throw BracketFailure(
            "solve_base_flow: no admissible shear constant found; last inner failure: " +
            last_failure);
    consider(c_seed, *s_seed);

    // Expand a sign-change bracket around the seed, preferring the downhill
    // direction.  Steps whose endpoint loses the branch are halved in place.
    Real a = c_seed, b = c_seed, fa = 0, fb = 0;
    bool have_bracket = false;
    if (!converged) {
        const Real f_seed = s_seed->wall_velocity;
        const int prefer = f_seed > Real(0) ? -1 : +1;
        for (int pass = 0; pass < 2 && !have_bracket && !converged; ++pass) {
            const Real dir = pass == 0 ? Real(prefer) : Real(-prefer);
            Real base = c_seed, fbase = f_seed;
            Real step = std::max(Real(0.5), scale / Real(8));
            for (int k = 0; k < 48 && !converged; ++k) {
                const Real cand = base + dir * step;
                auto sc = try_psi(cand);
                if (!sc) {
                    step /= Real(2);
                    if (step < Real(1e-10) * (Real(1) + std::abs(base))) break;
                    continue;
                }
                consider(cand, *sc);
                if ((sc->wall_velocity > Real(0)) != (fbase > Real(0))) {
                    a = base;
                    fa = fbase;
                    b = cand;
                    fb = sc->wall_velocity;
                    have_bracket = true;
                    break;
                }
                base = cand;
                fbase = sc->wall_velocity;
                step *= Real(1.7);
            }
        }
        if (!have_bracket && !converged)
            throw BracketFailure(
                "solve_base_flow: no sign change of the wall velocity inside the "
                "admissible shear-constant window");
    }

    // Safeguarded secant (Illinois variant) between the bracket endpoints.
    int side = 0;
    for (int it = 0; it < max_outer && !converged; ++it) {
        Real c;
        if (fb != fa) {
            c = b - fb * (b - a) / (fb - fa);
            if (!(c > std::min(a, b) && c < std::max(a, b))) c = (a + b) / Real(2);
        } else {
            c = (a + b) / Real(2);
        }
        std::optional<InnerState> sc;
        for (int shrink = 0; shrink < 48 && !sc; ++shrink) {
            sc = try_psi(c);
            if (!sc) c = (c + (std::abs(fa) < std::abs(fb) ? a : b)) / Real(2);
        }
        if (!sc)
            throw NoConvergence(
                "solve_base_flow: secant iterate left the admissible shear-constant "
                "window; last inner failure: " + last_failure,
                {{"wall_velocity", static_cast<double>(std::abs(best.wall_velocity))}});
        const Real fc = sc->wall_velocity;
        consider(c, *sc);
        if (converged) break;
        if ((fc > Real(0)) == (fb > Real(0))) {
            b = c;
            fb = fc;
            if (side == -1) fa /= Real(2);
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == +1) fb /= Real(2);
            side = +1;
        }
    }
    if (!converged)
        throw NoConvergence(
            "solve_base_flow: outer iteration budget exhausted",
            {{"wall_velocity", static_cast<double>(std::abs(best.wall_velocity))},
             {"inner_sup_change", static_cast<double>(best.inner_change)}});

    BaseFlow flow(grid);
    flow.u_hat = std::move(best.u);
    flow.a11_hat = std::move(best.a11);
    flow.a12_hat = std::move(best.a12);
    flow.a22_hat = std::move(best.a22);
    flow.Z_hat = std::move(best.Z);
    flow.L_hat = std::move(best.L);
    flow.M_hat = params.lambda_hat;
    flow.C_bar = C_best;

    // Pressure by quadrature of the transverse momentum balance, anchored at
    // the midplane node.
    std::vector<Real> gz(n);
    for (int i = 0; i < n; ++i) gz[i] = m.Gr * (flow.Z_hat[i] - Real(1));
    const std::vector<Real> Igz = cumulative_integral(gz, h);
    flow.P_hat.resize(n);
    for (int i = 0; i < n; ++i)
        flow.P_hat[i] = flow.Z_hat[i] * flow.a22_hat[i] / m.Re + Igz[i] -
                        m.sigma_m * flow.L_hat[i] * flow.L_hat[i] / Real(2);
    const Real P_mid = flow.P_hat[(n - 1) / 2];
    for (int i = 0; i < n; ++i) flow.P_hat[i] -= P_mid;

    flow.residuals = {
        {"wall_velocity", static_cast<double>(std::abs(best.wall_velocity))},
        {"inner_sup_change", static_cast<double>(best.inner_change)},
        {"stress_identity", static_cast<double>(best.stress_identity)},
        {"closure_residual", static_cast<double>(best.closure_residual)},
        {"inner_iterations", static_cast<double>(best.iterations)},
    };
    return flow;
}

std::map<std::string, double> base_flow_residuals(const BaseFlow& flow,
                                                  const ModelParams& params) {
    const ModelT m = to_model(params);
    const int n = flow.grid.n;
    const Real h = Real(1) / Real(n - 1);

    const std::vector<Real>& u = flow.u_hat;
    const std::vector<Real>& a11 = flow.a11_hat;
    const std::vector<Real>& a12 = flow.a12_hat;
    const std::vector<Real>& a22 = flow.a22_hat;
    const std::vector<Real>& Z = flow.Z_hat;
    const std::vector<Real>& L = flow.L_hat;
    const std::vector<Real>& P = flow.P_hat;

    std::vector<Real> Za12(n), Za22_Re(n);
    for (int i = 0; i < n; ++i) {
        Za12[i] = Z[i] * a12[i];
        Za22_Re[i] = Z[i] * a22[i] / m.Re;
    }
    const std::vector<Real> du = derivative1_o4(u, h);
    const std::vector<Real> dL = derivative1_o4(L, h);
    const std::vector<Real> dP = derivative1_o4(P, h);
    const std::vector<Real> dZa12 = derivative1_o4(Za12, h);
    const std::vector<Real> dZa22 = derivative1_o4(Za22_Re, h);
    const std::vector<Real> d2Z = derivative2_o4(Z, h);
    const std::vector<Real> d2L = derivative2_o4(L, h);

    Real r_shear = 0, r_normal = 0, r_ugrad = 0, r_heat = 0, r_induction = 0;
    Real r_c11 = 0, r_c22 = 0;
    const Real A_hat = m.D_hat / m.Re;
    for (int i = 2; i + 2 < n; ++i) {
        r_shear = std::max(
            r_shear, std::abs(dZa12[i] / m.Re + A_hat +
                              m.sigma_m * (Real(1) + m.lambda_hat) * dL[i]));
        r_normal = std::max(
            r_normal, std::abs(dP[i] - dZa22[i] - m.Gr * (Z[i] - Real(1)) +
                               m.sigma_m * L[i] * dL[i]));
        const Real chi = Z[i] * J_of_impl(Z[i], m.E_A_bar);
        const Real Ktil =
            Real(1) / m.W + (m.k_bar / Real(3) + m.beta) * (a11[i] + a22[i]);
        const Real A2 = Real(1) / m.W + a22[i];
        r_ugrad = std::max(r_ugrad, std::abs(du[i] - chi * Ktil * a12[i] / A2));
        r_heat = std::max(
            r_heat,
            std::abs(d2Z[i] + (m.A_r * Z[i] * a12[i] +
                               m.A_m * m.sigma_m * (Real(1) + m.lambda_hat) * L[i]) *
                                  du[i]));
        r_induction = std::max(
            r_induction,
            std::abs(m.b_m * d2L[i] + (Real(1) + m.lambda_hat) * du[i]));
    }
    for (int i = 0; i < n; ++i) {
        const Real g = a12[i] * a12[i];
        const Real K = Real(1) / m.W + m.k_bar / Real(3) * (a11[i] + a22[i]);
        const Real A2 = Real(1) / m.W + a22[i];
        r_c22 = std::max(r_c22, std::abs(K * a22[i] + m.beta * (g + a22[i] * a22[i])));
        r_c11 = std::max(r_c11, std::abs(K * a11[i] + m.beta * (g + a11[i] * a11[i]) -
                                         Real(2) * g * K / A2));
    }
    return {
        {"shear_stress_balance", static_cast<double>(r_shear)},
        {"normal_stress_balance", static_cast<double>(r_normal)},
        {"velocity_gradient", static_cast<double>(r_ugrad)},
        {"closure_a11", static_cast<double>(r_c11)},
        {"closure_a22", static_cast<double>(r_c22)},
        {"heat_balance", static_cast<double>(r_heat)},
        {"induction_balance", static_cast<double>(r_induction)},
    };
}

}  // namespace vmflow
