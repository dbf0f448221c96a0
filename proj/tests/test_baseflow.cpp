#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vmflow/baseflow.hpp"
#include "vmflow/numerics.hpp"

using vmflow::BaseFlow;
using vmflow::ClosurePair;
using vmflow::Grid;
using vmflow::ModelParams;
using vmflow::Real;

namespace {

ModelParams main_case() {
    ModelParams p;
    p.Re = 1.0;
    p.W = 1.0;
    p.Gr = 1.0;
    p.Pr = 1.0;
    p.A_r = 1.0;
    p.A_m = 1.0;
    p.beta = 0.5;
    p.k_phen = 0.6;
    p.sigma_m = 1.0;
    p.b_m = 1.0;
    p.E_A_bar = 1.0;
    p.theta_bar = 1.0;
    p.J_plus = 2.0;
    p.J_minus = 1.0;
    p.lambda_hat = 1.0;
    p.A_hat = 1.0;
    p.omega = 1.0;
    return p;
}

ModelParams rest_state() {
    ModelParams p;
    p.Re = 1.0;
    p.W = 1.0;
    p.beta = 0.5;
    p.k_phen = 0.6;
    p.sigma_m = 1.0;
    p.b_m = 1.0;
    p.E_A_bar = 1.0;
    p.lambda_hat = 1.0;
    p.A_hat = 0.0;    // no pressure drive
    p.theta_bar = 0.0;
    p.J_plus = 1.0;   // equal wall currents -> uniform L, no Lorentz shear
    p.J_minus = 1.0;
    return p;
}

double sup_err(const std::vector<Real>& v, double target) {
    double m = 0.0;
    for (Real x : v) m = std::max(m, std::abs(static_cast<double>(x) - target));
    return m;
}

}  // namespace

TEST_CASE("relaxation-time terms at Z=2, E_A_bar=1", "[baseflow]") {
    const auto t = vmflow::relaxation_time_terms(2.0, 1.0);
    // J = exp(1 * (2-1)/2) = exp(0.5)
    REQUIRE(t.J_of_Z == Catch::Approx(1.6487212707001282).epsilon(1e-15));
    REQUIRE(t.chi0_star == Catch::Approx(3.2974425414002564).epsilon(1e-15));
    REQUIRE(t.tau0_bar == Catch::Approx(0.30326532985631671).epsilon(1e-15));
    REQUIRE(t.tau0_bar * t.chi0_star == Catch::Approx(1.0).epsilon(1e-15));
    // Z = 1 is the reference temperature: J = 1 regardless of activation energy.
    REQUIRE(vmflow::relaxation_time_terms(1.0, 7.5).J_of_Z == 1.0);
}

TEST_CASE("closure matches the closed form at k_bar = 0", "[baseflow]") {
    // With k_bar = 0 the two equations decouple into quadratics:
    //   a22 = (-1 + sqrt(1 - 4 beta^2 g W^2)) / (2 beta W)
    //   a11 from K*a11 + beta*(g + a11^2) = 2gK/A_2 with K = 1/W fixed.
    // At W=1, beta=0.5, g=0.36: a22 = -0.2, a11 = -1 + sqrt(2.44).
    ModelParams p;
    p.W = 1.0;
    p.beta = 0.5;
    p.k_phen = 0.5;  // k_bar = k_phen - beta = 0
    const ClosurePair c = vmflow::closure_solve(0.36, p, {0.0, 0.0});
    REQUIRE(c.a22 == Catch::Approx(-0.2).margin(1e-12));
    REQUIRE(c.a11 == Catch::Approx(-1.0 + std::sqrt(2.44)).margin(1e-12));
}

TEST_CASE("closure satisfies its defining equations at general k_bar", "[baseflow]") {
    ModelParams p = main_case();  // k_bar = 0.1
    const double g = 0.2;
    const ClosurePair c = vmflow::closure_solve(g, p, {0.0, 0.0});
    const double K = 1.0 / p.W + (p.k_bar() / 3.0) * (c.a11 + c.a22);
    const double A2 = 1.0 / p.W + c.a22;
    const double F1 = K * c.a22 + p.beta * (g + c.a22 * c.a22);
    const double F2 = K * c.a11 + p.beta * (g + c.a11 * c.a11) - 2.0 * g * K / A2;
    REQUIRE(std::abs(F1) < 1e-13);
    REQUIRE(std::abs(F2) < 1e-13);
    // Normal-stress difference identity: a11 - a22 = 2gK / (A2 * (K + beta*(a11+a22)))
    const double Kt = K + p.beta * (c.a11 + c.a22);
    REQUIRE(c.a11 - c.a22 == Catch::Approx(2.0 * g * K / (A2 * Kt)).margin(1e-12));
    // Physical branch passes through the unstrained state.
    const ClosurePair zero = vmflow::closure_solve(0.0, p, {0.0, 0.0});
    REQUIRE(std::abs(zero.a11) < 1e-14);
    REQUIRE(std::abs(zero.a22) < 1e-14);
}

TEST_CASE("closure reports branch folds as BranchLoss", "[baseflow]") {
    // a22-quadratic discriminant 1 - 4 beta^2 g W^2 < 0: no real root.
    ModelParams p;
    p.W = 10.0;
    p.beta = 0.5;
    p.k_phen = 0.5;
    REQUIRE_THROWS_AS(vmflow::closure_solve(0.012, p, {0.0, 0.0}), vmflow::BranchLoss);
    ModelParams q;
    q.W = 1.0;
    q.beta = 0.99;
    q.k_phen = 0.99;
    REQUIRE_THROWS_AS(vmflow::closure_solve(0.3, q, {0.0, 0.0}), vmflow::BranchLoss);
}

TEST_CASE("undriven isothermal channel stays exactly at rest", "[baseflow]") {
    const Grid grid(129);
    const BaseFlow flow = vmflow::solve_base_flow(rest_state(), grid, 1e-12);
    REQUIRE(sup_err(flow.u_hat, 0.0) < 1e-10);
    REQUIRE(sup_err(flow.a11_hat, 0.0) < 1e-10);
    REQUIRE(sup_err(flow.a12_hat, 0.0) < 1e-10);
    REQUIRE(sup_err(flow.a22_hat, 0.0) < 1e-10);
    REQUIRE(sup_err(flow.Z_hat, 1.0) < 1e-10);
    REQUIRE(sup_err(flow.L_hat, -1.0) < 1e-10);  // L = -J_plus = -J_minus
    REQUIRE(std::abs(static_cast<double>(flow.C_bar)) < 1e-12);
    REQUIRE(flow.M_hat == rest_state().lambda_hat);
    REQUIRE(!std::signbit(static_cast<double>(flow.C_bar)));  // no "-0" artifacts
}

TEST_CASE("heated but undriven channel: conductive temperature, no flow", "[baseflow]") {
    ModelParams p = rest_state();
    p.theta_bar = 0.5;  // wall temperature drop, still no mechanical drive
    const Grid grid(129);
    const BaseFlow flow = vmflow::solve_base_flow(p, grid, 1e-12);
    REQUIRE(sup_err(flow.u_hat, 0.0) < 1e-10);
    REQUIRE(sup_err(flow.a12_hat, 0.0) < 1e-10);
    // Z is the pure conduction profile: linear from 1.5 at y=-1/2 to 1 at 1/2.
    double err = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double exact = 1.25 - 0.5 * grid.y(i);
        err = std::max(err, std::abs(static_cast<double>(flow.Z_hat[i]) - exact));
    }
    REQUIRE(err < 1e-10);
}

TEST_CASE("symmetric driving gives a symmetric channel state", "[baseflow]") {
    ModelParams p = main_case();
    p.theta_bar = 0.0;  // equal wall temperatures
    p.J_plus = 1.0;     // equal wall currents
    p.J_minus = 1.0;
    // Magnetic heating A_m*sigma_m*(1+lambda)*L*u' is asymmetric even for
    // equal wall currents (L sits near -J_plus, not near zero), so it must be
    // off for a reflection-symmetric state; the magnetic force itself (via
    // sigma_m) is odd and may stay on.
    p.A_m = 0.0;
    const Grid grid(257);
    const BaseFlow flow = vmflow::solve_base_flow(p, grid, 1e-12);
    // u, Z, a11, a22 even; a12 odd; L is -J_plus plus an odd response.
    double e_even = 0.0, e_odd = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const int j = grid.n - 1 - i;
        e_even = std::max(e_even, std::abs(static_cast<double>(flow.u_hat[i] - flow.u_hat[j])));
        e_even = std::max(e_even, std::abs(static_cast<double>(flow.Z_hat[i] - flow.Z_hat[j])));
        e_even = std::max(e_even, std::abs(static_cast<double>(flow.a11_hat[i] - flow.a11_hat[j])));
        e_odd = std::max(e_odd, std::abs(static_cast<double>(flow.a12_hat[i] + flow.a12_hat[j])));
        e_odd = std::max(e_odd, std::abs(static_cast<double>(flow.L_hat[i] + flow.L_hat[j]) + 2.0));
    }
    REQUIRE(e_even < 1e-8);
    REQUIRE(e_odd < 1e-8);
    // An odd shear profile pins the shear constant at -D_hat/2.
    REQUIRE(static_cast<double>(flow.C_bar) == Catch::Approx(-0.5).margin(1e-9));
    // Walls are no-slip.
    REQUIRE(std::abs(static_cast<double>(flow.u_hat[0])) < 1e-12);
    REQUIRE(std::abs(static_cast<double>(flow.u_hat[grid.n - 1])) < 1e-12);
}

TEST_CASE("main case: converged constants and boundary data", "[baseflow]") {
    const ModelParams p = main_case();
    const Grid grid(1025);
    const BaseFlow flow = vmflow::solve_base_flow(p, grid, 1e-12);
    // Shear constant equals the wall value of Z*a12 at the upper wall.
    REQUIRE(static_cast<double>(flow.C_bar) ==
            Catch::Approx(0.53269246341475718).epsilon(1e-9));
    // Boundary conditions hold exactly as imposed.
    REQUIRE(static_cast<double>(flow.Z_hat[0]) == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(static_cast<double>(flow.Z_hat[grid.n - 1]) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(static_cast<double>(flow.L_hat[0]) == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(static_cast<double>(flow.L_hat[grid.n - 1]) == Catch::Approx(-2.0).margin(1e-12));
    // Pressure is anchored at the midplane node.
    REQUIRE(static_cast<double>(flow.P_hat[(grid.n - 1) / 2]) == 0.0);
    // Temperature factor stays positive (relaxation terms well-defined).
    for (Real z : flow.Z_hat) REQUIRE(z > 0.0L);
}

TEST_CASE("residual verifier flags a corrupted profile", "[baseflow]") {
    const ModelParams p = main_case();
    const Grid grid(257);
    BaseFlow flow = vmflow::solve_base_flow(p, grid, 1e-12);
    const auto clean = vmflow::base_flow_residuals(flow, p);
    for (const auto& [key, val] : clean) {
        INFO(key);
        REQUIRE(val < 1e-3);  // coarse grid, truncation-level residuals
    }
    flow.u_hat[grid.n / 2] += 1e-3L;  // poke the velocity mid-channel
    const auto dirty = vmflow::base_flow_residuals(flow, p);
    REQUIRE(dirty.at("velocity_gradient") > 10.0 * clean.at("velocity_gradient"));
}

TEST_CASE("residuals shrink under grid refinement", "[baseflow]") {
    const ModelParams p = main_case();
    const BaseFlow coarse = vmflow::solve_base_flow(p, Grid(257), 1e-13);
    const BaseFlow fine = vmflow::solve_base_flow(p, Grid(513), 1e-13);
    const auto rc = vmflow::base_flow_residuals(coarse, p);
    const auto rf = vmflow::base_flow_residuals(fine, p);
    for (const auto& [key, val] : rc) {
        INFO(key);
        if (val < 1e-12) continue;  // already at the rounding floor
        REQUIRE(rf.at(key) < val);
    }
    // The shear constant converges too.
    REQUIRE(std::abs(static_cast<double>(coarse.C_bar - fine.C_bar)) < 1e-6);
}

TEST_CASE("as_double narrows extended-precision profiles", "[baseflow]") {
    const std::vector<Real> v = {1.0L, -2.5L, 0.25L};
    const auto d = vmflow::as_double(v);
    REQUIRE(d.size() == 3);
    REQUIRE(d[1] == -2.5);
}
