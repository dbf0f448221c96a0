#pragma once

#include <cstddef>
#include <vector>

#include "vmflow/errors.hpp"

// Quadrature and finite-difference kernels on uniform grids.
// All routines are templated on the scalar so the base-flow solver can run in
// extended precision while downstream consumers stay in double.

namespace vmflow {

// Composite Simpson rule; requires an odd number of nodes (even panel count).
template <class T>
T simpson(const std::vector<T>& f, T h) {
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0)
        throw DomainError("simpson: node count must be odd and >= 3");
    T odd{}, even{};
    for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
    for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
    return h / T(3) * (f[0] + T(4) * odd + T(2) * even + f[n - 1]);
}

// Running integral I_i = int_{x_0}^{x_i} f dx by cubic-panel Newton-Cotes:
// interior panels use h/24*(-1,13,13,-1), the first and last use the one-sided
// h/24*(9,19,-5,1) closure. Fourth order with a smooth error term (no
// odd/even-panel parity artifacts).
template <class T>
std::vector<T> cumulative_integral(const std::vector<T>& f, T h) {
    const std::size_t n = f.size();
    if (n < 4) throw DomainError("cumulative_integral: need at least 4 nodes");
    std::vector<T> I(n);
    const T c = h / T(24);
    I[0] = T(0);
    I[1] = I[0] + c * (T(9) * f[0] + T(19) * f[1] - T(5) * f[2] + f[3]);
    for (std::size_t j = 1; j + 2 < n; ++j)
        I[j + 1] = I[j] + c * (-f[j - 1] + T(13) * f[j] + T(13) * f[j + 1] - f[j + 2]);
    I[n - 1] = I[n - 2] + c * (T(9) * f[n - 1] + T(19) * f[n - 2] - T(5) * f[n - 3] + f[n - 4]);
    return I;
}

// First derivative, 4th order: centered 5-point interior, one-sided at the
// first and last two nodes.
template <class T>
std::vector<T> derivative1_o4(const std::vector<T>& f, T h) {
    const std::size_t n = f.size();
    if (n < 5) throw DomainError("derivative1_o4: need at least 5 nodes");
    std::vector<T> d(n);
    const T c = T(1) / (T(12) * h);
    d[0] = c * (T(-25) * f[0] + T(48) * f[1] - T(36) * f[2] + T(16) * f[3] - T(3) * f[4]);
    d[1] = c * (T(-3) * f[0] - T(10) * f[1] + T(18) * f[2] - T(6) * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (f[i - 2] - T(8) * f[i - 1] + T(8) * f[i + 1] - f[i + 2]);
    d[n - 2] = -c * (T(-3) * f[n - 1] - T(10) * f[n - 2] + T(18) * f[n - 3] - T(6) * f[n - 4] + f[n - 5]);
    d[n - 1] = -c * (T(-25) * f[n - 1] + T(48) * f[n - 2] - T(36) * f[n - 3] + T(16) * f[n - 4] - T(3) * f[n - 5]);
    return d;
}

// Second derivative, 4th-order centered interior (i in [2, n-3]); the four
// edge nodes fall back to the 2nd-order 4/5-point one-sided stencils and are
// excluded from convergence-sensitive sup-norms by callers.
template <class T>
std::vector<T> derivative2_o4(const std::vector<T>& f, T h) {
    const std::size_t n = f.size();
    if (n < 6) throw DomainError("derivative2_o4: need at least 6 nodes");
    std::vector<T> d(n);
    const T c = T(1) / (T(12) * h * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (-f[i - 2] + T(16) * f[i - 1] - T(30) * f[i] + T(16) * f[i + 1] - f[i + 2]);
    const T ch2 = T(1) / (h * h);
    d[0] = ch2 * (T(2) * f[0] - T(5) * f[1] + T(4) * f[2] - f[3]);
    d[1] = ch2 * (f[0] - T(2) * f[1] + f[2]);
    d[n - 2] = ch2 * (f[n - 3] - T(2) * f[n - 2] + f[n - 1]);
    d[n - 1] = ch2 * (T(2) * f[n - 1] - T(5) * f[n - 2] + T(4) * f[n - 3] - f[n - 4]);
    return d;
}

// Two-point boundary value problem u'' = f on the grid span with Dirichlet
// data, solved through the exact Green's-function form
//   u(y) = lin(y) + [(y-b) J1(y) + (y-a) J2(y)] / (b-a),
//   J1(y) = int_a^y (s-a) f(s) ds,  J2(y) = int_y^b (s-b) f(s) ds,
// so both boundary values hold exactly by construction.
template <class T>
std::vector<T> solve_dirichlet_poisson(const std::vector<T>& f, T h, T ua, T ub) {
    const std::size_t n = f.size();
    if (n < 4) throw DomainError("solve_dirichlet_poisson: need at least 4 nodes");
    const T L = T(n - 1) * h;
    std::vector<T> w1(n), w2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const T sa = T(i) * h;            // s - a
        const T sb = sa - L;              // s - b
        w1[i] = sa * f[i];
        w2[i] = sb * f[i];
    }
    const std::vector<T> J1 = cumulative_integral(w1, h);
    const std::vector<T> cum2 = cumulative_integral(w2, h);
    const T total2 = cum2[n - 1];
    std::vector<T> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const T ya = T(i) * h;            // y - a
        const T yb = ya - L;              // y - b
        const T lin = ua + (ub - ua) * ya / L;
        u[i] = lin + (yb * J1[i] + ya * (total2 - cum2[i])) / L;
    }
    u[0] = ua;
    u[n - 1] = ub;
    return u;
}

template <class T>
T sup_norm(const std::vector<T>& v) {
    T m{};
    for (const T& x : v) {
        T a = x < T(0) ? -x : x;
        if (a > m) m = a;
    }
    return m;
}

}  // namespace vmflow
