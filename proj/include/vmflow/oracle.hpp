#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vmflow/asymptotics.hpp"
#include "vmflow/baseflow.hpp"
#include "vmflow/lincoeff.hpp"
#include "vmflow/params.hpp"

namespace vmflow {

using Cplx = std::complex<double>;

// Complex banded matrix in LAPACK gb column-major storage with kl extra
// superdiagonal rows reserved for LU fill-in, so a factorization can work on
// a plain copy of the array.
class BandedMatrix {
  public:
    BandedMatrix(int dim, int kl, int ku);

    int dim() const { return dim_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }
    int ldab() const { return ldab_; }
    const std::vector<Cplx>& storage() const { return ab_; }

    // Entry access; at() throws AssemblyError outside the declared band,
    // get() returns zero there.
    Cplx& at(int i, int j);
    Cplx get(int i, int j) const;

    // this += scale * other (same dim and band required).
    void axpy(Cplx scale, const BandedMatrix& other);

    std::vector<Cplx> matvec(const std::vector<Cplx>& x) const;

  private:
    int dim_, kl_, ku_, ldab_;
    std::vector<Cplx> ab_;
};

// LU factorization of a banded matrix (partial pivoting). Throws
// FactorizationSingular when an exact zero pivot appears.
class BandedLU {
  public:
    explicit BandedLU(const BandedMatrix& a);
    void solve_in_place(std::vector<Cplx>& b) const;

  private:
    int dim_, kl_, ku_, ldab_;
    std::vector<Cplx> ab_;
    std::vector<int> ipiv_;
};

// Generalized eigenvalue pencil lambda*M q = N q over the stacked unknown
//   q(node i) = (u, v, a11, a12, a22, Om, Z, L, M)  at q-index 9*i + field,
// where the tensor components carry the 1/Re scaling of the coefficient
// profiles. Evolution rows are stored as M(r,r) = 1, N row = -S where S is
// the spatial operator of "lambda q + S q = 0"; the pressure-Poisson rows and
// all boundary rows have a zero M row and N row = +S.
struct Pencil {
    int n_nodes;    // grid nodes (equals dim for hand-built algebraic pencils)
    int fields;     // unknowns per node: 9 for the flow pencil, 1 otherwise
    double h;       // grid spacing, 0 for hand-built pencils
    double omega;   // streamwise frequency of the ansatz
    int bandwidth;  // kl = ku of both matrices
    BandedMatrix M_mat, N_mat;
    std::vector<int> bc_rows;  // boundary/constraint rows (zero rows of M)

    Pencil(int dim, int band)
        : n_nodes(dim),
          fields(1),
          h(0.0),
          omega(0.0),
          bandwidth(band),
          M_mat(dim, band, band),
          N_mat(dim, band, band) {}

    int dim() const { return M_mat.dim(); }
};

struct EigenPair {
    Cplx lambda;
    std::vector<Cplx> q;
    // Scaled backward error ||N q - lambda M q|| / (||N q|| + |lambda| ||M q||)
    // at ||q|| = 1; unlike the raw residual its attainable floor does not grow
    // with the operator norm (~1/h^2), so one tolerance works on every grid.
    double residual;
    double divergence_diag;  // max|i*omega*u + v'| / max|u| (0 for non-flow pencils)
};

// Discretizes the linearized problem on n nodes with 2nd-order centered
// differences (one-sided stencils in the wall rows of the tensor block and
// the pressure-gradient boundary rows). The coefficient and base-flow grids
// must match n exactly.
Pencil assemble_pencil(const LinearCoefficients& coeffs, const BaseFlow& flow,
                       const ModelParams& params, double omega, int n);

// Inverse iteration on (N - sigma*M)^{-1} M toward the eigenvalue nearest
// sigma. The start vector is a fixed linear-congruential sequence, so runs
// are reproducible. After every 40 non-converged iterations the shift is
// re-centered at the current eigenvalue estimate (at most 3 times).
EigenPair shift_invert_eigen(const Pencil& pencil, Cplx sigma, double tol,
                             int max_iter = 200);

// max|i*omega*u + v'| / max|u| of a flow-pencil eigenvector; v' by 4th-order
// differences so the diagnostic's own truncation error stays well below the
// acceptance threshold for oscillatory modes.
double divergence_diagnostic(const Pencil& pencil, const std::vector<Cplx>& q);

struct HuntMatch {
    int k_seed;              // branch index the hunt was launched from
    Cplx lambda_seed;        // that branch's predicted eigenvalue
    bool via_conjugate;      // true when the shift was conj(lambda_seed)
    Cplx lambda_found;
    double residual;
    double divergence_diag;
    double seed_distance;    // distance to the nearest seed or seed conjugate
};

struct HuntFailure {
    int k_seed;
    Cplx sigma;
    std::string error;
};

struct HuntReport {
    std::vector<HuntMatch> matches;  // deduplicated, in seed order
    std::vector<HuntFailure> failures;
};

// Runs shift_invert_eigen at sigma = lambda_k and sigma = conj(lambda_k) for
// every seed (both shifts, since the analytic branch fixes the spectrum only
// up to conjugation), filters by residual and divergence diagnostic,
// deduplicates at distance < tol*|lambda| keeping the first hit in seed
// order. Hunts run on `jobs` threads; the merge order is fixed, so the
// report is independent of jobs.
HuntReport hunt_spectrum(const Pencil& pencil, const EigenFamily& seeds, double tol,
                         int jobs = 1);

}  // namespace vmflow
