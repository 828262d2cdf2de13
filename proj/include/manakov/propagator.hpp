#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "manakov/field.hpp"
#include "manakov/grid.hpp"
#include "manakov/pauli.hpp"

namespace manakov {

/// One step's random linear operator in finite-difference form.
///
/// H acts on a field v with Dirichlet zeros at j = 0 and M+1 as
///
///   (H v)_j = -i r (v_{j-1} - 2 v_j + v_{j+1})
///             + (sqrt(gamma r)/2) S (v_{j+1} - v_{j-1}),
///
/// where r = dt/dx^2 and S = sum_k chi_k sigma_k. The interior rows share
/// the three blocks lower/diag/upper stored here; the midpoint factors
/// T = Id + H/2 and Id - H/2 are derived from them on demand.
struct StepOperator {
    double dt = 0.0;
    double gamma = 0.0;
    std::array<double, 3> chi{0.0, 0.0, 0.0};
    Grid1D grid;

    Mat2c h_lower, h_diag, h_upper;

    Mat2c t_lower() const { return 0.5 * h_lower; }
    Mat2c t_diag() const { return Mat2c::identity() + 0.5 * h_diag; }
    Mat2c t_upper() const { return 0.5 * h_upper; }
};

StepOperator assemble_step_operator(double dt, double gamma,
                                    const std::array<double, 3>& chi, const Grid1D& grid);

/// H x (boundary rows are zero).
Field apply_h(const StepOperator& op, const Field& x);

/// (Id - H/2) x, the explicit midpoint factor.
Field apply_id_minus_half_h(const StepOperator& op, const Field& x);

/// (Id + H/2) x, the forward application of the implicit factor.
Field apply_id_plus_half_h(const StepOperator& op, const Field& x);

/// Solve (Id + H/2) v = rhs by block Thomas elimination on the interior
/// unknowns. Throws StepError(SolverFailure) on block-pivot underflow,
/// which unconditional invertibility of the midpoint factor rules out for
/// any dt and any noise draw.
Field solve_T(const StepOperator& op, const Field& rhs);

/// Solve (Id - H/2) v = rhs; used by adjoint/unitarity diagnostics.
Field solve_id_minus_half_h(const StepOperator& op, const Field& rhs);

/// U x = (Id + H/2)^{-1} (Id - H/2) x, the mass-preserving one-step map.
Field one_step_linear(const StepOperator& op, const Field& x);

/// General block-tridiagonal solve with constant off-diagonal blocks and
/// per-row diagonal blocks (the relaxation scheme shifts the diagonal
/// nodewise). rhs and out have one entry per interior row.
void solve_block_tridiag(const Mat2c& lower, std::span<const Mat2c> diag, const Mat2c& upper,
                         std::span<const Vec2c> rhs, std::span<Vec2c> out);

/// Fourier multiplier of H at wavenumber xi:
/// diagonal i dt xi^2 +- i sqrt(gamma dt) chi_3 xi,
/// off-diagonal i sqrt(gamma dt) (chi_1 -+ i chi_2) xi.
Mat2c symbol_matrix(double xi, double dt, double gamma, const std::array<double, 3>& chi);

/// Determinant of the midpoint-factor symbol:
/// 1 + (gamma dt/4) sum_k chi_k^2 xi^2 - (dt^2/4) xi^4 - i dt xi^2.
cplx symbol_determinant(double xi, double dt, double gamma, const std::array<double, 3>& chi);

/// Spectrum dump for plots: n_points rows of (xi, |det|) sampled uniformly
/// over [-xi_max, xi_max].
void write_symbol_spectrum_csv(const std::string& path, double dt, double gamma,
                               const std::array<double, 3>& chi, double xi_max, int n_points);

/// Piecewise lower bound on |symbol_determinant|^2, in the variables
/// x = sqrt(dt) |xi| and y = sum_k chi_k^2:
///   (1 + x^4)/4        for x^2 <=  4 max(gamma y/4, 1)
///   x^4                for x^2 <= 16 max(gamma y/4, 1)
///   x^8/32 + x^4       otherwise.
/// Strictly positive for every (xi, dt, chi), so the midpoint factor never
/// needs a noise truncation to stay invertible.
double symbol_det_lower_bound(double xi, double dt, double gamma,
                              const std::array<double, 3>& chi);

}  // namespace manakov
