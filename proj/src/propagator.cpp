#include "manakov/propagator.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "manakov/csv.hpp"

#include "manakov/errors.hpp"

namespace manakov {

StepOperator assemble_step_operator(double dt, double gamma,
                                    const std::array<double, 3>& chi, const Grid1D& grid) {
    if (!(dt > 0.0)) throw std::invalid_argument("assemble_step_operator: dt must be > 0");
    if (gamma < 0.0) throw std::invalid_argument("assemble_step_operator: gamma must be >= 0");
    StepOperator op;
    op.dt = dt;
    op.gamma = gamma;
    op.chi = chi;
    op.grid = grid;

    const double dx = grid.dx();
    const double r = dt / (dx * dx);
    const cplx i{0.0, 1.0};
    const Mat2c s = pauli_combination(chi);
    const double noise = 0.5 * std::sqrt(gamma * r);

    op.h_lower = (-i * r) * Mat2c::identity() - noise * s;
    op.h_diag = (i * 2.0 * r) * Mat2c::identity();
    op.h_upper = (-i * r) * Mat2c::identity() + noise * s;
    return op;
}

namespace {

/// y_j = x_j + c * (H x)_j over interior rows, boundaries zero.
Field affine_apply(const StepOperator& op, const Field& x, double id_coeff, double h_coeff) {
    if (!(x.grid == op.grid)) throw std::invalid_argument("operator/field grid mismatch");
    Field y(op.grid);
    const Mat2c lo = h_coeff * op.h_lower;
    const Mat2c di = id_coeff * Mat2c::identity() + h_coeff * op.h_diag;
    const Mat2c up = h_coeff * op.h_upper;
    const int m = op.grid.interior_points;
    for (int j = 1; j <= m; ++j)
        y[j] = lo * x[j - 1] + di * x[j] + up * x[j + 1];
    return y;
}

}  // namespace

Field apply_h(const StepOperator& op, const Field& x) { return affine_apply(op, x, 0.0, 1.0); }

Field apply_id_minus_half_h(const StepOperator& op, const Field& x) {
    return affine_apply(op, x, 1.0, -0.5);
}

Field apply_id_plus_half_h(const StepOperator& op, const Field& x) {
    return affine_apply(op, x, 1.0, +0.5);
}

void solve_block_tridiag(const Mat2c& lower, std::span<const Mat2c> diag, const Mat2c& upper,
                         std::span<const Vec2c> rhs, std::span<Vec2c> out) {
    const std::size_t m = diag.size();
    if (rhs.size() != m || out.size() != m)
        throw std::invalid_argument("solve_block_tridiag: size mismatch");
    // Forward elimination without pivoting across block rows; each pivot is
    // a 2x2 block whose determinant stays bounded away from zero for the
    // midpoint factors handled here.
    std::vector<Mat2c> c(m);
    std::vector<Vec2c> y(m);
    Mat2c pivot = diag[0];
    for (std::size_t j = 0;; ++j) {
        if (std::abs(pivot.det()) < 1e-250)
            throw StepError(RunStatus::SolverFailure, "block pivot underflow at row " +
                                                          std::to_string(j));
        const Mat2c inv = pivot.inverse();
        y[j] = inv * (j == 0 ? rhs[j] : rhs[j] - lower * y[j - 1]);
        if (j + 1 == m) break;
        c[j] = inv * upper;
        pivot = diag[j + 1] - lower * c[j];
    }
    out[m - 1] = y[m - 1];
    for (std::size_t j = m - 1; j-- > 0;) out[j] = y[j] - c[j] * out[j + 1];
}

namespace {

Field solve_midpoint_factor(const StepOperator& op, const Field& rhs, double h_sign) {
    if (!(rhs.grid == op.grid)) throw std::invalid_argument("operator/field grid mismatch");
    const int m = op.grid.interior_points;
    const Mat2c lo = (0.5 * h_sign) * op.h_lower;
    const Mat2c up = (0.5 * h_sign) * op.h_upper;
    const std::vector<Mat2c> di(m, Mat2c::identity() + (0.5 * h_sign) * op.h_diag);
    Field out(op.grid);
    solve_block_tridiag(lo, di, up, std::span<const Vec2c>(rhs.values.data() + 1, m),
                        std::span<Vec2c>(out.values.data() + 1, m));
    return out;
}

}  // namespace

Field solve_T(const StepOperator& op, const Field& rhs) {
    return solve_midpoint_factor(op, rhs, +1.0);
}

Field solve_id_minus_half_h(const StepOperator& op, const Field& rhs) {
    return solve_midpoint_factor(op, rhs, -1.0);
}

Field one_step_linear(const StepOperator& op, const Field& x) {
    return solve_T(op, apply_id_minus_half_h(op, x));
}

Mat2c symbol_matrix(double xi, double dt, double gamma, const std::array<double, 3>& chi) {
    const cplx i{0.0, 1.0};
    const double noise = std::sqrt(gamma * dt) * xi;
    return (i * dt * xi * xi) * Mat2c::identity() + i * noise * pauli_combination(chi);
}

cplx symbol_determinant(double xi, double dt, double gamma, const std::array<double, 3>& chi) {
    const double xi2 = xi * xi;
    const double chi2 = chi[0] * chi[0] + chi[1] * chi[1] + chi[2] * chi[2];
    return {1.0 + 0.25 * gamma * dt * chi2 * xi2 - 0.25 * dt * dt * xi2 * xi2, -dt * xi2};
}

void write_symbol_spectrum_csv(const std::string& path, double dt, double gamma,
                               const std::array<double, 3>& chi, double xi_max, int n_points) {
    if (n_points < 2) throw std::invalid_argument("write_symbol_spectrum_csv: need >= 2 points");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_symbol_spectrum_csv: cannot open " + path);
    out << "xi,abs_det\n";
    for (int i = 0; i < n_points; ++i) {
        const double xi = -xi_max + 2.0 * xi_max * i / (n_points - 1);
        out << csv::num(xi) << ',' << csv::num(std::abs(symbol_determinant(xi, dt, gamma, chi)))
            << '\n';
    }
}

double symbol_det_lower_bound(double xi, double dt, double gamma,
                              const std::array<double, 3>& chi) {
    const double x2 = dt * xi * xi;
    const double y = chi[0] * chi[0] + chi[1] * chi[1] + chi[2] * chi[2];
    const double mu = std::max(0.25 * gamma * y, 1.0);
    const double x4 = x2 * x2;
    if (x2 <= 4.0 * mu) return 0.25 * (1.0 + x4);
    if (x2 <= 16.0 * mu) return x4;
    return x4 * x4 / 32.0 + x4;
}

}  // namespace manakov
