#include "manakov/soliton.hpp"

#include <cmath>
#include <stdexcept>

namespace manakov {

void SolitonParams::validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("SolitonParams: eta must be > 0");
    for (double v : {theta, phi1, phi2, eta, k, tau0, alpha0})
        if (!std::isfinite(v)) throw std::invalid_argument("SolitonParams: parameters must be finite");
}

Field soliton_field(double t, const Grid1D& grid, const SolitonParams& p) {
    p.validate();
    const double tau = p.tau0 - p.k * t;
    const double alpha = p.alpha0 + 0.5 * (p.eta * p.eta + p.k * p.k) * t;
    const cplx pol1 = std::cos(0.5 * p.theta) * std::exp(cplx{0.0, p.phi1});
    const cplx pol2 = std::sin(0.5 * p.theta) * std::exp(cplx{0.0, p.phi2});

    Field f(grid);
    for (int j = 1; j <= grid.interior_points; ++j) {
        const double x = grid.node(j);
        const double envelope = p.eta / std::cosh(p.eta * (x - tau));
        const cplx phase = std::exp(cplx{0.0, -p.k * (x - tau) + alpha});
        const cplx common = envelope * phase;
        f[j] = Vec2c{pol1 * common, pol2 * common};
    }
    return f;
}

Field exact_soliton_field(double t, const Grid1D& grid, const SolitonParams& p) {
    p.validate();
    const double width = p.eta / std::sqrt(2.0);
    const double tau = p.tau0 - 2.0 * p.k * t;
    const double alpha = p.alpha0 + (0.5 * p.eta * p.eta + p.k * p.k) * t;
    const cplx pol1 = std::cos(0.5 * p.theta) * std::exp(cplx{0.0, p.phi1});
    const cplx pol2 = std::sin(0.5 * p.theta) * std::exp(cplx{0.0, p.phi2});

    Field f(grid);
    for (int j = 1; j <= grid.interior_points; ++j) {
        const double x = grid.node(j);
        const double envelope = p.eta / std::cosh(width * (x - tau));
        const cplx phase = std::exp(cplx{0.0, -p.k * (x - tau) + alpha});
        const cplx common = envelope * phase;
        f[j] = Vec2c{pol1 * common, pol2 * common};
    }
    return f;
}

double peak_position(const Field& f) {
    int best = 0;
    double best_mag = -1.0;
    for (int j = 0; j < f.n_nodes(); ++j) {
        const double m = f[j].norm2();
        if (m > best_mag) {
            best_mag = m;
            best = j;
        }
    }
    return f.grid.node(best);
}

}  // namespace manakov
