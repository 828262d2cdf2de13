#pragma once

#include "manakov/field.hpp"
#include "manakov/grid.hpp"

namespace manakov {

/// Parameters of the deterministic Manakov soliton
///
///   X(t,x) = (cos(Theta/2) e^{i phi1}, sin(Theta/2) e^{i phi2})
///            * eta sech(eta (x - tau(t))) e^{-i k (x - tau(t)) + i alpha(t)},
///
/// with tau(t) = tau0 - k t and alpha(t) = alpha0 + (eta^2 + k^2) t / 2.
struct SolitonParams {
    double theta = 0.0;   // polarization angle
    double phi1 = 0.0;
    double phi2 = 0.0;
    double eta = 1.0;     // amplitude; group velocity is -k
    double k = 0.0;
    double tau0 = 0.0;
    double alpha0 = 0.0;

    void validate() const;
};

/// Sample the closed form at time t on the grid nodes, boundary nodes zeroed.
///
/// This is the standard fiber-optics normalization of the soliton, written
/// for the half-coefficient dispersion convention i u_t + u_xx/2 + |u|^2 u = 0.
/// It fixes the peak magnitudes (eta |cos Theta/2|, eta |sin Theta/2|) and the
/// 2 eta mass used for initial data throughout.
Field soliton_field(double t, const Grid1D& grid, const SolitonParams& p);

/// Exact traveling soliton of the unit-dispersion equation integrated here,
/// i X_t + X_xx + |X|^2 X = 0: same peak amplitude eta but width sqrt(2)/eta,
///
///   X = pol * eta sech((eta/sqrt 2)(x - tau(t))) e^{-i k (x - tau(t)) + i alpha(t)},
///
/// with tau(t) = tau0 - 2 k t and alpha(t) = alpha0 + (eta^2/2 + k^2) t.
/// The deterministic validation compares runs against this form, since only
/// an exact solution of the integrated equation can serve as an oracle.
Field exact_soliton_field(double t, const Grid1D& grid, const SolitonParams& p);

/// Grid coordinate of the nodewise magnitude peak.
double peak_position(const Field& f);

}  // namespace manakov
