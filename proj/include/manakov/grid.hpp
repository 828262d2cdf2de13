#pragma once

#include <stdexcept>

namespace manakov {

/// Uniform 1-D grid on [-a, a] with homogeneous Dirichlet endpoints.
///
/// Nodes are x_j = -a + j*dx for j = 0..M+1, where M counts interior
/// nodes and dx = 2a/(M+1). Fields sampled on the grid store the two
/// boundary nodes explicitly so that stencils at j = 1 and j = M read
/// zeros without branching.
struct Grid1D {
    double half_width = 0.0;  // a
    int interior_points = 0;  // M

    Grid1D() = default;
    Grid1D(double a, int m) : half_width(a), interior_points(m) {
        if (!(a > 0.0)) throw std::invalid_argument("Grid1D: half_width must be > 0");
        if (m < 2) throw std::invalid_argument("Grid1D: need at least 2 interior points");
    }

    double dx() const { return 2.0 * half_width / (interior_points + 1); }
    int n_nodes() const { return interior_points + 2; }
    double node(int j) const { return -half_width + j * dx(); }

    friend bool operator==(const Grid1D& g, const Grid1D& h) {
        return g.half_width == h.half_width && g.interior_points == h.interior_points;
    }
};

}  // namespace manakov
