#pragma once

#include <string>
#include <vector>

#include "manakov/grid.hpp"
#include "manakov/pauli.hpp"

namespace manakov {

/// Two-component complex field sampled on a Grid1D.
///
/// values has length M+2; entries 0 and M+1 sit on the Dirichlet boundary
/// and are kept identically zero by every operation that returns a Field.
struct Field {
    Grid1D grid;
    std::vector<Vec2c> values;

    Field() = default;
    explicit Field(const Grid1D& g) : grid(g), values(g.n_nodes()) {}

    int n_nodes() const { return static_cast<int>(values.size()); }
    Vec2c& operator[](int j) { return values[j]; }
    const Vec2c& operator[](int j) const { return values[j]; }
};

/// dx * sum_{j=0..M+1} (|X_1,j|^2 + |X_2,j|^2).
double discrete_l2_mass(const Field& f);

/// sqrt(mass + dx * sum_j |(X_{j+1} - X_j)/dx|^2), forward differences over
/// every gap j = 0..M. Used by the blow-up guard and error diagnostics only.
double discrete_h1_norm(const Field& f);

/// Real L^2 inner product: dx * sum_j Re(u_j . conj(v_j)).
double real_inner_product(const Field& u, const Field& v);

double l2_norm(const Field& f);

/// Nodewise-max vector norm: max_j sqrt(|X_1,j|^2 + |X_2,j|^2).
double linf_norm(const Field& f);

/// CSV snapshot, columns x, Re(X1), Im(X1), Re(X2), Im(X2), one row per node.
void write_field_csv(const Field& f, const std::string& path);

}  // namespace manakov
