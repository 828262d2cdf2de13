#include "manakov/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "manakov/csv.hpp"

namespace manakov {

double discrete_l2_mass(const Field& f) {
    double s = 0.0;
    for (const Vec2c& v : f.values) s += v.norm2();
    return f.grid.dx() * s;
}

double discrete_h1_norm(const Field& f) {
    const double dx = f.grid.dx();
    double grad = 0.0;
    for (std::size_t j = 0; j + 1 < f.values.size(); ++j) {
        const Vec2c d = f.values[j + 1] - f.values[j];
        grad += d.norm2();
    }
    return std::sqrt(discrete_l2_mass(f) + grad / dx);
}

double real_inner_product(const Field& u, const Field& v) {
    if (!(u.grid == v.grid)) throw std::invalid_argument("real_inner_product: grid mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < u.values.size(); ++j) {
        s += std::real(u.values[j].a * std::conj(v.values[j].a)) +
             std::real(u.values[j].b * std::conj(v.values[j].b));
    }
    return u.grid.dx() * s;
}

double l2_norm(const Field& f) { return std::sqrt(discrete_l2_mass(f)); }

double linf_norm(const Field& f) {
    double m = 0.0;
    for (const Vec2c& v : f.values) m = std::max(m, v.norm2());
    return std::sqrt(m);
}

void write_field_csv(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
    out << "x,ReX1,ImX1,ReX2,ImX2\n";
    for (int j = 0; j < f.n_nodes(); ++j) {
        const Vec2c& v = f.values[j];
        out << csv::num(f.grid.node(j)) << ',' << csv::num(v.a.real()) << ','
            << csv::num(v.a.imag()) << ',' << csv::num(v.b.real()) << ','
            << csv::num(v.b.imag()) << '\n';
    }
}

}  // namespace manakov
