#pragma once

#include <array>
#include <complex>
#include <stdexcept>

namespace manakov {

using cplx = std::complex<double>;

/// Complex 2-vector, the two polarization components at one grid node.
struct Vec2c {
    cplx a{0.0, 0.0};
    cplx b{0.0, 0.0};

    friend Vec2c operator+(const Vec2c& u, const Vec2c& v) { return {u.a + v.a, u.b + v.b}; }
    friend Vec2c operator-(const Vec2c& u, const Vec2c& v) { return {u.a - v.a, u.b - v.b}; }
    friend Vec2c operator*(const cplx& s, const Vec2c& v) { return {s * v.a, s * v.b}; }
    friend Vec2c operator*(double s, const Vec2c& v) { return {s * v.a, s * v.b}; }
    Vec2c& operator+=(const Vec2c& v) { a += v.a; b += v.b; return *this; }
    Vec2c& operator-=(const Vec2c& v) { a -= v.a; b -= v.b; return *this; }

    /// |X_1|^2 + |X_2|^2 at the node.
    double norm2() const { return std::norm(a) + std::norm(b); }
};

/// Dense complex 2x2 matrix, row-major.
struct Mat2c {
    cplx m00{0.0, 0.0}, m01{0.0, 0.0}, m10{0.0, 0.0}, m11{0.0, 0.0};

    friend Mat2c operator+(const Mat2c& p, const Mat2c& q) {
        return {p.m00 + q.m00, p.m01 + q.m01, p.m10 + q.m10, p.m11 + q.m11};
    }
    friend Mat2c operator-(const Mat2c& p, const Mat2c& q) {
        return {p.m00 - q.m00, p.m01 - q.m01, p.m10 - q.m10, p.m11 - q.m11};
    }
    friend Mat2c operator*(const cplx& s, const Mat2c& q) {
        return {s * q.m00, s * q.m01, s * q.m10, s * q.m11};
    }
    friend Mat2c operator*(double s, const Mat2c& q) {
        return {s * q.m00, s * q.m01, s * q.m10, s * q.m11};
    }
    friend Mat2c operator*(const Mat2c& p, const Mat2c& q) {
        return {p.m00 * q.m00 + p.m01 * q.m10, p.m00 * q.m01 + p.m01 * q.m11,
                p.m10 * q.m00 + p.m11 * q.m10, p.m10 * q.m01 + p.m11 * q.m11};
    }
    friend Vec2c operator*(const Mat2c& p, const Vec2c& v) {
        return {p.m00 * v.a + p.m01 * v.b, p.m10 * v.a + p.m11 * v.b};
    }
    friend bool operator==(const Mat2c& p, const Mat2c& q) {
        return p.m00 == q.m00 && p.m01 == q.m01 && p.m10 == q.m10 && p.m11 == q.m11;
    }

    Mat2c adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }
    cplx det() const { return m00 * m11 - m01 * m10; }

    /// Direct inverse. Caller guarantees det != 0.
    Mat2c inverse() const {
        const cplx d = det();
        return {m11 / d, -m01 / d, -m10 / d, m00 / d};
    }

    static Mat2c identity() { return {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}; }
    static Mat2c zero() { return {}; }
};

/// One of the three Hermitian coupling matrices, together with its index.
struct PauliMatrix {
    int index = 0;  // 1, 2 or 3
    Mat2c entries;
};

/// sigma_1 = [[0,1],[1,0]], sigma_2 = [[0,-i],[i,0]], sigma_3 = [[1,0],[0,-1]].
inline PauliMatrix pauli(int k) {
    const cplx i{0.0, 1.0};
    switch (k) {
        case 1: return {1, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}};
        case 2: return {2, {{0.0, 0.0}, -i, i, {0.0, 0.0}}};
        case 3: return {3, {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}}};
        default: throw std::invalid_argument("pauli: index must be 1, 2 or 3");
    }
}

/// Levi-Civita symbol for indices in 1..3.
inline int levi_civita(int j, int k, int l) { return (j - k) * (k - l) * (l - j) / 2; }

/// S = sum_k chi_k sigma_k, the Hermitian matrix coupling the components
/// in the noise term for one step's Gaussian draw chi.
inline Mat2c pauli_combination(const std::array<double, 3>& chi) {
    return {cplx{chi[2], 0.0}, cplx{chi[0], -chi[1]}, cplx{chi[0], chi[1]}, cplx{-chi[2], 0.0}};
}

}  // namespace manakov
