#include "manakov/brownian.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace manakov {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Map a 64-bit word to (0, 1]; never zero, so log() below is safe.
double to_unit(std::uint64_t x) { return ((x >> 11) + 1) * 0x1.0p-53; }

}  // namespace

double GaussianStream::normal(std::uint64_t i) const {
    const std::uint64_t pair = i / 2;
    const std::uint64_t u = mix64(seed_ + (2 * pair + 1) * kGoldenGamma);
    const std::uint64_t v = mix64(seed_ + (2 * pair + 2) * kGoldenGamma);
    const double r = std::sqrt(-2.0 * std::log(to_unit(u)));
    const double theta = 2.0 * std::numbers::pi * to_unit(v);
    return (i % 2 == 0) ? r * std::cos(theta) : r * std::sin(theta);
}

std::array<double, 3> BrownianPath::chi(int n) const {
    const double s = 1.0 / std::sqrt(dt);
    return {increments[n][0] * s, increments[n][1] * s, increments[n][2] * s};
}

BrownianPath sample_path(std::uint64_t seed, int n_steps, double dt) {
    if (n_steps < 1) throw std::invalid_argument("sample_path: n_steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_path: dt must be > 0");
    BrownianPath p;
    p.seed = seed;
    p.level = 0;
    p.dt = dt;
    p.increments.resize(n_steps);
    const GaussianStream g(seed);
    const double sqrt_dt = std::sqrt(dt);
    for (int n = 0; n < n_steps; ++n)
        for (int k = 0; k < 3; ++k)
            p.increments[n][k] = sqrt_dt * g.normal(3ull * n + k);
    return p;
}

namespace {

BrownianPath halve(const BrownianPath& path) {
    BrownianPath c;
    c.seed = path.seed;
    c.level = path.level + 1;
    c.dt = path.dt * 2.0;
    c.increments.resize(path.increments.size() / 2);
    for (std::size_t n = 0; n < c.increments.size(); ++n)
        for (int k = 0; k < 3; ++k)
            c.increments[n][k] = path.increments[2 * n][k] + path.increments[2 * n + 1][k];
    return c;
}

}  // namespace

BrownianPath coarsen(const BrownianPath& path, int factor) {
    if (factor < 1 || path.n_steps() % factor != 0)
        throw std::invalid_argument("coarsen: factor must divide n_steps");
    if (factor == 1) return path;
    if ((factor & (factor - 1)) == 0) {
        BrownianPath c = path;
        for (int f = factor; f > 1; f /= 2) c = halve(c);
        return c;
    }
    BrownianPath c;
    c.seed = path.seed;
    c.level = path.level;
    c.dt = path.dt * factor;
    c.increments.resize(path.increments.size() / factor);
    for (std::size_t n = 0; n < c.increments.size(); ++n) {
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (int i = 0; i < factor; ++i)
            for (int k = 0; k < 3; ++k) acc[k] += path.increments[n * factor + i][k];
        c.increments[n] = acc;
    }
    return c;
}

namespace {

void put_u64(std::ofstream& out, std::uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    put_u64(out, bits);
}

std::uint64_t get_u64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}

double get_f64(std::ifstream& in) {
    const std::uint64_t bits = get_u64(in);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

}  // namespace

void write_path_binary(const BrownianPath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("write_path_binary: cannot open " + file);
    put_u64(out, path.seed);
    put_u64(out, static_cast<std::uint64_t>(path.n_steps()));
    put_f64(out, path.dt);
    for (const auto& inc : path.increments)
        for (int k = 0; k < 3; ++k) put_f64(out, inc[k]);
}

BrownianPath read_path_binary(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("read_path_binary: cannot open " + file);
    BrownianPath p;
    p.seed = get_u64(in);
    const std::uint64_t n = get_u64(in);
    p.dt = get_f64(in);
    p.increments.resize(n);
    for (auto& inc : p.increments)
        for (int k = 0; k < 3; ++k) inc[k] = get_f64(in);
    if (!in) throw std::runtime_error("read_path_binary: truncated file " + file);
    return p;
}

}  // namespace manakov
