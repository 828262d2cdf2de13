#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace manakov {

/// Deterministic standard-Gaussian stream indexed by draw number.
///
/// The underlying generator is splitmix64 used in counter mode: draw i mixes
/// seed + (i+1)*golden_gamma, so any draw can be produced independently of
/// the others and distinct seeds give statistically independent streams.
/// Gaussians come from a Box-Muller pair on two consecutive counters.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}

    /// i-th standard normal of the stream (pairs share one Box-Muller call).
    double normal(std::uint64_t i) const;

    static const char* generator_name() { return "splitmix64-counter/box-muller"; }

  private:
    std::uint64_t seed_;
};

/// Sampled 3-D Brownian increments over n_steps of size dt.
///
/// increments[n][k] = W_k((n+1)dt) - W_k(n dt); dividing by sqrt(dt)
/// recovers the standard-Gaussian draw chi_k^n that the step operators use.
/// level counts the dyadic coarsenings applied since the path was sampled.
struct BrownianPath {
    std::uint64_t seed = 0;
    int level = 0;
    double dt = 0.0;
    std::vector<std::array<double, 3>> increments;

    int n_steps() const { return static_cast<int>(increments.size()); }

    /// chi_k^n = increment / sqrt(dt).
    std::array<double, 3> chi(int n) const;
};

/// N i.i.d. Gaussian triples scaled by sqrt(dt); a pure function of seed.
BrownianPath sample_path(std::uint64_t seed, int n_steps, double dt);

/// Merge `factor` consecutive fine increments into one coarse increment.
///
/// factor must divide n_steps. Powers of two are applied as repeated
/// pairwise halvings, so coarsen(p, 4) == coarsen(coarsen(p, 2), 2)
/// bit-for-bit; other factors sum each window left to right.
BrownianPath coarsen(const BrownianPath& path, int factor);

/// Binary dump: seed, N, dt as little-endian 64-bit words, then N*3
/// little-endian doubles in step-major order.
void write_path_binary(const BrownianPath& path, const std::string& file);
BrownianPath read_path_binary(const std::string& file);

}  // namespace manakov
