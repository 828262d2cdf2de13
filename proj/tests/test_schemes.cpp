#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "manakov/brownian.hpp"
#include "manakov/field.hpp"
#include "manakov/propagator.hpp"
#include "manakov/schemes.hpp"
#include "manakov/soliton.hpp"
#include "manakov/spectral.hpp"

using namespace manakov;

namespace {

Field random_field(const Grid1D& grid, std::uint64_t seed, double amplitude = 1.0) {
    const GaussianStream g(seed);
    Field f(grid);
    for (int j = 1; j <= grid.interior_points; ++j)
        f[j] = amplitude * Vec2c{cplx{g.normal(4 * j), g.normal(4 * j + 1)},
                                 cplx{g.normal(4 * j + 2), g.normal(4 * j + 3)}};
    return f;
}

SolitonParams table_soliton() {
    SolitonParams p;
    p.theta = -std::numbers::pi / 2.0;
    p.eta = 0.5;
    p.alpha0 = std::numbers::pi;
    return p;
}

double rel_l2_diff(const Field& u, const Field& v) {
    Field d(u.grid);
    for (std::size_t j = 0; j < d.values.size(); ++j) d.values[j] = u.values[j] - v.values[j];
    const double base = l2_norm(u);
    return base == 0.0 ? l2_norm(d) : l2_norm(d) / base;
}

SchemeConfig base_config(SchemeKind scheme, const Grid1D& grid, double dt, double gamma) {
    SchemeConfig cfg;
    cfg.scheme = scheme;
    cfg.grid = grid;
    cfg.dt = dt;
    cfg.gamma = gamma;
    return cfg;
}

}  // namespace

TEST_CASE("zero field is a fixed point of every scheme") {
    const Grid1D grid(10.0, 64);
    const std::array<double, 3> chi{0.7, -0.2, 1.1};
    const Field zero(grid);

    CHECK(discrete_l2_mass(cn_step(zero, chi,
                                   base_config(SchemeKind::CrankNicolson, grid, 0.01, 0.1))) == 0.0);
    const RelaxState relax = RelaxState::initial(zero);
    const auto [rfield, rstate] =
        relaxation_step(zero, relax, chi, base_config(SchemeKind::Relaxation, grid, 0.01, 0.1));
    CHECK(discrete_l2_mass(rfield) == 0.0);
    CHECK(discrete_l2_mass(splitstep_step(
              zero, chi, base_config(SchemeKind::SplitStep, grid, 0.01, 0.1))) == 0.0);
    CHECK(discrete_l2_mass(euler_ito_step(
              zero, chi, base_config(SchemeKind::EulerIto, grid, 0.01, 0.1))) == 0.0);
}

TEST_CASE("linear-only hook reduces one cn step to the midpoint propagator") {
    const Grid1D grid(10.0, 48);
    const std::array<double, 3> chi{0.0, 0.0, 0.0};
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 0.02, 0.0);
    cfg.linear_only = true;
    const Field x = random_field(grid, 4);
    const Field stepped = cn_step(x, chi, cfg);
    const StepOperator op = assemble_step_operator(cfg.dt, cfg.gamma, chi, grid);
    CHECK(rel_l2_diff(stepped, one_step_linear(op, x)) < 1e-15);
}

TEST_CASE("cn step conserves mass to the iteration tolerance") {
    const Grid1D grid(30.0, 256);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    const BrownianPath path = sample_path(6, 20, 1.0 / 256.0);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 1.0 / 256.0, 0.1);
    Field x = x0;
    for (int n = 0; n < 20; ++n) {
        const Field next = cn_step(x, path.chi(n), cfg);
        CHECK(std::abs(discrete_l2_mass(next) - discrete_l2_mass(x)) <=
              10.0 * cfg.nl_tol * discrete_l2_mass(x0));
        x = next;
    }
}

TEST_CASE("cn solution satisfies the implicit relation to nl_tol") {
    const Grid1D grid(30.0, 128);
    const Field x = soliton_field(0.0, grid, table_soliton());
    const std::array<double, 3> chi{0.6, -1.4, 0.3};
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 1.0 / 128.0, 0.1);
    const Field next = cn_step(x, chi, cfg);

    // Residual of X^{n+1} - X^n + H X^{n+1/2} - i dt F(X^n, X^{n+1}).
    const StepOperator op = assemble_step_operator(cfg.dt, cfg.gamma, chi, grid);
    Field mid(grid);
    for (int j = 0; j < grid.n_nodes(); ++j) mid[j] = 0.5 * (x[j] + next[j]);
    const Field hmid = apply_h(op, mid);
    Field residual(grid);
    const cplx idt{0.0, cfg.dt};
    for (int j = 1; j <= grid.interior_points; ++j) {
        const double intensity = 0.5 * (x[j].norm2() + next[j].norm2());
        residual[j] = next[j] - x[j] + hmid[j] - (idt * intensity) * mid[j];
    }
    CHECK(l2_norm(residual) <= cfg.nl_tol * l2_norm(x));
}

TEST_CASE("cn reports nonconvergence when dt is too large for the amplitude") {
    const Grid1D grid(10.0, 64);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 0.5, 0.0);
    const Field big = random_field(grid, 8, 3.0);
    CHECK_THROWS_AS(cn_step(big, {0.0, 0.0, 0.0}, cfg), StepError);
    try {
        cn_step(big, {0.0, 0.0, 0.0}, cfg);
    } catch (const StepError& e) {
        CHECK(e.status() == RunStatus::NonConvergence);
    }
}

TEST_CASE("first relaxation step squares the initial intensity") {
    const Grid1D grid(10.0, 32);
    const Field x0 = random_field(grid, 10);
    const RelaxState relax = RelaxState::initial(x0);
    const auto [next, state] = relaxation_step(
        x0, relax, {0.2, 0.4, -0.6}, base_config(SchemeKind::Relaxation, grid, 0.01, 0.1));
    // Phi^{1/2} = 2|X^0|^2 - |X^0|^2 = |X^0|^2, exactly.
    for (int j = 0; j < grid.n_nodes(); ++j) CHECK(state.phi[j] == x0[j].norm2());
}

TEST_CASE("relaxation conserves mass over 200 steps") {
    const Grid1D grid(30.0, 256);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    const double dt = 1.0 / 200.0;
    const BrownianPath path = sample_path(13, 200, dt);
    SchemeConfig cfg = base_config(SchemeKind::Relaxation, grid, dt, 0.1);
    Field x = x0;
    RelaxState relax = RelaxState::initial(x0);
    const double mass0 = discrete_l2_mass(x0);
    for (int n = 0; n < 200; ++n) {
        auto [next, state] = relaxation_step(x, relax, path.chi(n), cfg);
        x = std::move(next);
        relax = std::move(state);
        CHECK(std::abs(discrete_l2_mass(x) - mass0) <= 1e-10 * mass0);
    }
}

TEST_CASE("fft matches the dft definition and inverts exactly") {
    const int n = 32;
    const GaussianStream g(314);
    std::vector<std::complex<double>> data(n);
    for (int j = 0; j < n; ++j) data[j] = {g.normal(2 * j), g.normal(2 * j + 1)};

    std::vector<std::complex<double>> transformed = data;
    spectral::fft(transformed);
    for (int m = 0; m < n; ++m) {
        std::complex<double> direct{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            const double arg = -2.0 * std::numbers::pi * j * m / n;
            direct += data[j] * std::complex<double>{std::cos(arg), std::sin(arg)};
        }
        CHECK(std::abs(transformed[m] - direct) < 1e-12);
    }

    spectral::ifft(transformed);
    for (int j = 0; j < n; ++j) CHECK(std::abs(transformed[j] - data[j]) < 1e-13);

    std::vector<std::complex<double>> odd(12);
    CHECK_THROWS_AS(spectral::fft(odd), std::invalid_argument);
}

TEST_CASE("split-step linear substep advances a pure mode by the cayley phase") {
    const Grid1D grid(12.0, 64);
    const int m = grid.interior_points;
    SchemeConfig cfg = base_config(SchemeKind::SplitStep, grid, 0.05, 0.0);
    for (int bin : {1, 5, 31, 33, 62}) {
        Field x(grid);
        for (int s = 0; s < m; ++s) {
            const double arg = 2.0 * std::numbers::pi * bin * s / m;
            x[s + 1] = Vec2c{cplx{std::cos(arg), std::sin(arg)}, {}};
        }
        const Field y = splitstep_linear_substep(x, {0.0, 0.0, 0.0}, cfg);
        const int k = bin < m / 2 ? bin : bin - m;
        const double h = std::numbers::pi * k / grid.half_width;
        const cplx cayley = (1.0 - cplx{0.0, 0.5 * cfg.dt * h * h}) /
                            (1.0 + cplx{0.0, 0.5 * cfg.dt * h * h});
        for (int s = 0; s < m; ++s) {
            const cplx expected = cayley * x[s + 1].a;
            CHECK(std::abs(y[s + 1].a - expected) < 1e-12);
            CHECK(std::abs(y[s + 1].b) < 1e-12);
        }
    }
}

TEST_CASE("split-step nonlinear substep preserves nodewise modulus") {
    const Grid1D grid(10.0, 128);
    SchemeConfig cfg = base_config(SchemeKind::SplitStep, grid, 0.07, 0.3);
    const Field x = random_field(grid, 14);
    const std::array<double, 3> chi{0.9, 0.1, -0.8};
    const Field y = splitstep_linear_substep(x, chi, cfg);
    const Field z = splitstep_step(x, chi, cfg);
    for (int j = 1; j <= grid.interior_points; ++j) {
        const double ny = std::sqrt(y[j].norm2());
        const double nz = std::sqrt(z[j].norm2());
        CHECK(std::abs(nz - ny) <= 1e-15 * std::max(1.0, ny));
    }
}

TEST_CASE("split-step conserves mass to 1e-12 over a run") {
    const Grid1D grid(30.0, 256);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    const double dt = 1.0 / 128.0;
    const BrownianPath path = sample_path(15, 128, dt);
    SchemeConfig cfg = base_config(SchemeKind::SplitStep, grid, dt, 0.1);
    Field x = x0;
    const double mass0 = discrete_l2_mass(x0);
    for (int n = 0; n < 128; ++n) {
        x = splitstep_step(x, path.chi(n), cfg);
        CHECK(std::abs(discrete_l2_mass(x) - mass0) <= 1e-12 * mass0);
    }
}

TEST_CASE("split-step requires a power-of-two interior count") {
    const Grid1D grid(10.0, 100);
    SchemeConfig cfg = base_config(SchemeKind::SplitStep, grid, 0.01, 0.1);
    CHECK_THROWS_AS(splitstep_step(Field(grid), {0.0, 0.0, 0.0}, cfg), std::invalid_argument);
}

TEST_CASE("euler-ito with gamma = 0 is the explicit euler update") {
    const Grid1D grid(10.0, 64);
    SchemeConfig cfg = base_config(SchemeKind::EulerIto, grid, 0.0005, 0.0);
    const Field x = random_field(grid, 20);
    const Field stepped = euler_ito_step(x, {4.0, -2.0, 1.0}, cfg);  // chi must not matter

    const double r = cfg.dt / (grid.dx() * grid.dx());
    const cplx i{0.0, 1.0};
    Field oracle(grid);
    for (int j = 1; j <= grid.interior_points; ++j) {
        const Vec2c lap = x[j - 1] - 2.0 * x[j] + x[j + 1];
        oracle[j] = x[j] + (i * r) * lap + (i * cfg.dt * x[j].norm2()) * x[j];
    }
    CHECK(rel_l2_diff(stepped, oracle) < 1e-12);
}

TEST_CASE("euler-ito reports overflow past the cap") {
    const Grid1D grid(10.0, 64);
    SchemeConfig cfg = base_config(SchemeKind::EulerIto, grid, 0.01, 0.1);
    cfg.overflow_cap = 1e-3;
    const Field x = random_field(grid, 22);
    CHECK_THROWS_AS(euler_ito_step(x, {0.5, 0.5, 0.5}, cfg), StepError);
}

TEST_CASE("evolve with an empty path returns initial diagnostics only") {
    const Grid1D grid(10.0, 32);
    const Field x0 = random_field(grid, 31);
    BrownianPath path;
    path.dt = 0.01;
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 0.01, 0.1);
    const RunRecord rec = evolve(x0, path, cfg);
    REQUIRE(rec.steps.size() == 1);
    CHECK(rec.steps[0].t == 0.0);
    CHECK(rec.steps[0].mass == doctest::Approx(discrete_l2_mass(x0)));
    CHECK(rec.status == RunStatus::Completed);
}

TEST_CASE("evolve is deterministic for fixed seed and config") {
    const Grid1D grid(20.0, 128);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    const BrownianPath path = sample_path(17, 64, 1.0 / 64.0);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 1.0 / 64.0, 0.1);
    const RunRecord a = evolve(x0, path, cfg);
    const RunRecord b = evolve(x0, path, cfg);
    CHECK(serialize_run_record(a) == serialize_run_record(b));
    CHECK(serialize_run_record(a) != serialize_run_record(
                                         evolve(x0, sample_path(18, 64, 1.0 / 64.0), cfg)));
}

TEST_CASE("cn desk run completes with small mass drift") {
    const Grid1D grid(30.0, 512);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    const int n = 256;
    const BrownianPath path = sample_path(23, n, 1.0 / n);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 1.0 / n, 0.1);
    const RunRecord rec = evolve(x0, path, cfg);
    CHECK(rec.status == RunStatus::Completed);
    const double mass0 = rec.steps.front().mass;
    for (const StepDiagnostics& s : rec.steps)
        CHECK(std::abs(s.mass - mass0) <= 1e-9 * mass0);
}

TEST_CASE("guard aborts a run whose h1 norm crosses the radius") {
    const Grid1D grid(20.0, 128);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 1.0 / 64.0, 0.1);
    cfg.guard_enabled = true;
    cfg.guard_radius = 0.5 * discrete_h1_norm(x0);  // below the initial norm
    const BrownianPath path = sample_path(29, 64, 1.0 / 64.0);
    const RunRecord rec = evolve(x0, path, cfg);
    CHECK(rec.status == RunStatus::GuardTriggered);
    CHECK(rec.failed_step == 0);
    CHECK(rec.steps.size() == 1);
}

TEST_CASE("guard demands dt below c2 over r0 squared") {
    const Grid1D grid(20.0, 128);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 0.5, 0.1);
    cfg.guard_enabled = true;
    cfg.guard_radius = 100.0;
    cfg.guard_c2 = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("every scheme keeps the boundary nodes exactly zero") {
    const Grid1D grid(10.0, 64);
    const Field x = random_field(grid, 60);
    const std::array<double, 3> chi{0.5, -0.9, 0.2};
    const Field cn = cn_step(x, chi, base_config(SchemeKind::CrankNicolson, grid, 0.01, 0.1));
    const auto [relax, rs] = relaxation_step(
        x, RelaxState::initial(x), chi, base_config(SchemeKind::Relaxation, grid, 0.01, 0.1));
    const Field split =
        splitstep_step(x, chi, base_config(SchemeKind::SplitStep, grid, 0.01, 0.1));
    const Field euler =
        euler_ito_step(x, chi, base_config(SchemeKind::EulerIto, grid, 0.001, 0.1));
    for (const Field* f : {&cn, &relax, &split, &euler}) {
        CHECK(f->values.front().norm2() == 0.0);
        CHECK(f->values.back().norm2() == 0.0);
    }
}

TEST_CASE("observers see each accepted step and snapshots at the cadence") {
    const Grid1D grid(20.0, 64);
    const Field x0 = soliton_field(0.0, grid, table_soliton());
    const int n = 12;
    const BrownianPath path = sample_path(41, n, 0.01);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 0.01, 0.1);
    cfg.snapshot_cadence = 4;

    int calls = 0;
    int snapshots = 0;
    double last_t = 0.0;
    const StepObserver obs = [&](const StepObservation& o) {
        ++calls;
        CHECK(o.step == calls);
        CHECK(o.t == doctest::Approx(o.step * cfg.dt));
        CHECK(o.mass > 0.0);
        CHECK(o.h1 >= std::sqrt(o.mass) * (1.0 - 1e-12));
        if (o.snapshot != nullptr) {
            ++snapshots;
            CHECK(o.step % cfg.snapshot_cadence == 0);
            CHECK(discrete_l2_mass(*o.snapshot) == doctest::Approx(o.mass));
        }
        last_t = o.t;
    };
    const RunRecord rec = evolve(x0, path, cfg, {obs});
    CHECK(calls == n);
    CHECK(snapshots == n / cfg.snapshot_cadence);
    CHECK(last_t == doctest::Approx(rec.final_time()));
}

TEST_CASE("evolve rejects a path whose dt disagrees with the config") {
    const Grid1D grid(10.0, 32);
    SchemeConfig cfg = base_config(SchemeKind::CrankNicolson, grid, 0.01, 0.1);
    const BrownianPath path = sample_path(3, 8, 0.02);
    CHECK_THROWS_AS(evolve(Field(grid), path, cfg), std::invalid_argument);
}
