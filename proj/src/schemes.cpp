#include "manakov/schemes.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "manakov/csv.hpp"
#include "manakov/propagator.hpp"
#include "manakov/spectral.hpp"

namespace manakov {

const char* to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::CrankNicolson: return "cn";
        case SchemeKind::Relaxation: return "relaxation";
        case SchemeKind::SplitStep: return "splitstep";
        case SchemeKind::EulerIto: return "euler_ito";
    }
    return "unknown";
}

SchemeKind scheme_from_string(const std::string& name) {
    if (name == "cn" || name == "crank_nicolson") return SchemeKind::CrankNicolson;
    if (name == "relaxation") return SchemeKind::Relaxation;
    if (name == "splitstep" || name == "split_step") return SchemeKind::SplitStep;
    if (name == "euler_ito" || name == "euler") return SchemeKind::EulerIto;
    throw std::invalid_argument("unknown scheme name: " + name);
}

void SchemeConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be > 0");
    if (gamma < 0.0) throw std::invalid_argument("SchemeConfig: gamma must be >= 0");
    if (!(nl_tol > 0.0)) throw std::invalid_argument("SchemeConfig: nl_tol must be > 0");
    if (nl_max_iter < 1) throw std::invalid_argument("SchemeConfig: nl_max_iter must be >= 1");
    if (grid.interior_points < 2) throw std::invalid_argument("SchemeConfig: grid too small");
    if (scheme == SchemeKind::SplitStep && !spectral::is_power_of_two(grid.interior_points))
        throw std::invalid_argument(
            "SchemeConfig: split-step needs a power-of-two interior point count");
    if (guard_enabled && guard_radius > 0.0 && dt > guard_c2 / (guard_radius * guard_radius))
        throw std::invalid_argument("SchemeConfig: guard requires dt <= C2 / R0^2");
}

std::string scheme_config_canonical(const SchemeConfig& cfg) {
    std::ostringstream o;
    o << "scheme=" << to_string(cfg.scheme) << ";dt=" << csv::num(cfg.dt)
      << ";gamma=" << csv::num(cfg.gamma) << ";a=" << csv::num(cfg.grid.half_width)
      << ";M=" << cfg.grid.interior_points << ";nl_tol=" << csv::num(cfg.nl_tol)
      << ";nl_max_iter=" << cfg.nl_max_iter << ";guard=" << (cfg.guard_enabled ? 1 : 0)
      << ";R0=" << csv::num(cfg.guard_radius) << ";C2=" << csv::num(cfg.guard_c2)
      << ";cap=" << csv::num(cfg.overflow_cap) << ";linear_only=" << (cfg.linear_only ? 1 : 0);
    return o.str();
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

RelaxState RelaxState::initial(const Field& x0) {
    RelaxState s;
    s.phi.resize(x0.values.size());
    for (std::size_t j = 0; j < s.phi.size(); ++j) s.phi[j] = x0.values[j].norm2();
    return s;
}

namespace {

void check_guard(const Field& x, const SchemeConfig& cfg) {
    if (!cfg.guard_enabled || cfg.guard_radius <= 0.0) return;
    const double h1 = discrete_h1_norm(x);
    if (h1 > cfg.guard_radius)
        throw StepError(RunStatus::GuardTriggered,
                        "H1 norm " + csv::num(h1) + " exceeds guard radius " +
                            csv::num(cfg.guard_radius));
}

}  // namespace

Field cn_step(const Field& x, const std::array<double, 3>& chi, const SchemeConfig& cfg) {
    const StepOperator op = assemble_step_operator(cfg.dt, cfg.gamma, chi, cfg.grid);
    if (cfg.linear_only) {
        Field lin = one_step_linear(op, x);
        check_guard(lin, cfg);
        return lin;
    }

    const Field explicit_part = apply_id_minus_half_h(op, x);
    const cplx idt{0.0, cfg.dt};
    const double scale = l2_norm(x);
    const int m = cfg.grid.interior_points;

    Field current = x;
    Field rhs(cfg.grid);
    for (int it = 0; it < cfg.nl_max_iter; ++it) {
        // F(X^n, X^(m)) = (|X^n|^2 + |X^(m)|^2)/2 * midpoint.
        for (int j = 1; j <= m; ++j) {
            const double intensity = 0.5 * (x[j].norm2() + current[j].norm2());
            const Vec2c mid = 0.5 * (x[j] + current[j]);
            rhs[j] = explicit_part[j] + (idt * intensity) * mid;
        }
        Field next = solve_T(op, rhs);
        double delta2 = 0.0;
        for (int j = 1; j <= m; ++j) delta2 += (next[j] - current[j]).norm2();
        const double delta = std::sqrt(cfg.grid.dx() * delta2);
        current = std::move(next);
        if (delta <= cfg.nl_tol * scale) {
            check_guard(current, cfg);
            return current;
        }
    }
    throw StepError(RunStatus::NonConvergence,
                    "fixed point not converged in " + std::to_string(cfg.nl_max_iter) +
                        " iterations; dt too large for the current amplitude");
}

std::pair<Field, RelaxState> relaxation_step(const Field& x, const RelaxState& relax,
                                             const std::array<double, 3>& chi,
                                             const SchemeConfig& cfg) {
    if (relax.phi.size() != x.values.size())
        throw std::invalid_argument("relaxation_step: state size mismatch");
    const StepOperator op = assemble_step_operator(cfg.dt, cfg.gamma, chi, cfg.grid);
    const int m = cfg.grid.interior_points;

    RelaxState next_state;
    next_state.phi.resize(relax.phi.size());
    for (std::size_t j = 0; j < relax.phi.size(); ++j)
        next_state.phi[j] = 2.0 * x.values[j].norm2() - relax.phi[j];

    // (Id + H/2 - i dt/2 Phi) X^{n+1} = (Id - H/2 + i dt/2 Phi) X^n.
    const Field explicit_part = apply_id_minus_half_h(op, x);
    const cplx half_idt{0.0, 0.5 * cfg.dt};
    std::vector<Vec2c> rhs(m);
    std::vector<Mat2c> diag(m);
    const Mat2c t_diag = op.t_diag();
    for (int j = 1; j <= m; ++j) {
        const cplx shift = half_idt * next_state.phi[j];
        rhs[j - 1] = explicit_part[j] + shift * x[j];
        diag[j - 1] = t_diag - shift * Mat2c::identity();
    }

    Field out(cfg.grid);
    solve_block_tridiag(op.t_lower(), diag, op.t_upper(), rhs,
                        std::span<Vec2c>(out.values.data() + 1, m));
    check_guard(out, cfg);
    return {std::move(out), std::move(next_state)};
}

Field splitstep_linear_substep(const Field& x, const std::array<double, 3>& chi,
                               const SchemeConfig& cfg) {
    const int m = cfg.grid.interior_points;
    if (!spectral::is_power_of_two(m))
        throw std::invalid_argument("splitstep: interior point count must be a power of two");
    const double a = cfg.grid.half_width;

    std::vector<std::complex<double>> c1(m), c2(m);
    for (int j = 0; j < m; ++j) {
        c1[j] = x[j + 1].a;
        c2[j] = x[j + 1].b;
    }
    spectral::fft(c1);
    spectral::fft(c2);

    const double pi_over_a = std::numbers::pi / a;
    for (int bin = 0; bin < m; ++bin) {
        const double h = pi_over_a * spectral::mode_index(bin, m);
        const Mat2c hh = symbol_matrix(h, cfg.dt, cfg.gamma, chi);
        const Mat2c plus = Mat2c::identity() + 0.5 * hh;
        const Mat2c minus = Mat2c::identity() - 0.5 * hh;
        const Vec2c in{c1[bin], c2[bin]};
        const Vec2c out = plus.inverse() * (minus * in);
        c1[bin] = out.a;
        c2[bin] = out.b;
    }

    spectral::ifft(c1);
    spectral::ifft(c2);
    Field y(cfg.grid);
    for (int j = 0; j < m; ++j) y[j + 1] = Vec2c{c1[j], c2[j]};
    return y;
}

Field splitstep_step(const Field& x, const std::array<double, 3>& chi,
                     const SchemeConfig& cfg) {
    Field y = splitstep_linear_substep(x, chi, cfg);
    const int m = cfg.grid.interior_points;
    for (int j = 1; j <= m; ++j) {
        const double phase = y[j].norm2() * cfg.dt;
        y[j] = cplx{std::cos(phase), std::sin(phase)} * y[j];
    }
    check_guard(y, cfg);
    return y;
}

Field euler_ito_step(const Field& x, const std::array<double, 3>& chi,
                     const SchemeConfig& cfg) {
    const double dx = cfg.grid.dx();
    const double r = cfg.dt / (dx * dx);
    const cplx c_gamma{1.5 * cfg.gamma, 1.0};  // i + 3 gamma / 2, times the Laplacian
    const cplx idt{0.0, cfg.dt};
    const double noise = std::sqrt(cfg.gamma * cfg.dt) / (2.0 * dx);
    const Mat2c s = pauli_combination(chi);
    const int m = cfg.grid.interior_points;

    Field out(cfg.grid);
    for (int j = 1; j <= m; ++j) {
        const Vec2c lap = x[j - 1] - 2.0 * x[j] + x[j + 1];
        const Vec2c grad = x[j + 1] - x[j - 1];
        out[j] = x[j] + (c_gamma * r) * lap + (idt * x[j].norm2()) * x[j] - noise * (s * grad);
    }
    if (!(l2_norm(out) <= cfg.overflow_cap))
        throw StepError(RunStatus::Overflow, "explicit Ito step exceeded the norm cap");
    check_guard(out, cfg);
    return out;
}

std::string serialize_run_record(const RunRecord& rec, bool include_timing) {
    std::ostringstream o;
    o << "config_hash=" << rec.config_hash << "\nseed=" << rec.seed
      << "\ngenerator=" << rec.generator_name << "\nscheme=" << to_string(rec.scheme)
      << "\nstatus=" << to_string(rec.status) << "\nfailed_step=" << rec.failed_step << '\n';
    if (include_timing) o << "wall_seconds=" << csv::num(rec.wall_seconds) << '\n';
    o << "err_l2=" << csv::num(rec.err_l2) << "\nerr_linf=" << csv::num(rec.err_linf)
      << "\nerr_h1max=" << csv::num(rec.err_h1max) << '\n';
    for (const StepDiagnostics& s : rec.steps)
        o << csv::num(s.t) << ',' << csv::num(s.mass) << ',' << csv::num(s.h1) << '\n';
    return o.str();
}

RunRecord evolve(const Field& x0, const BrownianPath& path, const SchemeConfig& cfg,
                 const std::vector<StepObserver>& observers) {
    SchemeConfig run_cfg = cfg;
    if (run_cfg.guard_enabled && run_cfg.guard_radius <= 0.0)
        run_cfg.guard_radius = 10.0 * discrete_h1_norm(x0);
    run_cfg.validate();
    if (path.n_steps() > 0 &&
        std::abs(path.dt - run_cfg.dt) > 1e-12 * std::max(path.dt, run_cfg.dt))
        throw std::invalid_argument("evolve: path.dt does not match cfg.dt");

    const auto start = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.config_hash = [&] {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(scheme_config_canonical(run_cfg))));
        return std::string(buf);
    }();
    rec.seed = path.seed;
    rec.generator_name = GaussianStream::generator_name();
    rec.scheme = run_cfg.scheme;
    rec.steps.push_back({0.0, discrete_l2_mass(x0), discrete_h1_norm(x0)});

    Field state = x0;
    RelaxState relax = RelaxState::initial(x0);
    for (int n = 0; n < path.n_steps(); ++n) {
        const std::array<double, 3> chi = path.chi(n);
        try {
            switch (run_cfg.scheme) {
                case SchemeKind::CrankNicolson:
                    state = cn_step(state, chi, run_cfg);
                    break;
                case SchemeKind::Relaxation: {
                    auto [next, next_relax] = relaxation_step(state, relax, chi, run_cfg);
                    state = std::move(next);
                    relax = std::move(next_relax);
                    break;
                }
                case SchemeKind::SplitStep:
                    state = splitstep_step(state, chi, run_cfg);
                    break;
                case SchemeKind::EulerIto:
                    state = euler_ito_step(state, chi, run_cfg);
                    break;
            }
        } catch (const StepError& e) {
            rec.status = e.status();
            rec.failed_step = n;
            break;
        }
        StepObservation obs;
        obs.step = n + 1;
        obs.t = (n + 1) * run_cfg.dt;
        obs.mass = discrete_l2_mass(state);
        obs.h1 = discrete_h1_norm(state);
        if (run_cfg.snapshot_cadence > 0 && (n + 1) % run_cfg.snapshot_cadence == 0)
            obs.snapshot = &state;
        rec.steps.push_back({obs.t, obs.mass, obs.h1});
        for (const StepObserver& o : observers) o(obs);
    }

    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace manakov
