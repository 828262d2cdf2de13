#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "manakov/brownian.hpp"
#include "manakov/errors.hpp"
#include "manakov/field.hpp"
#include "manakov/grid.hpp"

namespace manakov {

enum class SchemeKind { CrankNicolson, Relaxation, SplitStep, EulerIto };

const char* to_string(SchemeKind s);
SchemeKind scheme_from_string(const std::string& name);

struct SchemeConfig {
    SchemeKind scheme = SchemeKind::CrankNicolson;
    double dt = 0.0;
    double gamma = 0.0;
    Grid1D grid;

    // Nonlinear fixed-point controls (Crank-Nicolson only).
    double nl_tol = 1e-12;
    int nl_max_iter = 50;

    // Discrete blow-up guard: a step whose H^1 norm exceeds guard_radius
    // aborts the run. guard_radius <= 0 with the guard enabled means
    // "10x the initial H^1 norm", resolved when evolve() starts; the step
    // size must satisfy dt <= guard_c2 / guard_radius^2.
    bool guard_enabled = false;
    double guard_radius = 0.0;
    double guard_c2 = 1.0;

    // Explicit Ito baseline aborts once the L^2 norm passes this cap.
    double overflow_cap = 1e6;

    // Test hook: drop the nonlinear term so one CN step equals the pure
    // midpoint propagator.
    bool linear_only = false;

    // Steps between field snapshots handed to observers (0 = never).
    int snapshot_cadence = 0;

    void validate() const;
};

/// Canonical key=value serialization of a step configuration; hashing it
/// gives the config fingerprint carried by run records.
std::string scheme_config_canonical(const SchemeConfig& cfg);
std::uint64_t fnv1a64(const std::string& data);

/// Auxiliary variable of the relaxation scheme: Phi^{n-1/2} sampled
/// nodewise, seeded as |X^0|^2.
struct RelaxState {
    std::vector<double> phi;

    static RelaxState initial(const Field& x0);
};

/// One Crank-Nicolson step: solve the implicit midpoint relation with the
/// averaged-intensity nonlinearity by damping-free fixed-point iteration
/// started from X^n. Throws StepError on NonConvergence or a guard hit.
Field cn_step(const Field& x, const std::array<double, 3>& chi, const SchemeConfig& cfg);

/// One relaxation step: extrapolate Phi, then solve the linearly implicit
/// midpoint system. Returns the new field and the advanced Phi state.
std::pair<Field, RelaxState> relaxation_step(const Field& x, const RelaxState& relax,
                                             const std::array<double, 3>& chi,
                                             const SchemeConfig& cfg);

/// Linear half of the split-step scheme: midpoint solve mode by mode in
/// Fourier space with multipliers built from h_k = pi k / a. Requires the
/// interior point count to be a power of two. Sign conventions are pinned
/// by the gamma = 0 reduction: each mode must advance by the Cayley factor
/// (1 - i dt h^2/2) / (1 + i dt h^2/2) of the free equation.
Field splitstep_linear_substep(const Field& x, const std::array<double, 3>& chi,
                               const SchemeConfig& cfg);

/// Full split-step update: linear substep, then the exact nodewise phase
/// rotation X_j = exp(i |Y_j|^2 dt) Y_j.
Field splitstep_step(const Field& x, const std::array<double, 3>& chi,
                     const SchemeConfig& cfg);

/// Explicit Euler discretization of the Ito form, the non-conservative
/// contrast baseline. Throws StepError(Overflow) past the norm cap.
Field euler_ito_step(const Field& x, const std::array<double, 3>& chi,
                     const SchemeConfig& cfg);

struct StepObservation {
    int step = 0;
    double t = 0.0;
    double mass = 0.0;
    double h1 = 0.0;
    const Field* snapshot = nullptr;  // non-null every snapshot_cadence steps
};

using StepObserver = std::function<void(const StepObservation&)>;

struct StepDiagnostics {
    double t = 0.0;
    double mass = 0.0;
    double h1 = 0.0;
};

/// Per-run provenance and diagnostics. Serializing without timings is
/// byte-reproducible from (config, seed).
struct RunRecord {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string generator_name;
    SchemeKind scheme = SchemeKind::CrankNicolson;
    std::vector<StepDiagnostics> steps;  // entry 0 is the initial state
    RunStatus status = RunStatus::Completed;
    int failed_step = -1;
    double wall_seconds = 0.0;

    // Final errors against a reference, filled by the harness when one exists.
    double err_l2 = -1.0;
    double err_linf = -1.0;
    double err_h1max = -1.0;

    double final_time() const { return steps.empty() ? 0.0 : steps.back().t; }
};

std::string serialize_run_record(const RunRecord& rec, bool include_timing = false);

/// Step the configured scheme across the whole path, recording mass and
/// H^1 per step and invoking observers after each accepted step. Step
/// failures end the run early and are recorded, not rethrown.
RunRecord evolve(const Field& x0, const BrownianPath& path, const SchemeConfig& cfg,
                 const std::vector<StepObserver>& observers = {});

}  // namespace manakov
