#pragma once

#include <vector>

#include "manakov/metrics.hpp"
#include "manakov/schemes.hpp"
#include "manakov/soliton.hpp"

namespace manakov {

/// Deterministic (gamma = 0) validation of the schemes against the exact
/// soliton: run every requested scheme to time T for each step count and
/// compare the final state with the closed form.
struct DeterministicCheck {
    SchemeKind scheme = SchemeKind::CrankNicolson;
    std::vector<double> dts;
    std::vector<double> errors_l2;     // relative, normalized by the initial norm
    double slope = 0.0;                // fitted log-log order
    double peak_drift = 0.0;           // |final peak x - initial peak x|
    RunStatus status = RunStatus::Completed;
};

struct DeterministicReport {
    std::vector<DeterministicCheck> checks;
};

/// cfg supplies the grid and solver controls; cfg.gamma must be 0 and
/// cfg.dt is taken from the resolutions list run by run. The same noise-free
/// path drives every level (all chi draws are irrelevant at gamma = 0).
DeterministicReport validate_deterministic(const SchemeConfig& cfg,
                                           const std::vector<SchemeKind>& schemes,
                                           const SolitonParams& params, double horizon,
                                           const std::vector<int>& step_counts);

}  // namespace manakov
