#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "manakov/metrics.hpp"
#include "manakov/schemes.hpp"
#include "manakov/soliton.hpp"

namespace manakov {

/// Full description of a convergence/comparison experiment. The time-step
/// ladder is dyadic by construction: level l runs n_coarse * 2^l steps and
/// the reference level `levels` runs n_coarse * 2^levels, so every level's
/// path is an exact coarsening of the reference path.
struct ExperimentConfig {
    std::vector<SchemeKind> schemes;
    double a = 0.0;
    int m = 0;
    double horizon = 0.0;
    int n_coarse = 0;
    int levels = 0;  // K; N_fine = n_coarse * 2^K
    double gamma = 0.0;
    SolitonParams soliton;
    std::vector<std::uint64_t> seeds;
    std::vector<NormKind> norms{NormKind::L2rel, NormKind::LInfRel, NormKind::H1};
    std::string out_dir = "out";
    double nl_tol = 1e-12;
    int nl_max_iter = 50;
    int snapshot_cadence = 0;
    int workers = 1;
    bool timeseries = false;
    int comparison_n = 0;  // 0 means the fine step count
    double overflow_cap = 1e6;
    bool guard_enabled = false;
    double guard_radius = 0.0;
    double guard_c2 = 1.0;

    int n_fine() const { return n_coarse << levels; }
    Grid1D grid() const { return Grid1D(a, m); }
    SchemeConfig scheme_config(SchemeKind scheme, double dt) const;

    void validate() const;
};

/// Parse the key=value config grammar ('#' comments, blank lines ignored).
/// Missing required fields and malformed values are reported by name.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical serialization: fixed key order, round-trip stable.
std::string serialize_config(const ExperimentConfig& cfg);

struct ConvergenceRow {
    std::uint64_t seed = 0;
    int level = 0;
    double dt = 0.0;
    double err_l2 = 0.0;
    double err_linf = 0.0;
    double err_h1max = 0.0;
    RunStatus status = RunStatus::Completed;
};

struct SchemeStudy {
    SchemeKind scheme = SchemeKind::CrankNicolson;
    std::vector<ConvergenceRow> rows;  // sorted by (seed, level)
    std::vector<double> dts;           // coarse levels 0..K-1
    std::vector<double> mean_err_l2, mean_err_linf, mean_err_h1max;
    OrderFit fit_l2, fit_linf, fit_h1max;
    int excluded_runs = 0;  // runs flagged guard/nonconvergence and left out of the means
};

struct StudyReport {
    std::string config_hash;
    std::vector<SchemeStudy> studies;
};

/// One fixed Brownian path per seed drives every resolution: the reference
/// runs on the finest path and each coarser level on its exact coarsening.
/// Per-run failures are recorded in the rows, not rethrown.
StudyReport run_convergence_study(const ExperimentConfig& cfg);

struct ComparisonRow {
    SchemeKind scheme = SchemeKind::CrankNicolson;
    double err2 = 0.0;
    double err_inf = 0.0;
    double mass_drift = 0.0;
    double wall_seconds = 0.0;
    RunStatus status = RunStatus::Completed;
    RunRecord record;
};

struct ComparisonReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::vector<ComparisonRow> rows;  // sorted by scheme name
};

/// Run every configured scheme at one (seed, path, dt) against the fine
/// Crank-Nicolson reference.
ComparisonReport run_scheme_comparison(const ExperimentConfig& cfg);

/// Write the study CSVs (convergence_<scheme>.csv and one order series per
/// requested norm) into dir. Files are sorted, newline-terminated and
/// byte-stable across reruns. Returns the paths written.
std::vector<std::string> emit_csv(const StudyReport& report, const ExperimentConfig& cfg,
                                  const std::string& dir);

/// Write comparison.csv (and per-scheme timeseries when enabled).
/// Wall-clock seconds are the one non-reproducible column.
std::vector<std::string> emit_csv(const ComparisonReport& report, const ExperimentConfig& cfg,
                                  const std::string& dir);

/// Run tasks 0..n_tasks-1 on up to `workers` threads.
void parallel_for(int n_tasks, int workers, const std::function<void(int)>& task);

}  // namespace manakov
