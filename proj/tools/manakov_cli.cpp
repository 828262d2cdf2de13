// Command-line driver: convergence studies, scheme comparisons, the
// deterministic soliton check, and Brownian path dumps.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "manakov/csv.hpp"
#include "manakov/experiment.hpp"
#include "manakov/validate.hpp"

using namespace manakov;

namespace {

constexpr const char* kOutDirEnv = "MANAKOV_OUT_DIR";

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string scheme;
};

/// Apply --override key=value pairs (plus --seed/--scheme shorthands) at the
/// grammar level so every override passes the same validation as the file.
ExperimentConfig load_with_overrides(const CommonOptions& opt) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + opt.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();

    std::vector<std::string> overrides = opt.overrides;
    if (opt.seed_set) overrides.push_back("seeds=" + std::to_string(opt.seed));
    if (!opt.scheme.empty()) overrides.push_back("schemes=" + opt.scheme);
    if (!opt.out_dir.empty()) {
        overrides.push_back("out_dir=" + opt.out_dir);
    } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        overrides.push_back("out_dir=" + std::string(env));
    }

    std::string text = buf.str();
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("override must look like key=value: " + ov);
        const std::string key = ov.substr(0, eq);
        // Drop any existing assignment of the key, then append the override.
        std::istringstream lines(text);
        std::ostringstream kept;
        std::string line;
        while (std::getline(lines, line)) {
            std::string stripped = line.substr(0, line.find('#'));
            const auto line_eq = stripped.find('=');
            bool matches = false;
            if (line_eq != std::string::npos) {
                std::string k = stripped.substr(0, line_eq);
                k.erase(0, k.find_first_not_of(" \t"));
                k.erase(k.find_last_not_of(" \t") + 1);
                matches = (k == key);
            }
            if (!matches) kept << line << '\n';
        }
        kept << key << " = " << ov.substr(eq + 1) << '\n';
        text = kept.str();
    }
    return parse_config_text(text, opt.config_path);
}

void write_study_summary(const StudyReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/study_summary.txt", std::ios::binary);
    out << "config_hash " << report.config_hash << '\n';
    for (const SchemeStudy& s : report.studies) {
        out << "scheme " << to_string(s.scheme) << " excluded_runs " << s.excluded_runs
            << '\n';
        if (s.dts.size() >= 2) {
            out << "  slope_L2 " << csv::num(s.fit_l2.slope) << " residual "
                << csv::num(s.fit_l2.residual) << '\n';
            out << "  slope_LInf " << csv::num(s.fit_linf.slope) << " residual "
                << csv::num(s.fit_linf.residual) << '\n';
            out << "  slope_H1max " << csv::num(s.fit_h1max.slope) << " residual "
                << csv::num(s.fit_h1max.residual) << '\n';
        }
    }
}

int run_converge(const CommonOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const StudyReport report = run_convergence_study(cfg);
    emit_csv(report, cfg, cfg.out_dir);
    write_study_summary(report, cfg.out_dir);
    bool reference_failed = false;
    for (const SchemeStudy& s : report.studies) {
        std::printf("scheme %-10s", to_string(s.scheme));
        if (s.dts.size() >= 2)
            std::printf(" slope_L2 % .4f residual %.4f", s.fit_l2.slope, s.fit_l2.residual);
        std::printf(" excluded %d\n", s.excluded_runs);
        for (const ConvergenceRow& row : s.rows)
            if (row.level == cfg.levels && row.status != RunStatus::Completed)
                reference_failed = true;
    }
    std::printf("wrote %s\n", cfg.out_dir.c_str());
    return reference_failed ? 2 : 0;
}

int run_compare(const CommonOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const ComparisonReport report = run_scheme_comparison(cfg);
    emit_csv(report, cfg, cfg.out_dir);
    std::printf("%-12s %-12s %-12s %-12s %-10s %s\n", "scheme", "err2", "errInf", "massDrift",
                "wall[s]", "status");
    for (const ComparisonRow& row : report.rows)
        std::printf("%-12s %-12.4e %-12.4e %-12.4e %-10.3f %s\n", to_string(row.scheme),
                    row.err2, row.err_inf, row.mass_drift, row.wall_seconds,
                    to_string(row.status));
    std::printf("wrote %s\n", cfg.out_dir.c_str());
    return 0;
}

int run_soliton_check(const CommonOptions& opt, std::vector<int> steps) {
    ExperimentConfig cfg = load_with_overrides(opt);
    SchemeConfig sc = cfg.scheme_config(cfg.schemes.front(), cfg.horizon / steps.front());
    sc.gamma = 0.0;
    const DeterministicReport report =
        validate_deterministic(sc, cfg.schemes, cfg.soliton, cfg.horizon, steps);

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/soliton.csv", std::ios::binary);
    out << "scheme,dt,errL2\n";
    bool failed = false;
    for (const DeterministicCheck& check : report.checks) {
        for (std::size_t i = 0; i < check.dts.size(); ++i)
            out << to_string(check.scheme) << ',' << csv::num(check.dts[i]) << ','
                << csv::num(check.errors_l2[i]) << '\n';
        out << "# scheme=" << to_string(check.scheme) << " slope=" << csv::num(check.slope)
            << " peak_drift=" << csv::num(check.peak_drift)
            << " status=" << to_string(check.status) << '\n';
        std::printf("scheme %-10s slope % .3f peak_drift %.3e status %s\n",
                    to_string(check.scheme), check.slope, check.peak_drift,
                    to_string(check.status));
        failed = failed || check.status != RunStatus::Completed;
    }
    std::printf("wrote %s/soliton.csv\n", cfg.out_dir.c_str());
    return failed ? 2 : 0;
}

int run_path_dump(std::uint64_t seed, int steps, double dt, const std::string& file) {
    write_path_binary(sample_path(seed, steps, dt), file);
    std::printf("wrote %s (%d steps)\n", file.c_str(), steps);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Manakov solver suite"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::vector<int> soliton_steps{64, 128, 256};
    std::uint64_t dump_seed = 1;
    int dump_steps = 1024;
    double dump_dt = 1e-3;
    std::string dump_file = "path.bin";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "experiment config file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (overrides config/env)");
        sub->add_option("--override", opt.overrides, "key=value config override")
            ->take_all();
        sub->add_option("--seed", opt.seed, "replace the seed list with one seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--scheme", opt.scheme, "replace the scheme set");
    };

    CLI::App* converge = app.add_subcommand("converge", "strong-order convergence study");
    add_common(converge);
    CLI::App* compare = app.add_subcommand("compare", "scheme comparison at one step size");
    add_common(compare);
    CLI::App* soliton = app.add_subcommand("soliton-check",
                                           "deterministic check against the exact soliton");
    add_common(soliton);
    soliton->add_option("--steps", soliton_steps, "step-count ladder")->take_all();
    CLI::App* dump = app.add_subcommand("path-dump", "write a sampled Brownian path");
    dump->add_option("--seed", dump_seed, "path seed");
    dump->add_option("--steps", dump_steps, "number of increments");
    dump->add_option("--dt", dump_dt, "increment size");
    dump->add_option("--out", dump_file, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (converge->parsed()) return run_converge(opt);
        if (compare->parsed()) return run_compare(opt);
        if (soliton->parsed()) return run_soliton_check(opt, soliton_steps);
        if (dump->parsed()) return run_path_dump(dump_seed, dump_steps, dump_dt, dump_file);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 2;
    }
    return 0;
}
