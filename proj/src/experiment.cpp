#include "manakov/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "manakov/csv.hpp"

namespace manakov {

SchemeConfig ExperimentConfig::scheme_config(SchemeKind scheme, double dt) const {
    SchemeConfig sc;
    sc.scheme = scheme;
    sc.dt = dt;
    sc.gamma = gamma;
    sc.grid = grid();
    sc.nl_tol = nl_tol;
    sc.nl_max_iter = nl_max_iter;
    sc.guard_enabled = guard_enabled;
    sc.guard_radius = guard_radius;
    sc.guard_c2 = guard_c2;
    sc.overflow_cap = overflow_cap;
    sc.snapshot_cadence = snapshot_cadence;
    return sc;
}

void ExperimentConfig::validate() const {
    if (schemes.empty()) throw std::invalid_argument("config: schemes must not be empty");
    if (!(a > 0.0)) throw std::invalid_argument("config: a must be > 0");
    if (m < 2) throw std::invalid_argument("config: m must be >= 2");
    if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
    if (n_coarse < 1) throw std::invalid_argument("config: n_coarse must be >= 1");
    if (levels < 0) throw std::invalid_argument("config: levels must be >= 0");
    if (levels > 24) throw std::invalid_argument("config: levels too large");
    if (gamma < 0.0) throw std::invalid_argument("config: gamma must be >= 0");
    if (seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
    if (norms.empty()) throw std::invalid_argument("config: norms must not be empty");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (comparison_n < 0) throw std::invalid_argument("config: comparison_n must be >= 0");
    if (comparison_n > 0 && n_fine() % comparison_n != 0)
        throw std::invalid_argument("config: comparison_n must divide the fine step count");
    soliton.validate();
    scheme_config(schemes.front(), horizon / n_fine()).validate();
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config field '" + key + "': not a number: " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("config field '" + key + "': trailing junk: " + value);
    return x;
}

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config field '" + key + "': not an integer: " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("config field '" + key + "': trailing junk: " + value);
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        x = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config field '" + key +
                                    "': not an unsigned integer: " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("config field '" + key + "': trailing junk: " + value);
    return x;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        auto trim = [](std::string s) {
            const auto x = s.find_first_not_of(" \t\r");
            const auto y = s.find_last_not_of(" \t\r");
            return x == std::string::npos ? std::string{} : s.substr(x, y - x + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("config field '" + key + "': duplicated");
    }

    ExperimentConfig cfg;
    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument("config field '" + std::string(key) + "': missing");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_opt = [&](const char* key, const std::string& fallback) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    for (const std::string& name : split_list(take("schemes")))
        cfg.schemes.push_back(scheme_from_string(name));
    cfg.a = parse_double("a", take("a"));
    cfg.m = static_cast<int>(parse_int("m", take("m")));
    cfg.horizon = parse_double("horizon", take("horizon"));
    cfg.n_coarse = static_cast<int>(parse_int("n_coarse", take("n_coarse")));
    cfg.levels = static_cast<int>(parse_int("levels", take("levels")));
    cfg.gamma = parse_double("gamma", take("gamma"));
    for (const std::string& s : split_list(take("seeds")))
        cfg.seeds.push_back(parse_u64("seeds", s));

    const SolitonParams defaults;
    cfg.soliton.theta = parse_double("soliton.theta", take_opt("soliton.theta", "0"));
    cfg.soliton.phi1 = parse_double("soliton.phi1", take_opt("soliton.phi1", "0"));
    cfg.soliton.phi2 = parse_double("soliton.phi2", take_opt("soliton.phi2", "0"));
    cfg.soliton.eta =
        parse_double("soliton.eta", take_opt("soliton.eta", csv::num(defaults.eta)));
    cfg.soliton.k = parse_double("soliton.k", take_opt("soliton.k", "0"));
    cfg.soliton.tau0 = parse_double("soliton.tau0", take_opt("soliton.tau0", "0"));
    cfg.soliton.alpha0 = parse_double("soliton.alpha0", take_opt("soliton.alpha0", "0"));

    cfg.norms.clear();
    for (const std::string& s : split_list(take_opt("norms", "L2rel,LInfRel,H1")))
        cfg.norms.push_back(norm_kind_from_string(s));
    cfg.out_dir = take_opt("out_dir", "out");
    cfg.nl_tol = parse_double("nl_tol", take_opt("nl_tol", "1e-12"));
    cfg.nl_max_iter = static_cast<int>(parse_int("nl_max_iter", take_opt("nl_max_iter", "50")));
    cfg.snapshot_cadence =
        static_cast<int>(parse_int("snapshot_cadence", take_opt("snapshot_cadence", "0")));
    cfg.workers = static_cast<int>(parse_int("workers", take_opt("workers", "1")));
    cfg.timeseries = parse_int("timeseries", take_opt("timeseries", "0")) != 0;
    cfg.comparison_n =
        static_cast<int>(parse_int("comparison_n", take_opt("comparison_n", "0")));
    cfg.overflow_cap = parse_double("overflow_cap", take_opt("overflow_cap", "1e6"));
    cfg.guard_enabled = parse_int("guard_enabled", take_opt("guard_enabled", "0")) != 0;
    cfg.guard_radius = parse_double("guard_radius", take_opt("guard_radius", "0"));
    cfg.guard_c2 = parse_double("guard_c2", take_opt("guard_c2", "1"));

    if (!kv.empty())
        throw std::invalid_argument("config field '" + kv.begin()->first + "': unknown key");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "schemes = ";
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
        o << (i ? "," : "") << to_string(cfg.schemes[i]);
    o << "\na = " << csv::num(cfg.a) << "\nm = " << cfg.m
      << "\nhorizon = " << csv::num(cfg.horizon) << "\nn_coarse = " << cfg.n_coarse
      << "\nlevels = " << cfg.levels << "\ngamma = " << csv::num(cfg.gamma) << "\nseeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        o << (i ? "," : "") << cfg.seeds[i];
    o << "\nsoliton.theta = " << csv::num(cfg.soliton.theta)
      << "\nsoliton.phi1 = " << csv::num(cfg.soliton.phi1)
      << "\nsoliton.phi2 = " << csv::num(cfg.soliton.phi2)
      << "\nsoliton.eta = " << csv::num(cfg.soliton.eta)
      << "\nsoliton.k = " << csv::num(cfg.soliton.k)
      << "\nsoliton.tau0 = " << csv::num(cfg.soliton.tau0)
      << "\nsoliton.alpha0 = " << csv::num(cfg.soliton.alpha0) << "\nnorms = ";
    for (std::size_t i = 0; i < cfg.norms.size(); ++i)
        o << (i ? "," : "") << to_string(cfg.norms[i]);
    o << "\nout_dir = " << cfg.out_dir << "\nnl_tol = " << csv::num(cfg.nl_tol)
      << "\nnl_max_iter = " << cfg.nl_max_iter
      << "\nsnapshot_cadence = " << cfg.snapshot_cadence << "\nworkers = " << cfg.workers
      << "\ntimeseries = " << (cfg.timeseries ? 1 : 0)
      << "\ncomparison_n = " << cfg.comparison_n
      << "\noverflow_cap = " << csv::num(cfg.overflow_cap)
      << "\nguard_enabled = " << (cfg.guard_enabled ? 1 : 0)
      << "\nguard_radius = " << csv::num(cfg.guard_radius)
      << "\nguard_c2 = " << csv::num(cfg.guard_c2) << '\n';
    return o.str();
}

void parallel_for(int n_tasks, int workers, const std::function<void(int)>& task) {
    workers = std::min(workers, n_tasks);
    if (workers <= 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n_tasks) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string hash_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

/// Run one path and keep the states at the coarsest-ladder comb: entry c is
/// the state after c * (n_steps / comb_points) steps, entry 0 the input.
struct CombRun {
    RunRecord rec;
    std::vector<Field> comb;
};

CombRun run_with_comb(const Field& x0, const BrownianPath& path, SchemeConfig cfg,
                      int comb_points) {
    cfg.snapshot_cadence = path.n_steps() / comb_points;
    CombRun out;
    out.comb.reserve(comb_points + 1);
    out.comb.push_back(x0);
    const StepObserver collect = [&](const StepObservation& o) {
        if (o.snapshot != nullptr) out.comb.push_back(*o.snapshot);
    };
    out.rec = evolve(x0, path, cfg, {collect});
    return out;
}

}  // namespace

StudyReport run_convergence_study(const ExperimentConfig& cfg) {
    cfg.validate();
    StudyReport report;
    report.config_hash = hash_hex(serialize_config(cfg));

    const Grid1D grid = cfg.grid();
    const Field x0 = soliton_field(0.0, grid, cfg.soliton);
    const double denom_l2 = l2_norm(x0);
    const double denom_linf = linf_norm(x0);
    const int k_levels = cfg.levels;
    const int n_fine = cfg.n_fine();
    const double dt_fine = cfg.horizon / n_fine;
    const int n_seeds = static_cast<int>(cfg.seeds.size());
    const int n_schemes = static_cast<int>(cfg.schemes.size());

    // One task per (scheme, seed); each fills its own row slice.
    std::vector<std::vector<ConvergenceRow>> rows(
        static_cast<std::size_t>(n_schemes) * n_seeds);
    parallel_for(n_schemes * n_seeds, cfg.workers, [&](int task) {
        const SchemeKind scheme = cfg.schemes[task / n_seeds];
        const std::uint64_t seed = cfg.seeds[task % n_seeds];
        std::vector<ConvergenceRow>& out = rows[task];

        const BrownianPath fine = sample_path(seed, n_fine, dt_fine);
        const CombRun ref = run_with_comb(x0, fine, cfg.scheme_config(scheme, dt_fine),
                                          cfg.n_coarse);
        const bool ref_ok = ref.rec.status == RunStatus::Completed;

        for (int level = 0; level < k_levels; ++level) {
            const int n_level = cfg.n_coarse << level;
            const BrownianPath coarse = coarsen(fine, 1 << (k_levels - level));
            const double dt = cfg.horizon / n_level;
            const CombRun run = run_with_comb(x0, coarse, cfg.scheme_config(scheme, dt),
                                              cfg.n_coarse);
            ConvergenceRow row;
            row.seed = seed;
            row.level = level;
            row.dt = dt;
            row.status = run.rec.status;
            if (ref_ok && run.rec.status == RunStatus::Completed) {
                row.err_l2 = relative_error(run.comb.back(), ref.comb.back(), ErrorNorm::L2,
                                            denom_l2);
                row.err_linf = relative_error(run.comb.back(), ref.comb.back(),
                                              ErrorNorm::LInf, denom_linf);
                double h1max = 0.0;
                for (std::size_t c = 0; c < run.comb.size(); ++c) {
                    Field diff(grid);
                    for (std::size_t j = 0; j < diff.values.size(); ++j)
                        diff.values[j] = run.comb[c].values[j] - ref.comb[c].values[j];
                    h1max = std::max(h1max, discrete_h1_norm(diff));
                }
                row.err_h1max = h1max;
            } else {
                row.err_l2 = row.err_linf = row.err_h1max = std::nan("");
            }
            out.push_back(row);
        }
        ConvergenceRow self;
        self.seed = seed;
        self.level = k_levels;
        self.dt = dt_fine;
        self.status = ref.rec.status;
        self.err_l2 = self.err_linf = self.err_h1max = 0.0;
        out.push_back(self);
    });

    for (int s = 0; s < n_schemes; ++s) {
        SchemeStudy study;
        study.scheme = cfg.schemes[s];
        for (int i = 0; i < n_seeds; ++i)
            for (const ConvergenceRow& row : rows[static_cast<std::size_t>(s) * n_seeds + i])
                study.rows.push_back(row);
        std::sort(study.rows.begin(), study.rows.end(),
                  [](const ConvergenceRow& u, const ConvergenceRow& v) {
                      return u.seed != v.seed ? u.seed < v.seed : u.level < v.level;
                  });

        for (int level = 0; level < k_levels; ++level) {
            double sum_l2 = 0.0, sum_linf = 0.0, sum_h1 = 0.0;
            int count = 0;
            for (const ConvergenceRow& row : study.rows) {
                if (row.level != level) continue;
                if (row.status != RunStatus::Completed || !std::isfinite(row.err_l2)) {
                    ++study.excluded_runs;
                    continue;
                }
                sum_l2 += row.err_l2;
                sum_linf += row.err_linf;
                sum_h1 += row.err_h1max;
                ++count;
            }
            if (count == 0) continue;
            study.dts.push_back(cfg.horizon / (cfg.n_coarse << level));
            study.mean_err_l2.push_back(sum_l2 / count);
            study.mean_err_linf.push_back(sum_linf / count);
            study.mean_err_h1max.push_back(sum_h1 / count);
        }
        // Levels were pushed coarse to fine, so dts are strictly decreasing
        // as ErrorSeries expects.
        auto fit_of = [&](const std::vector<double>& errs) {
            OrderFit fit;
            if (study.dts.size() < 2) return fit;
            for (double e : errs)
                if (!(e > 0.0)) return fit;
            ErrorSeries series;
            series.dts = study.dts;
            series.errors = errs;
            return fit_order(series);
        };
        study.fit_l2 = fit_of(study.mean_err_l2);
        study.fit_linf = fit_of(study.mean_err_linf);
        study.fit_h1max = fit_of(study.mean_err_h1max);
        report.studies.push_back(std::move(study));
    }
    return report;
}

ComparisonReport run_scheme_comparison(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.schemes.size() < 2)
        throw std::invalid_argument("run_scheme_comparison: need at least two schemes");

    ComparisonReport report;
    report.config_hash = hash_hex(serialize_config(cfg));
    report.seed = cfg.seeds.front();
    const int n_fine = cfg.n_fine();
    const int n_cmp = cfg.comparison_n > 0 ? cfg.comparison_n : n_fine;
    const double dt_fine = cfg.horizon / n_fine;
    report.dt = cfg.horizon / n_cmp;

    const Grid1D grid = cfg.grid();
    const Field x0 = soliton_field(0.0, grid, cfg.soliton);
    const double denom_l2 = l2_norm(x0);
    const double denom_linf = linf_norm(x0);

    const BrownianPath fine = sample_path(report.seed, n_fine, dt_fine);
    const CombRun ref =
        run_with_comb(x0, fine, cfg.scheme_config(SchemeKind::CrankNicolson, dt_fine), 1);
    if (ref.rec.status != RunStatus::Completed)
        throw std::runtime_error("run_scheme_comparison: reference run failed: " +
                                 std::string(to_string(ref.rec.status)));
    const BrownianPath cmp_path = coarsen(fine, n_fine / n_cmp);

    std::vector<SchemeKind> order = cfg.schemes;
    std::sort(order.begin(), order.end(), [](SchemeKind u, SchemeKind v) {
        return std::string(to_string(u)) < std::string(to_string(v));
    });
    order.erase(std::unique(order.begin(), order.end()), order.end());

    for (SchemeKind scheme : order) {
        const CombRun run = run_with_comb(x0, cmp_path, cfg.scheme_config(scheme, report.dt), 1);
        ComparisonRow row;
        row.scheme = scheme;
        row.status = run.rec.status;
        row.mass_drift = mass_drift(run.rec);
        row.wall_seconds = run.rec.wall_seconds;
        if (run.rec.status == RunStatus::Completed) {
            row.err2 = relative_error(run.comb.back(), ref.comb.back(), ErrorNorm::L2, denom_l2);
            row.err_inf =
                relative_error(run.comb.back(), ref.comb.back(), ErrorNorm::LInf, denom_linf);
        } else {
            row.err2 = row.err_inf = std::nan("");
        }
        row.record = run.rec;
        row.record.err_l2 = row.err2;
        row.record.err_linf = row.err_inf;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<std::string> emit_csv(const StudyReport& report, const ExperimentConfig& cfg,
                                  const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    for (const SchemeStudy& study : report.studies) {
        const std::string path =
            dir + "/convergence_" + to_string(study.scheme) + ".csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
        out << "seed,level,dt,err_L2,err_Linf,err_H1max,status\n";
        for (const ConvergenceRow& row : study.rows)
            out << row.seed << ',' << row.level << ',' << csv::num(row.dt) << ','
                << csv::num(row.err_l2) << ',' << csv::num(row.err_linf) << ','
                << csv::num(row.err_h1max) << ',' << to_string(row.status) << '\n';
        written.push_back(path);

        if (study.dts.size() < 2) continue;
        for (NormKind norm : cfg.norms) {
            ErrorSeries series;
            series.norm_kind = norm;
            series.dts = study.dts;
            series.errors = norm == NormKind::L2rel     ? study.mean_err_l2
                            : norm == NormKind::LInfRel ? study.mean_err_linf
                                                        : study.mean_err_h1max;
            bool positive = true;
            for (double e : series.errors) positive = positive && e > 0.0;
            if (!positive) continue;
            const OrderFit fit = norm == NormKind::L2rel     ? study.fit_l2
                                 : norm == NormKind::LInfRel ? study.fit_linf
                                                             : study.fit_h1max;
            const std::string spath = dir + "/order_" + to_string(study.scheme) + "_" +
                                      to_string(norm) + ".csv";
            write_error_series_csv(series, fit, spath);
            written.push_back(spath);
        }
    }
    return written;
}

std::vector<std::string> emit_csv(const ComparisonReport& report, const ExperimentConfig& cfg,
                                  const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    const std::string path = dir + "/comparison.csv";
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
        out << "scheme,err2,errInf,massDrift,wallSeconds\n";
        for (const ComparisonRow& row : report.rows)
            out << to_string(row.scheme) << ',' << csv::num(row.err2) << ','
                << csv::num(row.err_inf) << ',' << csv::num(row.mass_drift) << ','
                << csv::num(row.wall_seconds) << '\n';
        written.push_back(path);
    }
    if (cfg.timeseries) {
        for (const ComparisonRow& row : report.rows) {
            const std::string tpath =
                dir + "/timeseries_" + to_string(row.scheme) + ".csv";
            std::ofstream out(tpath, std::ios::binary);
            if (!out) throw std::runtime_error("emit_csv: cannot open " + tpath);
            out << "n,t,mass,h1\n";
            for (std::size_t n = 0; n < row.record.steps.size(); ++n)
                out << n << ',' << csv::num(row.record.steps[n].t) << ','
                    << csv::num(row.record.steps[n].mass) << ','
                    << csv::num(row.record.steps[n].h1) << '\n';
            written.push_back(tpath);
        }
    }
    return written;
}

}  // namespace manakov
