#include "manakov/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "manakov/csv.hpp"

namespace manakov {

const char* to_string(NormKind k) {
    switch (k) {
        case NormKind::L2rel: return "L2rel";
        case NormKind::LInfRel: return "LInfRel";
        case NormKind::H1: return "H1";
    }
    return "unknown";
}

NormKind norm_kind_from_string(const std::string& name) {
    if (name == "L2rel") return NormKind::L2rel;
    if (name == "LInfRel") return NormKind::LInfRel;
    if (name == "H1") return NormKind::H1;
    throw std::invalid_argument("unknown norm kind: " + name);
}

double relative_error(const Field& approx, const Field& reference, ErrorNorm p,
                      double denom_norm) {
    if (!(approx.grid == reference.grid))
        throw std::invalid_argument("relative_error: grid mismatch");
    if (!(denom_norm > 0.0))
        throw std::invalid_argument("relative_error: zero denominator norm");
    Field diff(approx.grid);
    for (std::size_t j = 0; j < diff.values.size(); ++j)
        diff.values[j] = approx.values[j] - reference.values[j];
    const double num = (p == ErrorNorm::L2) ? l2_norm(diff) : linf_norm(diff);
    return num / denom_norm;
}

double relative_error(const Field& approx, const Field& reference, ErrorNorm p) {
    const double denom = (p == ErrorNorm::L2) ? l2_norm(reference) : linf_norm(reference);
    return relative_error(approx, reference, p, denom);
}

double mass_drift(const RunRecord& record) {
    if (record.steps.empty()) throw std::invalid_argument("mass_drift: empty mass series");
    const double m0 = record.steps.front().mass;
    if (m0 == 0.0) return 0.0;
    double drift = 0.0;
    for (const StepDiagnostics& s : record.steps)
        drift = std::max(drift, std::abs((s.mass - m0) / m0));
    return drift;
}

void ErrorSeries::validate() const {
    if (dts.size() != errors.size() || dts.size() < 2)
        throw std::invalid_argument("ErrorSeries: need >= 2 aligned (dt, err) pairs");
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (!(dts[i] < dts[i - 1]))
            throw std::invalid_argument("ErrorSeries: dts must be strictly decreasing");
}

OrderFit fit_order(const ErrorSeries& series) {
    series.validate();
    const std::size_t n = series.dts.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(series.errors[i] > 0.0))
            throw std::invalid_argument("fit_order: errors must be > 0");
        lx[i] = std::log(series.dts[i]);
        ly[i] = std::log(series.errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i)
        fit.residual = std::max(fit.residual,
                                std::abs(ly[i] - (fit.slope * lx[i] + fit.intercept)));
    return fit;
}

void write_error_series_csv(const ErrorSeries& series, const OrderFit& fit,
                            const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_error_series_csv: cannot open " + path);
    out << "dt,err,norm_kind\n";
    for (std::size_t i = 0; i < series.dts.size(); ++i)
        out << csv::num(series.dts[i]) << ',' << csv::num(series.errors[i]) << ','
            << to_string(series.norm_kind) << '\n';
    out << "# slope=" << csv::num(fit.slope) << '\n';
    out << "# intercept=" << csv::num(fit.intercept) << '\n';
    out << "# residual=" << csv::num(fit.residual) << '\n';
}

}  // namespace manakov
