#pragma once

#include <string>
#include <vector>

#include "manakov/field.hpp"
#include "manakov/schemes.hpp"

namespace manakov {

enum class NormKind { L2rel, LInfRel, H1 };

const char* to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& name);

enum class ErrorNorm { L2, LInf };

/// err_p = ||approx - reference||_p / denom_norm, with the caller supplying
/// the initial-data norm as the denominator. Rejects a zero denominator.
double relative_error(const Field& approx, const Field& reference, ErrorNorm p,
                      double denom_norm);

/// Convenience overload normalizing by the reference's own norm (equal to
/// the initial-data norm in L^2 whenever the scheme conserves mass).
double relative_error(const Field& approx, const Field& reference, ErrorNorm p);

/// max_n |(mass_n - mass_0) / mass_0| over the recorded series.
double mass_drift(const RunRecord& record);

/// Errors of one scheme across a strictly decreasing time-step ladder.
struct ErrorSeries {
    std::vector<double> dts;
    std::vector<double> errors;
    NormKind norm_kind = NormKind::L2rel;

    void validate() const;
};

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |log err - fit| over the points
};

/// Least-squares line through (log dt, log err). Every error must be > 0.
OrderFit fit_order(const ErrorSeries& series);

/// CSV columns dt, err, norm_kind with the fit appended as comment rows.
void write_error_series_csv(const ErrorSeries& series, const OrderFit& fit,
                            const std::string& path);

}  // namespace manakov
