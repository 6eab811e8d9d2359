#pragma once

#include "fceval/series.hpp"

#include <Eigen/Core>

namespace fceval {

// Alignment convention used throughout: a forecast built from information up
// to and including time t sits in slot t of the returned Series and is
// evaluated against the outcome y_{t+1}. Only origins whose target outcome
// exists in y are produced.

/// Regressor rows indexed by time: row i holds X_{start_index + i}.
struct Regressors {
    Eigen::MatrixXd values;
    long start_index = 0;

    Eigen::Index columns() const { return values.cols(); }
    long last_index() const { return start_index + static_cast<long>(values.rows()) - 1; }
    auto row_at(long t) const { return values.row(t - start_index); }
};

struct WindowScheme {
    enum class Kind { rolling, expanding };

    Kind kind = Kind::rolling;
    /// Rolling: number of observations (or regression pairs) in every window.
    /// Expanding: number in the first window; later windows keep every
    /// earlier observation.
    long m = 1;

    static WindowScheme rolling(long m) { return {Kind::rolling, m}; }
    static WindowScheme expanding(long m) { return {Kind::expanding, m}; }
};

/// Mean of the most recent m observations, f_t = m^{-1} sum_{s=t-m+1}^{t} y_s.
Series rolling_mean_forecasts(const Series& y, long m);

/// Mean of every observation up to t, f_t = t^{-1} sum_{s=1}^{t} y_s, for
/// origins holding at least m0 observations. Here t counts observations,
/// which coincides with the time index when y starts at index 1.
Series expanding_mean_forecasts(const Series& y, long m0);

/// Least-squares forecasts f_t = X_t' beta_t, where beta_t regresses
/// y_{s+1} on X_s over the pairs in the window ending at s = t - 1.
///
/// Throws RankDeficiencyError naming the origin whose window design matrix
/// is not of full column rank; no pseudo-inverse fallback.
Series ols_forecasts(const Series& y, const Regressors& x, WindowScheme scheme);

inline Series rolling_ols_forecasts(const Series& y, const Regressors& x, long m) {
    return ols_forecasts(y, x, WindowScheme::rolling(m));
}

struct DeterministicRule {
    enum class Kind { constant, inverse_sqrt_t };

    Kind kind = Kind::constant;
    double value = 0.0;

    static DeterministicRule constant(double c) { return {Kind::constant, c}; }
    static DeterministicRule inverse_sqrt_t() { return {Kind::inverse_sqrt_t, 0.0}; }
};

/// Forecasts that ignore the data: f_t = c, or f_t = t^{-1/2}, for t in [first, last].
Series deterministic_sequence_forecasts(DeterministicRule rule, long first, long last);

}  // namespace fceval
