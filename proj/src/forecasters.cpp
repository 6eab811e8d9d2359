#include "fceval/forecasters.hpp"

#include "fceval/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>

namespace fceval {

Series rolling_mean_forecasts(const Series& y, long m) {
    const long T = static_cast<long>(y.size());
    if (m < 1) throw DomainError("rolling window must hold at least one observation");
    if (m >= T) {
        throw InsufficientDataError("rolling window of " + std::to_string(m) + " needs more than " +
                                    std::to_string(T) + " observations");
    }
    const Eigen::VectorXd& v = y.values();
    Eigen::VectorXd out(T - m);
    double sum = v.head(m).sum();
    out[0] = sum / static_cast<double>(m);
    for (long i = 1; i < T - m; ++i) {
        sum += v[m - 1 + i] - v[i - 1];
        out[i] = sum / static_cast<double>(m);
    }
    return Series(std::move(out), y.start_index() + m - 1);
}

Series expanding_mean_forecasts(const Series& y, long m0) {
    const long T = static_cast<long>(y.size());
    if (m0 < 1) throw DomainError("first expanding origin must hold at least one observation");
    if (m0 >= T) {
        throw InsufficientDataError("expanding window starting at " + std::to_string(m0) + " needs more than " +
                                    std::to_string(T) + " observations");
    }
    const Eigen::VectorXd& v = y.values();
    Eigen::VectorXd out(T - m0);
    double sum = v.head(m0).sum();
    for (long i = 0; i < T - m0; ++i) {
        if (i > 0) sum += v[m0 - 1 + i];
        out[i] = sum / static_cast<double>(m0 + i);
    }
    return Series(std::move(out), y.start_index() + m0 - 1);
}

Series ols_forecasts(const Series& y, const Regressors& x, WindowScheme scheme) {
    const Eigen::Index k = x.columns();
    if (k < 1) throw DomainError("regressor matrix has no columns");
    if (scheme.m < k) {
        throw DomainError("window of " + std::to_string(scheme.m) + " pairs cannot identify " + std::to_string(k) +
                          " coefficients");
    }

    // Regression pairs (X_s, y_{s+1}) exist for s in [first_pair, ...].
    const long first_pair = std::max(x.start_index, y.start_index() - 1);
    const long first_origin = first_pair + scheme.m;
    // Origin t needs X_t and an outcome y_{t+1}.
    const long last_origin = std::min(x.last_index(), y.last_index() - 1);
    if (first_origin > last_origin) {
        throw InsufficientDataError("no forecast origin has a full estimation window of " + std::to_string(scheme.m) +
                                    " pairs");
    }

    Eigen::VectorXd out(last_origin - first_origin + 1);
    for (long t = first_origin; t <= last_origin; ++t) {
        const long s0 = scheme.kind == WindowScheme::Kind::rolling ? t - scheme.m : first_pair;
        const long rows = t - s0;
        const Eigen::MatrixXd design = x.values.middleRows(s0 - x.start_index, rows);
        const Eigen::VectorXd target = y.values().segment(s0 + 1 - y.start_index(), rows);

        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < k) {
            throw RankDeficiencyError(t, "estimation window for origin " + std::to_string(t) + " has rank " +
                                             std::to_string(qr.rank()) + " < " + std::to_string(k));
        }
        const Eigen::VectorXd beta = qr.solve(target);
        out[t - first_origin] = x.row_at(t).dot(beta);
    }
    return Series(std::move(out), first_origin);
}

Series deterministic_sequence_forecasts(DeterministicRule rule, long first, long last) {
    if (last < first) throw DomainError("empty forecast origin range");
    if (rule.kind == DeterministicRule::Kind::inverse_sqrt_t && first < 1) {
        throw DomainError("t^{-1/2} forecasts need origins t >= 1");
    }
    Eigen::VectorXd out(last - first + 1);
    for (long t = first; t <= last; ++t) {
        out[t - first] = rule.kind == DeterministicRule::Kind::constant ? rule.value
                                                                         : 1.0 / std::sqrt(static_cast<double>(t));
    }
    return Series(std::move(out), first);
}

}  // namespace fceval
