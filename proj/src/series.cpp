#include "fceval/series.hpp"

#include "fceval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fceval {

namespace {

void require_finite(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw DomainError("non-finite value at position " + std::to_string(i));
        }
    }
}

}  // namespace

Series::Series(Eigen::VectorXd values, long start_index)
    : values_(std::move(values)), start_(start_index) {
    if (values_.size() == 0) throw DomainError("series must contain at least one observation");
    require_finite(values_);
}

Series::Series(std::initializer_list<double> values, long start_index)
    : Series(Eigen::Map<const Eigen::VectorXd>(values.begin(), static_cast<Eigen::Index>(values.size())),
             start_index) {}

Series Series::from(std::span<const double> values, long start_index) {
    return Series(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())),
                  start_index);
}

double Series::at(long t) const {
    if (t < start_ || t > last_index()) {
        throw DomainError("time index " + std::to_string(t) + " outside [" + std::to_string(start_) + ", " +
                          std::to_string(last_index()) + "]");
    }
    return values_[t - start_];
}

Series Series::slice(long first, long last) const {
    if (first > last || first < start_ || last > last_index()) {
        throw DomainError("slice [" + std::to_string(first) + ", " + std::to_string(last) + "] outside series range");
    }
    return Series(values_.segment(first - start_, last - first + 1), first);
}

LossDiffSeries::LossDiffSeries(Series values, long window, Loss loss)
    : values_(std::move(values)), window_(window), loss_(loss) {}

LossDiffSeries LossDiffSeries::scaled(double factor) const {
    return LossDiffSeries(Series(values_.values() * factor, values_.start_index()), window_, loss_);
}

LossDiffSeries loss_diff_squared_error(const Series& y, const Series& f1, const Series& f2, long window) {
    if (y.size() != f1.size() || y.size() != f2.size()) {
        throw AlignmentError("loss differential needs equal lengths (y=" + std::to_string(y.size()) +
                             ", f1=" + std::to_string(f1.size()) + ", f2=" + std::to_string(f2.size()) + ")");
    }
    const Eigen::ArrayXd e1 = y.values().array() - f1.values().array();
    const Eigen::ArrayXd e2 = y.values().array() - f2.values().array();
    return LossDiffSeries(Series((e1.square() - e2.square()).matrix(), y.start_index()), window);
}

Series outcomes_for(const Series& y, const Series& forecasts) {
    return y.slice(forecasts.start_index() + 1, forecasts.last_index() + 1);
}

double sample_autocovariance(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index lag) {
    const Eigen::Index n = x.size();
    if (lag < 0 || lag >= n) {
        throw DomainError("autocovariance lag " + std::to_string(lag) + " outside [0, " + std::to_string(n) + ")");
    }
    const Eigen::VectorXd centered = x.array() - x.mean();
    return centered.head(n - lag).dot(centered.tail(n - lag)) / static_cast<double>(n);
}

double sample_autocovariance(const Series& x, Eigen::Index lag) {
    return sample_autocovariance(x.values(), lag);
}

double empirical_quantile(std::vector<double> sample, double p) {
    if (sample.empty()) throw DomainError("quantile of an empty sample");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");
    if (sample.size() == 1) return sample.front();

    const double h = p * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(lo), sample.end());
    const double x_lo = sample[lo];
    if (hi == lo) return x_lo;
    const double x_hi = *std::min_element(sample.begin() + static_cast<std::ptrdiff_t>(lo) + 1, sample.end());
    return x_lo + (h - static_cast<double>(lo)) * (x_hi - x_lo);
}

}  // namespace fceval
