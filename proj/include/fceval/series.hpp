#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fceval {

/// Dense, finite, time-indexed sequence of observations.
///
/// Element i carries time index start_index() + i. Construction rejects
/// empty input and any non-finite value.
class Series {
public:
    explicit Series(Eigen::VectorXd values, long start_index = 1);
    Series(std::initializer_list<double> values, long start_index = 1);
    static Series from(std::span<const double> values, long start_index = 1);

    const Eigen::VectorXd& values() const noexcept { return values_; }
    Eigen::Index size() const noexcept { return values_.size(); }
    long start_index() const noexcept { return start_; }
    long last_index() const noexcept { return start_ + static_cast<long>(values_.size()) - 1; }

    /// Value at time index t.
    double at(long t) const;
    double operator[](Eigen::Index i) const { return values_[i]; }

    /// Sub-series covering time indices [first, last].
    Series slice(long first, long last) const;

    double mean() const { return values_.mean(); }

private:
    Eigen::VectorXd values_;
    long start_;
};

enum class Loss { squared_error };

/// Loss differentials over an out-of-sample evaluation period.
///
/// window is the estimation window (or first origin, for expanding
/// schemes) that produced the forecasts; it is metadata only.
class LossDiffSeries {
public:
    LossDiffSeries(Series values, long window, Loss loss = Loss::squared_error);

    const Series& series() const noexcept { return values_; }
    const Eigen::VectorXd& values() const noexcept { return values_.values(); }
    Eigen::Index n() const noexcept { return values_.size(); }
    long window() const noexcept { return window_; }
    Loss loss() const noexcept { return loss_; }

    /// Same metadata, every element multiplied by factor.
    LossDiffSeries scaled(double factor) const;

private:
    Series values_;
    long window_;
    Loss loss_;
};

/// (y - f1)^2 - (y - f2)^2 element-wise. Inputs must already be aligned so
/// element i of f1 and f2 forecasts element i of y.
LossDiffSeries loss_diff_squared_error(const Series& y, const Series& f1, const Series& f2,
                                       long window = 0);

/// Outcomes paired with a forecast series: slot t of the forecasts predicts y_{t+1}.
Series outcomes_for(const Series& y, const Series& forecasts);

/// Biased sample autocovariance (divisor n, centered at the sample mean).
double sample_autocovariance(const Series& x, Eigen::Index lag);
double sample_autocovariance(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index lag);

/// Quantile at probability p by linear interpolation of the order statistics
/// x_(0) <= ... <= x_(N-1) placed at probability points k/(N-1), i.e. the
/// value at fractional rank h = p(N-1).
double empirical_quantile(std::vector<double> sample, double p);

}  // namespace fceval
