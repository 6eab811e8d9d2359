#pragma once

#include "fceval/series.hpp"

#include <optional>
#include <string>

namespace fceval {

/// Reference law of a test statistic under the null.
struct Reference {
    enum class Kind { std_normal, student_t };

    Kind kind = Kind::std_normal;
    int df = 0;  // student_t only

    static Reference normal() { return {Kind::std_normal, 0}; }
    static Reference student(int df) { return {Kind::student_t, df}; }
    std::string describe() const;
};

struct Nuisance {
    std::optional<int> nw_lags;
    std::optional<int> blocks;  // K of the subsample test
};

/// Outcome of a two-sided equal-predictive-accuracy test.
struct TestResult {
    std::string test;  // "GW", "DM", "SUB"
    double statistic = 0.0;
    Reference reference;
    double p_value = 1.0;
    Nuisance nuisance;

    /// Two-sided decision: reject iff p_value < alpha.
    bool rejects_at(double alpha) const { return p_value < alpha; }
};

/// Two-sided p-value of a statistic under its reference law.
double two_sided_p_value(double statistic, const Reference& reference);

/// J_T = sum(dL) / sqrt(sum(dL^2)) against N(0, 1). Throws
/// DegenerateStatisticError when every loss differential is zero.
TestResult gw_test(const LossDiffSeries& dl);

/// Bartlett-kernel long-run variance
/// gamma_0 + 2 sum_{j=1}^{L} (1 - j/(L+1)) gamma_j with centered, divisor-n
/// autocovariances. Non-negative for every input.
double newey_west_lrv(const Series& x, int lags);
double newey_west_lrv(const Eigen::Ref<const Eigen::VectorXd>& x, int lags);

/// Lag choice for the DM test.
struct LagRule {
    enum class Kind { textbook, explicit_lags };

    Kind kind = Kind::textbook;
    int lags = 0;

    static LagRule textbook() { return {Kind::textbook, 0}; }
    static LagRule fixed(int lags) { return {Kind::explicit_lags, lags}; }

    /// Lag count for an evaluation sample of length n. Textbook rule:
    /// floor(0.75 n^{1/3} + 1/2), capped at n - 1.
    int lags_for(long n) const;
};

/// sqrt(n) mean(dL) / sqrt(NW long-run variance) against N(0, 1).
TestResult dm_nw_test(const LossDiffSeries& dl, LagRule rule = LagRule::textbook());

/// Subsample t-test: split dL into K contiguous blocks (the first n mod K
/// blocks take one extra observation), then
/// S_K = sqrt(K) mean_k / sqrt(sample variance of block means),
/// against Student-t with K - 1 degrees of freedom.
TestResult subsample_t_test(const LossDiffSeries& dl, int K = 2);

}  // namespace fceval
