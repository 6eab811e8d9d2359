#pragma once

#include "fceval/accuracy_tests.hpp"
#include "fceval/dgp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fceval {

struct TestSpec {
    enum class Kind { gw, dm, sub };

    Kind kind = Kind::gw;
    int K = 2;  // sub only

    static TestSpec gw() { return {Kind::gw, 0}; }
    static TestSpec dm() { return {Kind::dm, 0}; }
    static TestSpec sub(int K = 2) { return {Kind::sub, K}; }

    /// "GW", "DM" or "SUB(K)".
    std::string label() const;
    /// Inverse of label(); also accepts "SUB" for K = 2. Case-insensitive.
    static TestSpec parse(const std::string& text);
    bool operator==(const TestSpec&) const = default;
};

inline std::vector<TestSpec> default_tests() { return {TestSpec::gw(), TestSpec::dm(), TestSpec::sub(2)}; }

/// One Monte Carlo cell.
///
/// Forecast pairs by DGP, each producing exactly n loss differentials:
///  - LocationModel: rolling mean of the last m outcomes vs. the zero forecast.
///  - ExpandingNull: expanding mean from origin m vs. t^{-1/2}.
///  - NestedFixedRegressor: x-only vs. (1, x) least squares on every earlier
///    pair, origins m+1..m+n.
///  - NonNested: rolling-m regressions on x_1 alone vs. x_2 alone.
struct ExperimentConfig {
    DgpSpec dgp;
    long m = 3;
    long n = 100;
    long replications = 2000;
    std::vector<TestSpec> tests = default_tests();
    double alpha = 0.05;
    LagRule lag_rule = LagRule::textbook();
    std::uint64_t master_seed = 0;
    unsigned workers = 0;  // 0 = hardware concurrency; never affects results

    /// Lognormal shape of the innovations, 0 for Gaussian.
    double sigma() const;
    /// Throws DomainError describing the first invalid field.
    void validate() const;
};

/// Rolling location-model cell: y = m^{-1/2} + eps with eps negated standardized lognormal(sigma).
ExperimentConfig location_model_config(double sigma, long m, long n, long replications, std::uint64_t seed);

/// Loss differentials of one replication drawn from `stream`.
LossDiffSeries replicate_loss_differential(const ExperimentConfig& config, RandomStream& stream);

struct ReplicationRecord {
    enum class Outcome : std::uint8_t { accept, reject, degenerate };

    std::vector<double> statistics;  // NaN where degenerate
    std::vector<Outcome> outcomes;
    double loss_sum = 0.0;  // sum of the replication's loss differentials
};

/// Every replication of a cell, in replication order. Replication r draws
/// from RandomStream(master_seed, r).
std::vector<ReplicationRecord> run_replications(const ExperimentConfig& config);

struct TestSummary {
    TestSpec test;
    double rejection_rate = 0.0;
    double mc_se = 0.0;  // sqrt(p (1 - p) / valid)
    long rejections = 0;
    long valid = 0;
    long degenerate = 0;
};

struct RejectionSummary {
    ExperimentConfig config;
    std::vector<TestSummary> tests;

    const TestSummary& at(TestSpec::Kind kind) const;
};

RejectionSummary summarize(const ExperimentConfig& config, const std::vector<ReplicationRecord>& records);
RejectionSummary run_experiment(const ExperimentConfig& config);

/// Binomial Monte Carlo standard error sqrt(p (1 - p) / count).
double binomial_mc_se(double rate, long count);

// ---------------------------------------------------------------------------
// Size grid (table1)
// ---------------------------------------------------------------------------

struct Table1Grid {
    std::vector<double> sigmas{0.5, 1.0, 1.5};
    std::vector<long> ms{3, 5, 10, 30};
    std::vector<long> ns{100, 200, 1000};
};

struct Table1Cell {
    double sigma = 0.0;
    long m = 0;
    long n = 0;
    RejectionSummary summary;
};

/// Location-model cells ordered for display: sigma blocks, m
/// rows, n columns. Replications, seed, tests, alpha, lag rule and workers
/// come from `base`; its DGP, m and n are replaced per cell. Every cell uses
/// base.master_seed directly, so a one-cell grid equals run_experiment on
/// that cell.
std::vector<Table1Cell> reproduce_table1(const Table1Grid& grid, const ExperimentConfig& base);

// ---------------------------------------------------------------------------
// Validation experiments
// ---------------------------------------------------------------------------

struct VarianceCheck {
    double empirical_variance = 0.0;  // sample variance of J_T over valid replications
    double analytic = 0.0;            // V_m
    double ratio = 0.0;
    long valid = 0;
    long degenerate = 0;
};

/// Variance of the GW statistic across replications of a LocationModel cell vs V_m.
VarianceCheck jstat_variance_experiment(const ExperimentConfig& config);

struct AcovCheck {
    long lag = 0;
    double empirical = 0.0;  // sample_autocovariance over the whole series
    double analytic = 0.0;   // gamma_d with c = m^{-1/2}
    double std_error = 0.0;  // from batch means of the lag products
    double z = 0.0;
};

/// One LocationModel series of length config.n (substream 0). The standard
/// error of each lag comes from `batches` contiguous batches of lag
/// products dL_t dL_{t+d}, whose population mean is gamma_d.
std::vector<AcovCheck> acov_check_experiment(const ExperimentConfig& config, long max_lag, long batches = 100);

struct MeanCheck {
    double mean = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    long replications = 0;
};

/// Replication mean of the summed loss differentials with its MC standard error.
MeanCheck summed_loss_experiment(const ExperimentConfig& config);

}  // namespace fceval
