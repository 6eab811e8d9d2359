#include <gtest/gtest.h>

#include "fceval/asymptotics.hpp"
#include "fceval/errors.hpp"
#include "fceval/harness.hpp"
#include "fceval/io.hpp"

#include <cmath>
#include <sstream>

using namespace fceval;

TEST(TestSpec, LabelsRoundTrip) {
    for (const auto& t : {TestSpec::gw(), TestSpec::dm(), TestSpec::sub(2), TestSpec::sub(5)}) {
        EXPECT_EQ(TestSpec::parse(t.label()), t);
    }
    EXPECT_EQ(TestSpec::parse("sub"), TestSpec::sub(2));
    EXPECT_EQ(TestSpec::parse("Sub(4)"), TestSpec::sub(4));
    EXPECT_THROW(TestSpec::parse("KS"), DomainError);
    EXPECT_THROW(TestSpec::parse("SUB()"), DomainError);
}

TEST(Config, Validation) {
    auto c = location_model_config(1.0, 3, 100, 10, 1);
    EXPECT_NO_THROW(c.validate());
    c.n = 3;
    EXPECT_THROW(c.validate(), DomainError);
    c = location_model_config(1.0, 3, 100, 0, 1);
    EXPECT_THROW(c.validate(), DomainError);
    c = location_model_config(1.0, 3, 100, 10, 1);
    c.alpha = 1.0;
    EXPECT_THROW(c.validate(), DomainError);
    c = location_model_config(1.0, 3, 100, 10, 1);
    c.m = 4;  // disagrees with the DGP window
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Replication, LocationModelLength) {
    const auto config = location_model_config(0.5, 5, 100, 1, 1);
    RandomStream rng(1, 0);
    EXPECT_EQ(replicate_loss_differential(config, rng).n(), 100);
}

TEST(Replication, EveryDgpYieldsNLossDifferentials) {
    ExperimentConfig config;
    config.m = 5;
    config.n = 20;
    NestedFixedRegressor nested;
    nested.x = default_fixed_regressor(26);
    for (const DgpSpec& dgp : {DgpSpec{ExpandingNull{}}, DgpSpec{nested}, DgpSpec{NonNested{}}}) {
        config.dgp = dgp;
        RandomStream rng(2, 0);
        EXPECT_EQ(replicate_loss_differential(config, rng).n(), 20);
    }
}

TEST(Experiment, SingleReplicationFrequency) {
    const auto s = run_experiment(location_model_config(1.0, 3, 100, 1, 9));
    for (const auto& t : s.tests) {
        EXPECT_TRUE(t.rejection_rate == 0.0 || t.rejection_rate == 1.0);
        EXPECT_EQ(t.valid + t.degenerate, 1);
    }
}

TEST(Experiment, DeterministicAcrossWorkers) {
    auto config = location_model_config(1.5, 5, 200, 300, 4);
    std::string first;
    for (const unsigned w : {1u, 2u, 3u, 8u}) {
        config.workers = w;
        const auto records = run_replications(config);
        std::ostringstream out;
        out.precision(17);
        for (const auto& r : records) {
            for (const double s : r.statistics) out << s << ',';
            out << r.loss_sum << '\n';
        }
        if (first.empty()) {
            first = out.str();
        } else {
            EXPECT_EQ(out.str(), first) << "workers " << w;
        }
    }
}

TEST(Experiment, McStandardErrorFormula) {
    EXPECT_DOUBLE_EQ(binomial_mc_se(0.2, 100), 0.04);
    EXPECT_NEAR(binomial_mc_se(0.3, 2000) / binomial_mc_se(0.3, 4000), std::sqrt(2.0), 1e-14);
    EXPECT_EQ(binomial_mc_se(0.0, 50), 0.0);
}

TEST(Experiment, SummaryCountsAddUp) {
    const auto s = run_experiment(location_model_config(1.0, 3, 100, 500, 2));
    for (const auto& t : s.tests) {
        EXPECT_EQ(t.valid + t.degenerate, 500);
        EXPECT_NEAR(t.rejection_rate, static_cast<double>(t.rejections) / t.valid, 1e-15);
        EXPECT_NEAR(t.mc_se, binomial_mc_se(t.rejection_rate, t.valid), 1e-15);
    }
}

TEST(Experiment, KnownSizeLargeSkew) {
    const auto s = run_experiment(location_model_config(1.5, 3, 1000, 2000, 2024));
    EXPECT_NEAR(s.at(TestSpec::Kind::gw).rejection_rate, 0.4942, 0.03);
    EXPECT_NEAR(s.at(TestSpec::Kind::dm).rejection_rate, 0.3481, 0.03);
    EXPECT_NEAR(s.at(TestSpec::Kind::sub).rejection_rate, 0.0966, 0.03);
}

TEST(Experiment, KnownSizeMildSkew) {
    const auto s = run_experiment(location_model_config(0.5, 10, 1000, 2000, 2025));
    EXPECT_NEAR(s.at(TestSpec::Kind::gw).rejection_rate, 0.0543, 0.03);
}

TEST(Experiment, AdjacentReplicationsUncorrelated) {
    auto config = location_model_config(1.0, 3, 100, 4000, 31);
    config.tests = {TestSpec::gw()};
    const auto records = run_replications(config);
    const long R = static_cast<long>(records.size());
    double mean = 0;
    for (const auto& r : records) mean += r.statistics[0] / R;
    double num = 0, den = 0;
    for (long r = 0; r < R; ++r) {
        const double d = records[r].statistics[0] - mean;
        den += d * d;
        if (r + 1 < R) num += d * (records[r + 1].statistics[0] - mean);
    }
    EXPECT_LT(std::abs(num / den), 4.0 / std::sqrt(static_cast<double>(R)));
}

TEST(Table1, SingleCellEqualsRunExperiment) {
    ExperimentConfig base;
    base.replications = 300;
    base.master_seed = 17;
    const auto cells = reproduce_table1(Table1Grid{{1.0}, {5}, {200}}, base);
    ASSERT_EQ(cells.size(), 1u);
    const auto direct = run_experiment(location_model_config(1.0, 5, 200, 300, 17));
    for (std::size_t k = 0; k < direct.tests.size(); ++k) {
        EXPECT_EQ(cells[0].summary.tests[k].rejections, direct.tests[k].rejections);
        EXPECT_EQ(cells[0].summary.tests[k].degenerate, direct.tests[k].degenerate);
    }
}

TEST(Table1, OrderAndRepeatability) {
    ExperimentConfig base;
    base.replications = 50;
    base.master_seed = 3;
    const Table1Grid grid{{0.5, 1.5}, {3, 10}, {100, 200}};
    const auto a = reproduce_table1(grid, base);
    const auto b = reproduce_table1(grid, base);
    ASSERT_EQ(a.size(), 8u);
    EXPECT_EQ(a[0].sigma, 0.5);
    EXPECT_EQ(a[0].m, 3);
    EXPECT_EQ(a[0].n, 100);
    EXPECT_EQ(a[1].n, 200);
    EXPECT_EQ(a[2].m, 10);
    EXPECT_EQ(a[4].sigma, 1.5);
    std::ostringstream sa, sb;
    write_table1_csv(sa, table1_rows(a));
    write_table1_csv(sb, table1_rows(b));
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(VarianceCheck, GaussianUnitWindow) {
    ExperimentConfig config;
    config.dgp = DgpSpec{LocationModel{1}, InnovationSpec::gaussian()};
    config.m = 1;
    config.n = 2000;
    config.replications = 2000;
    config.master_seed = 5;
    const auto v = jstat_variance_experiment(config);
    EXPECT_DOUBLE_EQ(v.analytic, 1.0);
    EXPECT_NEAR(v.ratio, 1.0, 0.1);
}

// Gaussian oracle from writing sum dL as a quadratic form in the innovations:
// the lag-d cross products carry weight -2d/m^2 for d = 1..m, so
//   Gamma_inf = 2/m^2 + 4/m + 2(m+1)(2m+1)/(3m^3),  gamma_0 = 2/m^2 + 8/m.
namespace {
double gaussian_exact_lrv(double m) { return 2 / (m * m) + 4 / m + 2 * (m + 1) * (2 * m + 1) / (3 * m * m * m); }
double gaussian_exact_gamma0(double m) { return 2 / (m * m) + 8 / m; }
}  // namespace

TEST(VarianceCheck, GaussianLargeWindowUndersized) {
    ExperimentConfig config;
    config.dgp = DgpSpec{LocationModel{30}, InnovationSpec::gaussian()};
    config.m = 30;
    config.n = 3000;
    config.replications = 2000;
    config.master_seed = 6;
    const auto v = jstat_variance_experiment(config);
    EXPECT_LT(v.empirical_variance, 1.0);
    EXPECT_NEAR(v.empirical_variance, gaussian_exact_lrv(30) / gaussian_exact_gamma0(30), 0.07);
}

TEST(VarianceCheck, ModerateSkewMatchesVm) {
    const auto v = jstat_variance_experiment(location_model_config(0.5, 3, 5000, 2000, 8));
    EXPECT_NEAR(v.ratio, 1.0, 0.1);
}

TEST(AcovCheck, LagsBeyondWindowVanish) {
    const auto rows = acov_check_experiment(location_model_config(1.0, 3, 400000, 1, 12), 5);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows) EXPECT_LT(std::abs(r.z), 4.0) << "lag " << r.lag;
    EXPECT_EQ(rows[4].analytic, 0.0);
    EXPECT_EQ(rows[5].analytic, 0.0);
}

TEST(AcovCheck, GaussianLagMIsZero) {
    ExperimentConfig config;
    config.dgp = DgpSpec{LocationModel{4}, InnovationSpec::gaussian()};
    config.m = 4;
    config.n = 400000;
    config.master_seed = 13;
    const auto rows = acov_check_experiment(config, 5);
    EXPECT_EQ(rows[4].analytic, 0.0);
    EXPECT_LT(std::abs(rows[4].z), 4.0);
    EXPECT_LT(std::abs(rows[5].z), 4.0);
}

TEST(AcovCheck, GaussianSimulationMatchesExactMoments) {
    ExperimentConfig config;
    config.dgp = DgpSpec{LocationModel{4}, InnovationSpec::gaussian()};
    config.m = 4;
    config.n = 400000;
    config.master_seed = 14;
    const auto rows = acov_check_experiment(config, 5);
    EXPECT_LT(std::abs(rows[0].empirical - gaussian_exact_gamma0(4)) / rows[0].std_error, 4.0);
    double lrv = rows[0].empirical;
    for (std::size_t d = 1; d < rows.size(); ++d) lrv += 2 * rows[d].empirical;
    EXPECT_NEAR(lrv, gaussian_exact_lrv(4), 0.05);
}

TEST(MeanCheck, NestedExpectedLossVanishes) {
    NestedFixedRegressor nested;
    nested.x = default_fixed_regressor(26);
    ExperimentConfig config;
    config.dgp = DgpSpec{nested};
    config.m = 5;
    config.n = 20;
    config.replications = 20000;
    config.master_seed = 99;
    const auto check = summed_loss_experiment(config);
    EXPECT_LT(std::abs(check.z), 4.0);
    EXPECT_EQ(check.replications, 20000);
}
