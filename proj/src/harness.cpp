#include "fceval/harness.hpp"

#include "fceval/asymptotics.hpp"
#include "fceval/errors.hpp"
#include "fceval/forecasters.hpp"
#include "fceval/parallel.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace fceval {

std::string TestSpec::label() const {
    switch (kind) {
        case Kind::gw: return "GW";
        case Kind::dm: return "DM";
        case Kind::sub: return "SUB(" + std::to_string(K) + ")";
    }
    return "?";
}

TestSpec TestSpec::parse(const std::string& text) {
    std::string t;
    for (const char ch : text) {
        if (ch != ' ') t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    if (t == "GW") return gw();
    if (t == "DM") return dm();
    if (t == "SUB") return sub(2);
    if (t.size() > 5 && t.starts_with("SUB(") && t.back() == ')') {
        const std::string digits = t.substr(4, t.size() - 5);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 9) {
            return sub(std::stoi(digits));
        }
    }
    throw DomainError("unknown test '" + text + "' (expected GW, DM, SUB or SUB(K))");
}

double ExperimentConfig::sigma() const {
    return dgp.innovation.kind == InnovationSpec::Kind::neg_standardized_lognormal ? dgp.innovation.sigma : 0.0;
}

void ExperimentConfig::validate() const {
    if (m < 1) throw DomainError("m must be >= 1");
    if (n <= m) throw DomainError("n must exceed m");
    if (replications < 1) throw DomainError("replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (dgp.innovation.kind == InnovationSpec::Kind::neg_standardized_lognormal && !(dgp.innovation.sigma > 0.0)) {
        throw DomainError("lognormal sigma must be positive");
    }
    for (const auto& t : tests) {
        if (t.kind == TestSpec::Kind::sub && (t.K < 2 || n < 2L * t.K)) {
            throw DomainError("subsample test needs 2 <= K <= n/2");
        }
    }
    if (const auto* loc = std::get_if<LocationModel>(&dgp.variant); loc && loc->m != m) {
        throw DomainError("location model window differs from the cell's m");
    }
    if (const auto* nested = std::get_if<NestedFixedRegressor>(&dgp.variant)) {
        if (nested->m != m || nested->n != n) throw DomainError("nested DGP (m, n) differ from the cell's");
        if (nested->x.size() < m + n + 1) throw DomainError("nested regressor path must cover x_0..x_{m+n}");
    }
}

ExperimentConfig location_model_config(double sigma, long m, long n, long replications, std::uint64_t seed) {
    ExperimentConfig config;
    config.dgp.variant = LocationModel{m};
    config.dgp.innovation = InnovationSpec::neg_lognormal(sigma);
    config.m = m;
    config.n = n;
    config.replications = replications;
    config.master_seed = seed;
    return config;
}

namespace {

struct LossBuilder {
    const ExperimentConfig& config;
    RandomStream& stream;

    LossDiffSeries operator()(const LocationModel&) const {
        const SimulatedPath path = simulate(config.dgp, config.m + config.n, stream);
        const Series f1 = rolling_mean_forecasts(path.y, config.m);
        const Series f2 = deterministic_sequence_forecasts(DeterministicRule::constant(0.0), f1.start_index(),
                                                           f1.last_index());
        return loss_diff_squared_error(outcomes_for(path.y, f1), f1, f2, config.m);
    }

    LossDiffSeries operator()(const ExpandingNull&) const {
        const SimulatedPath path = simulate(config.dgp, config.m + config.n, stream);
        const Series f1 = expanding_mean_forecasts(path.y, config.m);
        const Series f2 = deterministic_sequence_forecasts(DeterministicRule::inverse_sqrt_t(), f1.start_index(),
                                                           f1.last_index());
        return loss_diff_squared_error(outcomes_for(path.y, f1), f1, f2, config.m);
    }

    LossDiffSeries operator()(const NestedFixedRegressor&) const {
        const SimulatedPath path = simulate(config.dgp, config.m + config.n + 1, stream);
        const Regressors& x = *path.regressors;
        Regressors full{Eigen::MatrixXd(x.values.rows(), 2), x.start_index};
        full.values.col(0).setOnes();
        full.values.col(1) = x.values.col(0);
        const auto scheme = WindowScheme::expanding(config.m + 1);
        const Series small = ols_forecasts(path.y, x, scheme);
        const Series big = ols_forecasts(path.y, full, scheme);
        return loss_diff_squared_error(outcomes_for(path.y, small), small, big, config.m + 1);
    }

    LossDiffSeries operator()(const NonNested&) const {
        const SimulatedPath path = simulate(config.dgp, config.m + config.n, stream);
        const Regressors& x = *path.regressors;
        const Series f1 = rolling_ols_forecasts(path.y, Regressors{x.values.col(0), x.start_index}, config.m);
        const Series f2 = rolling_ols_forecasts(path.y, Regressors{x.values.col(1), x.start_index}, config.m);
        return loss_diff_squared_error(outcomes_for(path.y, f1), f1, f2, config.m);
    }
};

TestResult run_test(const TestSpec& spec, const LossDiffSeries& dl, LagRule lag_rule) {
    switch (spec.kind) {
        case TestSpec::Kind::gw: return gw_test(dl);
        case TestSpec::Kind::dm: return dm_nw_test(dl, lag_rule);
        case TestSpec::Kind::sub: return subsample_t_test(dl, spec.K);
    }
    throw DomainError("unknown test kind");
}

}  // namespace

LossDiffSeries replicate_loss_differential(const ExperimentConfig& config, RandomStream& stream) {
    return std::visit(LossBuilder{config, stream}, config.dgp.variant);
}

std::vector<ReplicationRecord> run_replications(const ExperimentConfig& config) {
    config.validate();
    std::vector<ReplicationRecord> records(static_cast<std::size_t>(config.replications));
    parallel_for_index(records.size(), config.workers, [&](std::size_t r) {
        RandomStream stream(config.master_seed, r);
        const LossDiffSeries dl = replicate_loss_differential(config, stream);
        ReplicationRecord& rec = records[r];
        rec.loss_sum = dl.values().sum();
        rec.statistics.reserve(config.tests.size());
        rec.outcomes.reserve(config.tests.size());
        for (const auto& spec : config.tests) {
            try {
                const TestResult res = run_test(spec, dl, config.lag_rule);
                rec.statistics.push_back(res.statistic);
                rec.outcomes.push_back(res.rejects_at(config.alpha) ? ReplicationRecord::Outcome::reject
                                                                    : ReplicationRecord::Outcome::accept);
            } catch (const DegenerateStatisticError&) {
                rec.statistics.push_back(std::numeric_limits<double>::quiet_NaN());
                rec.outcomes.push_back(ReplicationRecord::Outcome::degenerate);
            }
        }
    });
    return records;
}

double binomial_mc_se(double rate, long count) {
    if (count <= 0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(count));
}

const TestSummary& RejectionSummary::at(TestSpec::Kind kind) const {
    for (const auto& t : tests) {
        if (t.test.kind == kind) return t;
    }
    throw DomainError("test not part of this summary");
}

RejectionSummary summarize(const ExperimentConfig& config, const std::vector<ReplicationRecord>& records) {
    RejectionSummary out;
    out.config = config;
    for (std::size_t j = 0; j < config.tests.size(); ++j) {
        TestSummary s;
        s.test = config.tests[j];
        for (const auto& rec : records) {
            switch (rec.outcomes[j]) {
                case ReplicationRecord::Outcome::reject: ++s.rejections; ++s.valid; break;
                case ReplicationRecord::Outcome::accept: ++s.valid; break;
                case ReplicationRecord::Outcome::degenerate: ++s.degenerate; break;
            }
        }
        s.rejection_rate = s.valid > 0 ? static_cast<double>(s.rejections) / static_cast<double>(s.valid) : 0.0;
        s.mc_se = s.valid > 0 ? binomial_mc_se(s.rejection_rate, s.valid) : 0.0;
        out.tests.push_back(s);
    }
    return out;
}

RejectionSummary run_experiment(const ExperimentConfig& config) { return summarize(config, run_replications(config)); }

std::vector<Table1Cell> reproduce_table1(const Table1Grid& grid, const ExperimentConfig& base) {
    if (grid.sigmas.empty() || grid.ms.empty() || grid.ns.empty()) throw DomainError("size grid has an empty axis");
    std::vector<Table1Cell> cells;
    cells.reserve(grid.sigmas.size() * grid.ms.size() * grid.ns.size());
    for (const double sigma : grid.sigmas) {
        for (const long m : grid.ms) {
            for (const long n : grid.ns) {
                ExperimentConfig config = base;
                config.dgp.variant = LocationModel{m};
                config.dgp.innovation = InnovationSpec::neg_lognormal(sigma);
                config.m = m;
                config.n = n;
                cells.push_back({sigma, m, n, run_experiment(config)});
            }
        }
    }
    return cells;
}

VarianceCheck jstat_variance_experiment(const ExperimentConfig& config) {
    if (!std::holds_alternative<LocationModel>(config.dgp.variant)) {
        throw DomainError("variance experiment needs the location-model DGP");
    }
    ExperimentConfig gw_only = config;
    gw_only.tests = {TestSpec::gw()};
    const auto records = run_replications(gw_only);

    VarianceCheck out;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& rec : records) {
        if (rec.outcomes[0] == ReplicationRecord::Outcome::degenerate) {
            ++out.degenerate;
            continue;
        }
        ++out.valid;
        sum += rec.statistics[0];
        sum_sq += rec.statistics[0] * rec.statistics[0];
    }
    if (out.valid < 2) throw InsufficientDataError("variance experiment needs two valid replications");
    const double count = static_cast<double>(out.valid);
    out.empirical_variance = (sum_sq - sum * sum / count) / (count - 1.0);
    const InnovationMoments k = innovation_moments(config.dgp.innovation);
    out.analytic = vm(static_cast<double>(config.m), k.kappa1, k.kappa2);
    out.ratio = out.empirical_variance / out.analytic;
    return out;
}

std::vector<AcovCheck> acov_check_experiment(const ExperimentConfig& config, long max_lag, long batches) {
    if (!std::holds_alternative<LocationModel>(config.dgp.variant)) {
        throw DomainError("autocovariance experiment needs the location-model DGP");
    }
    config.validate();
    if (max_lag < 0) throw DomainError("max_lag must be >= 0");
    if (batches < 2) throw DomainError("need at least two batches");

    RandomStream stream(config.master_seed, 0);
    const LossDiffSeries dl = replicate_loss_differential(config, stream);
    const Eigen::VectorXd& v = dl.values();
    const long n = dl.n();
    if (max_lag >= n / batches) throw InsufficientDataError("series too short for the requested lags and batches");

    const InnovationMoments k = innovation_moments(config.dgp.innovation);
    const double c = 1.0 / std::sqrt(static_cast<double>(config.m));

    std::vector<AcovCheck> out;
    for (long d = 0; d <= max_lag; ++d) {
        const long products = n - d;
        const long per_batch = products / batches;
        Eigen::VectorXd batch_means(batches);
        for (long b = 0; b < batches; ++b) {
            const long start = b * per_batch;
            batch_means[b] = v.segment(start, per_batch).dot(v.segment(start + d, per_batch)) /
                             static_cast<double>(per_batch);
        }
        const double spread = (batch_means.array() - batch_means.mean()).square().sum() / (batches - 1);

        AcovCheck row;
        row.lag = d;
        row.empirical = sample_autocovariance(dl.series(), d);
        row.analytic = gamma_d(config.m, d, k.kappa1, k.kappa2, c);
        row.std_error = std::sqrt(spread / static_cast<double>(batches));
        row.z = (row.empirical - row.analytic) / row.std_error;
        out.push_back(row);
    }
    return out;
}

MeanCheck summed_loss_experiment(const ExperimentConfig& config) {
    ExperimentConfig bare = config;
    bare.tests.clear();
    const auto records = run_replications(bare);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& rec : records) {
        sum += rec.loss_sum;
        sum_sq += rec.loss_sum * rec.loss_sum;
    }
    MeanCheck out;
    out.replications = static_cast<long>(records.size());
    const double count = static_cast<double>(out.replications);
    out.mean = sum / count;
    const double var = count > 1.0 ? (sum_sq - sum * sum / count) / (count - 1.0) : 0.0;
    out.std_error = std::sqrt(var / count);
    out.z = out.std_error > 0.0 ? out.mean / out.std_error : 0.0;
    return out;
}

}  // namespace fceval
