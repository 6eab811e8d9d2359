#include "fceval/asymptotics.hpp"

#include "fceval/parallel.hpp"
#include "fceval/random.hpp"
#include "fceval/series.hpp"

#include <algorithm>
#include <cmath>

namespace fceval {

namespace {

struct PathTerms {
    double first;
    double second;
};

PathTerms simulate_path(long first_point, long grid_steps, Evaluand evaluand, RandomStream& stream) {
    const double N = static_cast<double>(grid_steps);
    const double step_sd = 1.0 / std::sqrt(N);

    // B(u_{k0}) ~ N(0, k0/N) has the law of the cumulated increments before it.
    double B = std::sqrt(static_cast<double>(first_point) / N) * stream.normal();
    double a = 0.0;
    double d = 0.0;
    double m = 0.0;
    for (long k = first_point; k < grid_steps; ++k) {
        const double u = static_cast<double>(k) / N;
        const double inv_u = 1.0 / u;
        const double g = std::sqrt(inv_u) - B * inv_u;
        a += B * B * inv_u * inv_u - inv_u;
        d += g * g;
        const double dB = step_sd * stream.normal();
        B += dB;
        if (evaluand == Evaluand::left) {
            m += g * dB;
        } else {
            const double inv_next = N / static_cast<double>(k + 1);
            m += (std::sqrt(inv_next) - B * inv_next) * dB;
        }
    }
    a /= N;
    d /= N;
    const double root_d = std::sqrt(d);
    return {a / (2.0 * root_d), m / root_d};
}

}  // namespace

LimitSample simulate_expanding_limit(double lambda, long grid_steps, long paths, std::uint64_t seed,
                                     const LimitOptions& options) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
    if (grid_steps < 100) throw DomainError("grid needs at least 100 steps");
    if (paths < 1) throw DomainError("need at least one path");

    // ceil(lambda N), tolerant of representation error in lambda * N.
    const long first_point =
        std::max(1L, static_cast<long>(std::ceil(lambda * static_cast<double>(grid_steps) - 1e-9)));
    if (first_point >= grid_steps) throw DomainError("lambda leaves no grid points below 1");

    LimitSample out;
    out.lambda = lambda;
    out.grid_steps = grid_steps;
    out.paths = paths;
    out.draws.resize(paths);
    out.first_terms.resize(paths);
    out.second_terms.resize(paths);
    const double sign = options.sign == SecondTermSign::plus ? 1.0 : -1.0;

    parallel_for_index(static_cast<std::size_t>(paths), options.workers, [&](std::size_t i) {
        RandomStream stream(seed, i);
        const PathTerms terms = simulate_path(first_point, grid_steps, options.evaluand, stream);
        out.first_terms[i] = terms.first;
        out.second_terms[i] = terms.second;
        out.draws[i] = terms.first + sign * terms.second;
    });
    return out;
}

Table2Row table2_row(const LimitSample& sample) {
    std::vector<double> abs_draws(sample.draws.size());
    std::transform(sample.draws.begin(), sample.draws.end(), abs_draws.begin(),
                   [](double v) { return std::abs(v); });
    const auto exceed = std::count_if(abs_draws.begin(), abs_draws.end(), [](double v) { return v > 1.96; });
    Table2Row row;
    row.lambda = sample.lambda;
    row.size_at_196 = static_cast<double>(exceed) / static_cast<double>(abs_draws.size());
    row.q95_abs = empirical_quantile(std::move(abs_draws), 0.95);
    return row;
}

Table2Row table2_row(double lambda, long grid_steps, long paths, std::uint64_t seed, const LimitOptions& options) {
    return table2_row(simulate_expanding_limit(lambda, grid_steps, paths, seed, options));
}

}  // namespace fceval
