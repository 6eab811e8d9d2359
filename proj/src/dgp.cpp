#include "fceval/dgp.hpp"

#include "fceval/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

namespace fceval {

InnovationSpec InnovationSpec::neg_lognormal(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("lognormal shape sigma must be positive");
    return {Kind::neg_standardized_lognormal, sigma};
}

InnovationMoments lognormal_neg_moments(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("lognormal shape sigma must be positive");
    const double s2 = sigma * sigma;
    const double w = std::exp(s2);
    // expm1 keeps e^{s^2} - 1 accurate as sigma -> 0.
    const double skew = (w + 2.0) * std::sqrt(std::expm1(s2));
    const double kurt = std::exp(4.0 * s2) + 2.0 * std::exp(3.0 * s2) + 3.0 * std::exp(2.0 * s2) - 3.0;
    return {-skew, kurt};
}

InnovationMoments innovation_moments(const InnovationSpec& spec) {
    if (spec.kind == InnovationSpec::Kind::gaussian_unit) return {0.0, 3.0};
    return lognormal_neg_moments(spec.sigma);
}

Series draw_innovations(const InnovationSpec& spec, long count, RandomStream& stream) {
    if (count < 1) throw DomainError("need at least one innovation");
    Eigen::VectorXd out(count);
    if (spec.kind == InnovationSpec::Kind::gaussian_unit) {
        for (long i = 0; i < count; ++i) out[i] = stream.normal();
    } else {
        const double s2 = spec.sigma * spec.sigma;
        const double mean = std::exp(0.5 * s2);
        const double sd = std::sqrt(std::expm1(s2) * std::exp(s2));
        for (long i = 0; i < count; ++i) out[i] = -(std::exp(spec.sigma * stream.normal()) - mean) / sd;
    }
    return Series(std::move(out), 1);
}

double NestedCalibration::intercept() const {
    if (c_squared < 0.0) {
        throw DomainError("nested calibration produced c^2 = " + std::to_string(c_squared) +
                          " < 0; no real intercept exists for this regressor path");
    }
    return std::sqrt(c_squared);
}

NestedCalibration compute_c_squared_nested(const Eigen::Ref<const Eigen::VectorXd>& x, double sigma_eps, long m,
                                           long n, LeverageIndex leverage) {
    if (m < 0 || n < 1) throw DomainError("nested calibration needs m >= 0 and n >= 1");
    if (!(sigma_eps > 0.0)) throw DomainError("innovation sd must be positive");
    if (x.size() < m + n + 1) {
        throw InsufficientDataError("regressor path must cover x_0..x_" + std::to_string(m + n));
    }

    // Prefix moments of x_0..x_{t-1}: count, sum, sum of squares.
    double s1 = x.head(m + 1).sum();
    double s2 = x.head(m + 1).squaredNorm();
    double num = 0.0;
    double den = 0.0;
    for (long t = m + 1; t <= m + n; ++t) {
        const double count = static_cast<double>(t);
        Eigen::Matrix2d gram;
        gram << count, s1, s1, s2;
        const double scale = gram.cwiseAbs().maxCoeff();
        if (std::abs(gram.determinant()) <= 64.0 * std::numeric_limits<double>::epsilon() * scale * scale ||
            s2 == 0.0) {
            throw RankDeficiencyError(t, "prefix design (1, x_s), s < " + std::to_string(t) + " is singular");
        }
        const double x_t = x[t];
        const double x_lev = leverage == LeverageIndex::forecast_regressor ? x_t : x[t - 1];
        const Eigen::Vector2d X(1.0, x_lev);
        num += X.dot(gram.ldlt().solve(X)) - x_t * x_t / s2;
        const double bias = 1.0 - s1 / s2 * x_t;
        den += bias * bias;

        s1 += x_t;
        s2 += x_t * x_t;
    }
    NestedCalibration out;
    out.numerator = sigma_eps * sigma_eps * num;
    out.denominator = den;
    out.c_squared = out.numerator / out.denominator;
    return out;
}

Eigen::VectorXd default_fixed_regressor(long count) {
    Eigen::VectorXd x(count);
    for (long t = 0; t < count; ++t) x[t] = std::sin(static_cast<double>(t)) + 2.0;
    return x;
}

double LocationModel::intercept() const {
    if (m < 1) throw DomainError("location model window must be >= 1");
    return 1.0 / std::sqrt(static_cast<double>(m));
}

namespace {

struct PathBuilder {
    const Series& eps;
    RandomStream* regressor_stream;

    SimulatedPath operator()(const LocationModel& spec) const {
        return {Series(eps.values().array() + spec.intercept(), 1), std::nullopt};
    }

    SimulatedPath operator()(const ExpandingNull&) const { return {Series(eps.values(), 1), std::nullopt}; }

    SimulatedPath operator()(const NestedFixedRegressor& spec) const {
        const long T = static_cast<long>(eps.size());
        if (spec.x.size() < T) {
            throw InsufficientDataError("fixed regressor path shorter than the simulated sample");
        }
        const double c = compute_c_squared_nested(spec.x, spec.sigma_eps, spec.m, spec.n, spec.leverage).intercept();
        // y_{s+1} = c + beta x_s + sigma eps_{s+1}, s = 0..T-1.
        Eigen::VectorXd y = (c + spec.beta * spec.x.head(T).array() + spec.sigma_eps * eps.values().array()).matrix();
        return {Series(std::move(y), 1), Regressors{spec.x.head(T), 0}};
    }

    SimulatedPath operator()(const NonNested& spec) const {
        if (regressor_stream == nullptr) throw DomainError("non-nested DGP needs a stream for its regressors");
        const long T = static_cast<long>(eps.size());
        Eigen::MatrixXd x(T, 2);
        for (long s = 0; s < T; ++s) {
            x(s, 0) = regressor_stream->normal();
            x(s, 1) = regressor_stream->normal();
        }
        Eigen::VectorXd y = spec.beta1 * x.col(0) + spec.beta2 * x.col(1) + eps.values();
        return {Series(std::move(y), 1), Regressors{std::move(x), 0}};
    }
};

}  // namespace

SimulatedPath simulate_from_innovations(const DgpSpec& dgp, const Series& innovations,
                                        RandomStream* regressor_stream) {
    return std::visit(PathBuilder{innovations, regressor_stream}, dgp.variant);
}

SimulatedPath simulate(const DgpSpec& dgp, long T, RandomStream& stream) {
    if (T < 2) throw DomainError("simulated sample must hold at least two observations");
    const Series eps = draw_innovations(dgp.innovation, T, stream);
    return simulate_from_innovations(dgp, eps, &stream);
}

}  // namespace fceval
