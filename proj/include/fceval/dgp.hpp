#pragma once

#include "fceval/forecasters.hpp"
#include "fceval/random.hpp"
#include "fceval/series.hpp"

#include <Eigen/Core>

#include <optional>
#include <variant>

namespace fceval {

/// Law of the unit-variance innovations.
struct InnovationSpec {
    enum class Kind { gaussian_unit, neg_standardized_lognormal };

    Kind kind = Kind::gaussian_unit;
    /// Shape of log(xi) ~ N(0, sigma^2); lognormal kind only.
    double sigma = 0.0;

    static InnovationSpec gaussian() { return {Kind::gaussian_unit, 0.0}; }
    /// eps = -(xi - E xi) / sd(xi) with log(xi) ~ N(0, sigma^2).
    static InnovationSpec neg_lognormal(double sigma);
};

/// Third and fourth moments of a mean-zero, unit-variance innovation.
struct InnovationMoments {
    double kappa1 = 0.0;  // E eps^3
    double kappa2 = 3.0;  // E eps^4
};

/// Closed-form moments of the negated standardized lognormal:
/// kappa1 = -(e^{s^2} + 2) sqrt(e^{s^2} - 1),
/// kappa2 = e^{4 s^2} + 2 e^{3 s^2} + 3 e^{2 s^2} - 3.
InnovationMoments lognormal_neg_moments(double sigma);

/// Moments of either innovation kind (Gaussian: 0 and 3).
InnovationMoments innovation_moments(const InnovationSpec& spec);

/// count i.i.d. innovations, time indices 1..count.
Series draw_innovations(const InnovationSpec& spec, long count, RandomStream& stream);

// ---------------------------------------------------------------------------
// Nested fixed-regressor calibration
// ---------------------------------------------------------------------------

/// Which regressor enters the leverage term of the intercept calibration.
///  - forecast_regressor: X_t, the regressor the big model forecasts with
///    at origin t. Matches the forecast-error decomposition and makes the
///    expected summed loss differential vanish.
///  - as_printed: X_{t-1}, literally as the closed form is usually printed.
///    Kept for comparison; it does not zero the expected sum.
enum class LeverageIndex { forecast_regressor, as_printed };

struct NestedCalibration {
    double numerator = 0.0;    // sum of leverage differences (times sigma^2)
    double denominator = 0.0;  // sum of squared small-model bias factors
    double c_squared = 0.0;

    /// sqrt(c^2); throws DomainError when the calibration came out negative.
    double intercept() const;
};

/// Intercept c^2 that equalizes the expected summed squared-error loss of
///   small: y_{t+1} on x_t through the origin,
///   big:   y_{t+1} on (1, x_t),
/// both fitted on every pair (X_s, y_{s+1}), s = 0..t-1, over origins
/// t = m+1..m+n, when y_{s+1} = c + beta x_s + eps_{s+1}, eps ~ N(0, sigma^2):
///
///   c^2 = sigma^2 sum_t [X_t'(X_{(t-1)}'X_{(t-1)})^{-1}X_t - x_t^2/(x_{(t-1)}'x_{(t-1)})]
///         / sum_t (1 - (x_{(t-1)}'1)/(x_{(t-1)}'x_{(t-1)}) x_t)^2.
///
/// x holds x_0, x_1, ... and must reach index m+n. A negative result is
/// returned as-is (see NestedCalibration::intercept).
NestedCalibration compute_c_squared_nested(const Eigen::Ref<const Eigen::VectorXd>& x, double sigma_eps, long m,
                                           long n, LeverageIndex leverage = LeverageIndex::forecast_regressor);

/// Default fixed regressor x_t = sin(t) + 2 for t = 0..count-1.
Eigen::VectorXd default_fixed_regressor(long count);

// ---------------------------------------------------------------------------
// Data-generating processes
// ---------------------------------------------------------------------------

/// y_{t+1} = c + eps_{t+1} with c = m^{-1/2}.
struct LocationModel {
    long m = 1;
    double intercept() const;
};

/// y_t = eps_t.
struct ExpandingNull {};

/// y_{t+1} = c + beta x_t + sigma_eps eps_{t+1} with a fixed regressor path.
struct NestedFixedRegressor {
    Eigen::VectorXd x;  // x_0, x_1, ...
    double sigma_eps = 1.0;
    long m = 5;
    long n = 20;
    double beta = 1.0;
    LeverageIndex leverage = LeverageIndex::forecast_regressor;
};

/// y_{t+1} = beta1 x_{1t} + beta2 x_{2t} + eps_{t+1}, x_{it} i.i.d. N(0,1).
struct NonNested {
    double beta1 = 1.0;
    double beta2 = 1.0;
};

struct DgpSpec {
    std::variant<LocationModel, ExpandingNull, NestedFixedRegressor, NonNested> variant;
    InnovationSpec innovation = InnovationSpec::gaussian();
};

struct SimulatedPath {
    Series y;
    std::optional<Regressors> regressors;
};

/// Outcome path y_1..y_T (plus regressors X_0..X_{T-1} where the DGP has
/// them), driven by the given innovations eps_1..eps_T.
SimulatedPath simulate_from_innovations(const DgpSpec& dgp, const Series& innovations,
                                        RandomStream* regressor_stream = nullptr);

/// Outcome path of length T drawn from stream.
SimulatedPath simulate(const DgpSpec& dgp, long T, RandomStream& stream);

}  // namespace fceval
