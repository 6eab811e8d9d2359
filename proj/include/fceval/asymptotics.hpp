#pragma once

#include "fceval/errors.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace fceval {

// Closed forms for the rolling-mean location model
//   y_{t+1} = c + eps_{t+1},  f1_t = mean of the last m outcomes,  f2_t = 0,
// with E eps^3 = kappa1 and E eps^4 = kappa2. The functions are templated on
// the scalar type so identities can be cross-checked in extended precision.

/// Asymptotic variance of J_T when c = m^{-1/2}:
///   V_m = (4 m^2 - 4 m^{3/2} kappa1 + m (kappa2 + 3)) / (8 m^2 + kappa2 - 1).
template <typename Scalar>
Scalar vm(Scalar m, Scalar kappa1, Scalar kappa2) {
    using std::sqrt;
    if (!(m >= Scalar(1))) throw DomainError("V_m needs m >= 1");
    const Scalar den = Scalar(8) * m * m + kappa2 - Scalar(1);
    if (!(den > Scalar(0))) throw DomainError("V_m denominator is not positive");
    const Scalar num = Scalar(4) * m * m - Scalar(4) * m * sqrt(m) * kappa1 + m * (kappa2 + Scalar(3));
    return num / den;
}

/// Lag-d autocovariance of the loss differential:
///   d = 0:          m^{-3}(kappa2 - 1) + 8 m^{-1}
///   1 <= d <= m-1:  [m^{-4}(kappa2 - 1) - 4 m^{-3}](m - d) - 2 c m^{-2} kappa1
///   d = m:          -2 c m^{-2} kappa1
///   d > m:          0
/// The d = 0 and 1..m-1 forms already assume c^2 = 1/m; c is a free argument
/// only in the third-moment terms.
template <typename Scalar>
Scalar gamma_d(long m, long d, Scalar kappa1, Scalar kappa2, Scalar c) {
    if (m < 1) throw DomainError("gamma_d needs m >= 1");
    if (d < 0) throw DomainError("gamma_d needs d >= 0");
    const Scalar mm = static_cast<Scalar>(m);
    const Scalar third = Scalar(2) * c * kappa1 / (mm * mm);
    if (d == 0) return (kappa2 - Scalar(1)) / (mm * mm * mm) + Scalar(8) / mm;
    if (d < m) {
        const Scalar slope = (kappa2 - Scalar(1)) / (mm * mm * mm * mm) - Scalar(4) / (mm * mm * mm);
        return slope * static_cast<Scalar>(m - d) - third;
    }
    if (d == m) return -third;
    return Scalar(0);
}

/// Gamma_inf = 4 m^{-1} - 4 c m^{-1} kappa1 + m^{-2}(kappa2 + 3).
template <typename Scalar>
Scalar long_run_variance_analytic(long m, Scalar kappa1, Scalar kappa2, Scalar c) {
    if (m < 1) throw DomainError("long-run variance needs m >= 1");
    const Scalar mm = static_cast<Scalar>(m);
    return Scalar(4) / mm - Scalar(4) * c * kappa1 / mm + (kappa2 + Scalar(3)) / (mm * mm);
}

/// gamma_0 + 2 sum_{d=1}^{m} gamma_d, the same quantity summed lag by lag.
template <typename Scalar>
Scalar long_run_variance_by_lags(long m, Scalar kappa1, Scalar kappa2, Scalar c) {
    Scalar sum = gamma_d(m, 0, kappa1, kappa2, c);
    for (long d = 1; d <= m; ++d) sum += Scalar(2) * gamma_d(m, d, kappa1, kappa2, c);
    return sum;
}

// ---------------------------------------------------------------------------
// Expanding-window limit of J_T
// ---------------------------------------------------------------------------
//
//   A(B) / (2 sqrt(D(B))) + s * M(B) / sqrt(D(B))
//
// with A = int_lam^1 (u^{-2} B^2 - u^{-1}) du, D = int_lam^1 (u^{-1/2} - u^{-1} B)^2 du,
// M = int_lam^1 (u^{-1/2} - u^{-1} B) dB and s = +1 (the sign the
// functional limit of J_T produces) or -1 (the commonly printed form).

/// Where the evaluand of the dB-integral is taken on each grid step.
enum class Evaluand {
    left,   // Ito: f(u_k) (B(u_{k+1}) - B(u_k))
    right,  // f(u_{k+1}) (B(u_{k+1}) - B(u_k)); converges to a different law
};

enum class SecondTermSign { plus, minus };

struct LimitOptions {
    Evaluand evaluand = Evaluand::left;
    SecondTermSign sign = SecondTermSign::plus;
    unsigned workers = 0;  // 0 = hardware concurrency
};

struct LimitSample {
    std::vector<double> draws;
    std::vector<double> first_terms;   // A / (2 sqrt(D))
    std::vector<double> second_terms;  // M / sqrt(D), N(0,1) under the Ito evaluand
    double lambda = 0.0;
    long grid_steps = 0;
    long paths = 0;
};

/// Simulates `paths` realizations on a grid of `grid_steps` steps over [0, 1].
/// Riemann sums run over the grid points u_k = k/N with u_k >= lambda (the
/// first one is ceil(lambda N)/N). Path i uses substream (seed, i), so output
/// does not depend on the worker count.
LimitSample simulate_expanding_limit(double lambda, long grid_steps, long paths, std::uint64_t seed,
                                     const LimitOptions& options = {});

struct Table2Row {
    double lambda = 0.0;
    double q95_abs = 0.0;      // 95% quantile of |draw|
    double size_at_196 = 0.0;  // fraction of |draw| > 1.96
};

Table2Row table2_row(double lambda, long grid_steps, long paths, std::uint64_t seed,
                     const LimitOptions& options = {});
Table2Row table2_row(const LimitSample& sample);

}  // namespace fceval
