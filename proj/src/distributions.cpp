#include "fceval/distributions.hpp"

#include "fceval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace fceval {

double normal_cdf(double x) {
    if (std::isnan(x)) throw DomainError("normal_cdf of NaN");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b); valid
// and fast for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta argument outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double x, int df) {
    if (df < 1) throw DomainError("Student-t needs df >= 1");
    if (std::isnan(x)) throw DomainError("Student-t probability of NaN");
    if (std::isinf(x)) return 0.0;
    const double nu = df;
    return regularized_incomplete_beta(0.5 * nu, 0.5, nu / (nu + x * x));
}

double student_t_cdf(double x, int df) {
    const double tail = 0.5 * student_t_two_sided_p(x, df);
    return x >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, int df) {
    if (df < 1) throw DomainError("Student-t needs df >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");
    if (p == 0.5) return 0.0;

    // Solve on the upper half and reflect; the tail is measured as 1 - p.
    const double upper = p > 0.5 ? p : 1.0 - p;
    const double tail = 1.0 - upper;
    const auto excess = [&](double t) { return 0.5 * student_t_two_sided_p(t, df) - tail; };

    double lo = 0.0;
    double hi = 1.0;
    while (excess(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw DomainError("Student-t quantile bracket overflow");
    }
    for (int i = 0; i < 2000 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double q = 0.5 * (lo + hi);
    return p > 0.5 ? q : -q;
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("KS distance of an empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace fceval
