#pragma once

#include <functional>
#include <span>

namespace fceval {

/// Standard normal CDF.
double normal_cdf(double x);

/// Regularized incomplete beta function I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t CDF with df degrees of freedom.
double student_t_cdf(double x, int df);

/// P(|T| > |x|) for T ~ t(df), computed directly from the tail rather than 1 - CDF.
double student_t_two_sided_p(double x, int df);

/// Student-t quantile, found by bracketing and bisection on student_t_cdf.
double student_t_quantile(double p, int df);

/// Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)| of a sample from a continuous CDF.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

}  // namespace fceval
