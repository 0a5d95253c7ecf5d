#ifndef NBPK_SPECIAL_FUNCTIONS_HPP
#define NBPK_SPECIAL_FUNCTIONS_HPP

#include <span>

namespace nbpk {

/// log Gamma(x) for x > 0 (Lanczos, g = 7).
double log_gamma(double x);

/// Lower incomplete gamma function gamma(s, x) = int_0^x t^{s-1} e^{-t} dt.
/// Series for x < s + 1, continued fraction for the complement otherwise.
/// Throws std::domain_error for s <= 0 or x < 0.
double lower_incomplete_gamma(double s, double x);

/// log gamma(s, e^{log_x}). Accepts log_x = -inf (returns -inf) and +inf
/// (returns log Gamma(s)), so callers may work with arguments outside the
/// range of double.
double log_lower_incomplete_gamma(double s, double log_x);

/// log Gamma(s, e^{log_x}), the upper incomplete gamma function.
double log_upper_incomplete_gamma(double s, double log_x);

/// Regularized P(s, x) = gamma(s, x) / Gamma(s).
double regularized_gamma_p(double s, double x);

/// Regularized Q(s, x) = 1 - P(s, x), computed without cancellation in the tail.
double regularized_gamma_q(double s, double x);

/// Upper tail probability of a chi-square variate with `dof` degrees of freedom.
double chi_square_sf(double statistic, double dof);

// log-space helpers

double log_add_exp(double a, double b);
double log_sum_exp(std::span<const double> xs);
/// log(1 + e^x) without overflow.
double softplus(double x);
/// log(1 - e^x) for x <= 0.
double log1m_exp(double x);

}  // namespace nbpk

#endif  // NBPK_SPECIAL_FUNCTIONS_HPP
