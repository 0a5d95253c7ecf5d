#include "nbpk/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nbpk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIterations = 100000;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log of the series sum_{k>=0} x^k / (s (s+1) ... (s+k)).
double log_gamma_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= x / (s + k);
    sum += term;
    if (term < sum * 1e-17) return std::log(sum);
  }
  throw std::runtime_error("incomplete gamma series failed to converge");
}

// log of the continued fraction for Gamma(s, x) e^x x^{-s} (modified Lentz).
double log_gamma_continued_fraction(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) return std::log(h);
  }
  throw std::runtime_error("incomplete gamma continued fraction failed to converge");
}

void check_shape(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::domain_error("incomplete gamma: shape must be positive, got " + std::to_string(s));
  }
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  if (std::isinf(x)) return kInf;
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    a += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double log_lower_incomplete_gamma(double s, double log_x) {
  check_shape(s);
  if (std::isnan(log_x)) throw std::domain_error("incomplete gamma: NaN argument");
  if (log_x == -kInf) return -kInf;
  if (log_x == kInf) return log_gamma(s);
  const double x = std::exp(log_x);
  if (x < s + 1.0) {
    return s * log_x - x + log_gamma_series(s, x);
  }
  const double lg = log_gamma(s);
  // Gamma(s, x) < x^{s-1} e^{-x} (for s <= 1, x >= 1) and is far below lg well before x overflows.
  if (x - std::max(s - 1.0, 0.0) * log_x > lg + 800.0) return lg;
  const double log_upper = s * log_x - x + log_gamma_continued_fraction(s, x);
  return lg + std::log1p(-std::exp(log_upper - lg));
}

double log_upper_incomplete_gamma(double s, double log_x) {
  check_shape(s);
  if (std::isnan(log_x)) throw std::domain_error("incomplete gamma: NaN argument");
  if (log_x == -kInf) return log_gamma(s);
  if (log_x == kInf) return -kInf;
  const double x = std::exp(log_x);
  if (x < s + 1.0) {
    const double lg = log_gamma(s);
    const double log_lower = s * log_x - x + log_gamma_series(s, x);
    return lg + log1m_exp(std::min(0.0, log_lower - lg));
  }
  if (!std::isfinite(x)) return -kInf;
  return s * log_x - x + log_gamma_continued_fraction(s, x);
}

double lower_incomplete_gamma(double s, double x) {
  if (x < 0.0) throw std::domain_error("lower_incomplete_gamma: x must be nonnegative");
  return std::exp(log_lower_incomplete_gamma(s, std::log(x)));
}

double regularized_gamma_p(double s, double x) {
  if (x < 0.0) throw std::domain_error("regularized_gamma_p: x must be nonnegative");
  return std::exp(log_lower_incomplete_gamma(s, std::log(x)) - log_gamma(s));
}

double regularized_gamma_q(double s, double x) {
  if (x < 0.0) throw std::domain_error("regularized_gamma_q: x must be nonnegative");
  return std::exp(log_upper_incomplete_gamma(s, std::log(x)) - log_gamma(s));
}

double chi_square_sf(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -kInf;
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (hi == -kInf || hi == kInf) return hi;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

double softplus(double x) {
  if (x > 40.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

double log1m_exp(double x) {
  if (x > 0.0) throw std::domain_error("log1m_exp: argument must be nonpositive");
  // Split at -log 2 to keep both branches accurate.
  return x > -std::numbers::ln2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

}  // namespace nbpk
