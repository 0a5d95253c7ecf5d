#ifndef NBPK_LEVY_MODEL_HPP
#define NBPK_LEVY_MODEL_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nbpk/quadrature.hpp"

namespace nbpk {

enum class ModelKind { Stable, Gamma, GeneralizedGamma, TruncatedStable, Generic };

std::string to_string(ModelKind kind);

/// A Levy density rho on (0, inf) together with the two functionals the
/// partition model needs:
///
///   psi(v)  = 1 + int (1 - e^{-vx}) rho(x) dx
///   pi_n(v) = int x^n e^{-vx} rho(x) dx
///
/// Built-in densities:
///   Stable            alpha / Gamma(1-alpha) x^{-alpha-1}
///   Gamma             theta x^{-1} e^{-x}
///   GeneralizedGamma  alpha / Gamma(1-alpha) x^{-alpha-1} e^{-x}
///   TruncatedStable   alpha x^{-alpha-1} on (0, 1]
/// evaluate in closed form. Generic densities go through nested quadrature.
///
/// Every evaluation has a `_at_log` variant taking log v, which stays finite
/// for v beyond the range of double; posterior integrals rely on it.
class LevyModel {
 public:
  static LevyModel stable(double alpha);
  static LevyModel gamma(double theta);
  static LevyModel generalized_gamma(double alpha);
  static LevyModel truncated_stable(double alpha);

  /// `log_density` returns log rho(s) (-inf where rho vanishes). Construction
  /// probes that rho is finite, has infinite mass near 0, and that s rho(s) is integrable
  /// near 0 and rho integrable away from 0; those probes cannot prove the
  /// conditions, so the caller remains responsible for them.
  static LevyModel generic(LogFunction log_density, QuadratureSpec inner = {1e-12, 4000, Transform::LogSinh});

  ModelKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  std::string describe() const;

  /// log rho(s).
  double log_density(double s) const;

  /// psi(v) for v >= 0.
  double psi(double v) const;
  /// log pi_n(v) for n >= 1, v > 0. Throws std::domain_error otherwise.
  double log_pi_n(int n, double v) const;

  double log_psi_at_log(double log_v) const;
  double log_pi_at_log(int n, double log_v) const;
  /// sum_i log pi_{counts[i]}(v).
  double log_pi_sum_at_log(std::span<const int> counts, double log_v) const;

  /// log(v^n pi_n(v)), free of the cancellation between n log v and log pi_n
  /// at large v.
  double log_scaled_pi_at_log(int n, double log_v) const;
  double log_scaled_pi_sum_at_log(std::span<const int> counts, double log_v) const;

 private:
  struct GenericDensity;

  LevyModel(ModelKind kind, double alpha, double theta);
  double pi_constant(int n) const;

  ModelKind kind_;
  double alpha_ = 0.0;
  double theta_ = 0.0;
  std::vector<double> pi_constants_;
  std::shared_ptr<const GenericDensity> generic_;
};

/// A Levy density together with the negative binomial shape r > 0.
struct ModelParamsR {
  ModelParamsR(LevyModel model_, double r_);

  LevyModel model;
  double r;
};

}  // namespace nbpk

#endif  // NBPK_LEVY_MODEL_HPP
