#include "nbpk/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nbpk/special_functions.hpp"

namespace nbpk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTabulatedOrders = 256;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie strictly inside (0, 1)");
  }
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Stable: return "stable";
    case ModelKind::Gamma: return "gamma";
    case ModelKind::GeneralizedGamma: return "gengamma";
    case ModelKind::TruncatedStable: return "truncstable";
    case ModelKind::Generic: return "generic";
  }
  return "unknown";
}

struct LevyModel::GenericDensity {
  LogFunction log_density;
  QuadratureSpec inner;
};

LevyModel::LevyModel(ModelKind kind, double alpha, double theta) : kind_(kind), alpha_(alpha), theta_(theta) {
  if (kind_ == ModelKind::Generic) return;
  pi_constants_.resize(kTabulatedOrders + 1, 0.0);
  for (int n = 1; n <= kTabulatedOrders; ++n) pi_constants_[n] = pi_constant(n);
}

LevyModel LevyModel::stable(double alpha) {
  require_alpha(alpha);
  return LevyModel(ModelKind::Stable, alpha, 0.0);
}

LevyModel LevyModel::gamma(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be positive");
  return LevyModel(ModelKind::Gamma, 0.0, theta);
}

LevyModel LevyModel::generalized_gamma(double alpha) {
  require_alpha(alpha);
  return LevyModel(ModelKind::GeneralizedGamma, alpha, 0.0);
}

LevyModel LevyModel::truncated_stable(double alpha) {
  require_alpha(alpha);
  return LevyModel(ModelKind::TruncatedStable, alpha, 0.0);
}

LevyModel LevyModel::generic(LogFunction log_density, QuadratureSpec inner) {
  if (!log_density) throw std::invalid_argument("generic model needs a density");
  inner.validate();
  for (double s : {1e-9, 1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double value = log_density(s);
    if (std::isnan(value) || value == kInf) {
      throw std::invalid_argument("generic density must be finite on (0, inf)");
    }
  }
  // Infinite activity: s rho(s) may not fall off like s^{0.1} or faster near 0.
  if (!(log_density(1e-12) - log_density(1e-6) > 0.9 * std::log(1e6))) {
    throw std::invalid_argument("generic density must have infinite mass near 0");
  }
  LevyModel model(ModelKind::Generic, 0.0, 0.0);
  model.generic_ = std::make_shared<const GenericDensity>(GenericDensity{std::move(log_density), inner});
  const auto& rho = model.generic_->log_density;
  try {
    const double near_zero = log_integrate_real_line(
        [&](double y) { return y < 0.0 ? 2.0 * y + rho(std::exp(y)) : -kInf; }, inner);
    const double tail = log_integrate_real_line(
        [&](double y) { return y > 0.0 ? y + rho(std::exp(y)) : -kInf; }, inner);
    if (!std::isfinite(near_zero) && near_zero != -kInf) throw std::invalid_argument("s rho(s) not integrable");
    if (!std::isfinite(tail) && tail != -kInf) throw std::invalid_argument("rho not integrable at infinity");
  } catch (const NumericalError& e) {
    throw std::invalid_argument(std::string("generic density failed integrability probe: ") + e.what());
  }
  return model;
}

std::string LevyModel::describe() const {
  std::ostringstream out;
  out << to_string(kind_);
  if (kind_ == ModelKind::Gamma) {
    out << "(theta=" << theta_ << ")";
  } else if (kind_ != ModelKind::Generic) {
    out << "(alpha=" << alpha_ << ")";
  }
  return out.str();
}

double LevyModel::log_density(double s) const {
  if (!(s > 0.0)) return -kInf;
  const double log_s = std::log(s);
  switch (kind_) {
    case ModelKind::Stable:
      return std::log(alpha_) - log_gamma(1.0 - alpha_) - (alpha_ + 1.0) * log_s;
    case ModelKind::Gamma:
      return std::log(theta_) - log_s - s;
    case ModelKind::GeneralizedGamma:
      return std::log(alpha_) - log_gamma(1.0 - alpha_) - (alpha_ + 1.0) * log_s - s;
    case ModelKind::TruncatedStable:
      return s <= 1.0 ? std::log(alpha_) - (alpha_ + 1.0) * log_s : -kInf;
    case ModelKind::Generic:
      return generic_->log_density(s);
  }
  return -kInf;
}

double LevyModel::pi_constant(int n) const {
  if (n <= kTabulatedOrders && !pi_constants_.empty() && pi_constants_[n] != 0.0) return pi_constants_[n];
  switch (kind_) {
    case ModelKind::Stable:
    case ModelKind::GeneralizedGamma:
      return std::log(alpha_) + log_gamma(n - alpha_) - log_gamma(1.0 - alpha_);
    case ModelKind::Gamma:
      return std::log(theta_) + log_gamma(static_cast<double>(n));
    case ModelKind::TruncatedStable:
      return std::log(alpha_);
    case ModelKind::Generic:
      break;
  }
  return 0.0;
}

double LevyModel::log_psi_at_log(double log_v) const {
  if (std::isnan(log_v)) throw std::domain_error("psi: NaN argument");
  if (log_v == -kInf) return 0.0;
  switch (kind_) {
    case ModelKind::Stable:
      return softplus(alpha_ * log_v);
    case ModelKind::Gamma:
      return std::log1p(theta_ * softplus(log_v));
    case ModelKind::GeneralizedGamma:
      return alpha_ * softplus(log_v);
    case ModelKind::TruncatedStable: {
      // psi(v) = e^{-v} + v^alpha gamma(1 - alpha, v), by parts from the definition.
      const double v = std::exp(log_v);
      return log_add_exp(-v, alpha_ * log_v + log_lower_incomplete_gamma(1.0 - alpha_, log_v));
    }
    case ModelKind::Generic: {
      const auto& rho = generic_->log_density;
      const double log_excess = log_integrate_real_line(
          [&](double y) {
            const double r = rho(std::exp(y));
            if (r == -kInf) return -kInf;
            return log1m_exp(-std::exp(log_v + y)) + r + y;
          },
          generic_->inner);
      if (!std::isfinite(log_excess) && log_excess != -kInf) {
        throw NumericalError("generic psi diverged; density is not a valid Levy density");
      }
      return softplus(log_excess);
    }
  }
  return 0.0;
}

double LevyModel::log_pi_at_log(int n, double log_v) const {
  if (n < 1) throw std::domain_error("pi_n: n must be at least 1");
  if (std::isnan(log_v) || log_v == -kInf) throw std::domain_error("pi_n: v must be positive");
  switch (kind_) {
    case ModelKind::Stable:
      return pi_constant(n) + (alpha_ - n) * log_v;
    case ModelKind::Gamma:
      return pi_constant(n) - n * softplus(log_v);
    case ModelKind::GeneralizedGamma:
      return pi_constant(n) + (alpha_ - n) * softplus(log_v);
    case ModelKind::TruncatedStable:
      return pi_constant(n) + (alpha_ - n) * log_v + log_lower_incomplete_gamma(n - alpha_, log_v);
    case ModelKind::Generic: {
      const auto& rho = generic_->log_density;
      const double value = log_integrate_real_line(
          [&](double y) {
            const double r = rho(std::exp(y));
            if (r == -kInf) return -kInf;
            return (n + 1.0) * y + r - std::exp(log_v + y);
          },
          generic_->inner);
      if (!std::isfinite(value)) throw NumericalError("generic pi_n is not finite");
      return value;
    }
  }
  return 0.0;
}

double LevyModel::log_pi_sum_at_log(std::span<const int> counts, double log_v) const {
  double sum = 0.0;
  for (int n : counts) sum += log_pi_at_log(n, log_v);
  return sum;
}

double LevyModel::log_scaled_pi_at_log(int n, double log_v) const {
  if (n < 1) throw std::domain_error("pi_n: n must be at least 1");
  if (std::isnan(log_v) || log_v == -kInf) throw std::domain_error("pi_n: v must be positive");
  switch (kind_) {
    case ModelKind::Stable:
      return pi_constant(n) + alpha_ * log_v;
    case ModelKind::Gamma:
      return pi_constant(n) - n * softplus(-log_v);
    case ModelKind::GeneralizedGamma:
      return pi_constant(n) + alpha_ * softplus(log_v) - n * softplus(-log_v);
    case ModelKind::TruncatedStable:
      return pi_constant(n) + alpha_ * log_v + log_lower_incomplete_gamma(n - alpha_, log_v);
    case ModelKind::Generic:
      break;
  }
  return n * log_v + log_pi_at_log(n, log_v);
}

double LevyModel::log_scaled_pi_sum_at_log(std::span<const int> counts, double log_v) const {
  double sum = 0.0;
  for (int n : counts) sum += log_scaled_pi_at_log(n, log_v);
  return sum;
}

double LevyModel::psi(double v) const {
  if (!(v >= 0.0)) throw std::domain_error("psi: v must be nonnegative");
  if (v == 0.0) return 1.0;
  return std::exp(log_psi_at_log(std::log(v)));
}

double LevyModel::log_pi_n(int n, double v) const {
  if (!(v > 0.0)) throw std::domain_error("log_pi_n: v must be positive");
  return log_pi_at_log(n, std::log(v));
}

ModelParamsR::ModelParamsR(LevyModel model_, double r_) : model(std::move(model_)), r(r_) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be positive");
}

}  // namespace nbpk
