#include "nbpk/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "nbpk/special_functions.hpp"

namespace nbpk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_rising_factorial(double r, int k) { return log_gamma(r + k) - log_gamma(r); }

// Truncated-stable jump: density s^{a-1} e^{-vs} on (0, 1].
double sample_truncated_gamma(double a, double v, Rng& rng, std::int64_t max_rejections) {
  auto exhausted = [] {
    return NumericalError("sample_jump_given_v: rejection sampler exceeded its iteration cap");
  };
  auto gamma_proposal = [&]() {
    std::gamma_distribution<double> gamma(a, 1.0 / v);
    for (std::int64_t i = 0; i < max_rejections; ++i) {
      const double s = gamma(rng);
      if (s <= 1.0 && s > 0.0) return s;
    }
    throw exhausted();
  };
  if (a < 1.0) {
    if (v > 1.0) return gamma_proposal();
    // Beta(a, 1) proposal; acceptance e^{-vs} >= e^{-1}.
    for (std::int64_t i = 0; i < max_rejections; ++i) {
      const double s = std::pow(uniform_open(rng), 1.0 / a);
      if (uniform_open(rng) < std::exp(-v * s) && s > 0.0) return s;
    }
    throw exhausted();
  }
  if (regularized_gamma_p(a, v) >= 0.25) return gamma_proposal();
  // log-concave: the tangent of the log density at s = 1 is an envelope.
  const double c = (a - 1.0) - v;
  for (std::int64_t i = 0; i < max_rejections; ++i) {
    const double u = uniform_open(rng);
    double s;
    if (std::fabs(c) < 1e-12) {
      s = u;
    } else if (c > 0.0) {
      s = 1.0 + std::log(u + (1.0 - u) * std::exp(-c)) / c;
    } else {
      s = std::log1p(u * std::expm1(c)) / c;
    }
    if (!(s > 0.0)) continue;
    const double log_target = (a - 1.0) * std::log(s) - v * s;
    const double log_envelope = -v + c * (s - 1.0);
    if (std::log(uniform_open(rng)) < log_target - log_envelope) return s;
  }
  throw exhausted();
}

}  // namespace

double PredictiveWeights::omega0() const { return std::exp(log_omega0); }

std::vector<double> PredictiveWeights::omega() const {
  std::vector<double> out;
  out.reserve(log_omega.size());
  for (double w : log_omega) out.push_back(std::exp(w));
  return out;
}

double PredictiveWeights::eppf() const { return std::exp(log_eppf); }

namespace detail {

double integrate_over_v(const LogFunction& log_h_of_x, const QuadratureSpec& spec) {
  if (spec.transform == Transform::LogSinh) return log_integrate_real_line(log_h_of_x, spec);
  return log_integrate_halfline(
      [&](double v) {
        const double x = std::log(v);
        return log_h_of_x(x) - x;
      },
      spec);
}

double assemble_log_g_r(double r, int k, int n, double log_psi, double log_v, double log_pi_sum) {
  const double v_term = n == 1 ? 0.0 : (n - 1) * log_v;
  return log_rising_factorial(r, k) - (r + k) * log_psi + v_term - log_gamma(static_cast<double>(n)) +
         log_pi_sum;
}

}  // namespace detail

using detail::integrate_over_v;

double log_g_r_at_log(const ModelParamsR& params, const Configuration& config, double log_v) {
  const auto& model = params.model;
  return detail::assemble_log_g_r(params.r, config.blocks(), config.total(), model.log_psi_at_log(log_v), log_v,
                                  model.log_pi_sum_at_log(config.counts(), log_v));
}

double log_g_r_in_x(const ModelParamsR& params, const Configuration& config, double x) {
  const int k = config.blocks();
  const auto& model = params.model;
  return log_rising_factorial(params.r, k) - (params.r + k) * model.log_psi_at_log(x) -
         log_gamma(static_cast<double>(config.total())) + model.log_scaled_pi_sum_at_log(config.counts(), x);
}

double log_g_r(const ModelParamsR& params, const Configuration& config, double v) {
  if (!(v > 0.0)) throw std::domain_error("log_g_r: v must be positive");
  return log_g_r_at_log(params, config, std::log(v));
}

double log_eppf(const ModelParamsR& params, const Configuration& config, const QuadratureSpec& spec) {
  return integrate_over_v([&](double x) { return log_g_r_in_x(params, config, x); }, spec);
}

PredictiveWeights predictive_weights(const ModelParamsR& params, const Configuration& config,
                                     const QuadratureSpec& spec) {
  const auto& model = params.model;
  const int k = config.blocks();
  const int n = config.total();
  const double r = params.r;

  PredictiveWeights out;
  out.n = n;
  out.log_eppf = log_eppf(params, config, spec);

  out.log_omega0 = std::log((r + k) / n) +
                   integrate_over_v(
                       [&](double x) {
                         return model.log_scaled_pi_at_log(1, x) - model.log_psi_at_log(x) +
                                log_g_r_in_x(params, config, x);
                       },
                       spec);

  const ModelParamsR shifted(model, r + 1.0);
  out.log_omega0_alt = std::log(r / n) + integrate_over_v(
                                             [&](double x) {
                                               return model.log_scaled_pi_at_log(1, x) +
                                                      log_g_r_in_x(shifted, config, x);
                                             },
                                             spec);

  // omega_i depends on block i only through n_i.
  std::map<int, double> by_size;
  for (int size : config.counts()) {
    if (by_size.count(size)) continue;
    by_size[size] = integrate_over_v(
        [&](double x) {
          return model.log_scaled_pi_at_log(size + 1, x) - model.log_scaled_pi_at_log(size, x) +
                 log_g_r_in_x(params, config, x);
        },
        spec);
  }
  for (int size : config.counts()) out.log_omega.push_back(by_size.at(size));
  return out;
}

std::vector<double> normalized_predictive(const ModelParamsR& params, const Configuration& config,
                                          const QuadratureSpec& spec) {
  const auto weights = predictive_weights(params, config, spec);
  std::vector<double> out;
  out.push_back(std::exp(weights.log_omega0 - weights.log_eppf));
  const double log_n = std::log(static_cast<double>(weights.n));
  for (double w : weights.log_omega) out.push_back(std::exp(w - log_n - weights.log_eppf));
  return out;
}

double check_nune(const ModelParamsR& params, const Configuration& config, const QuadratureSpec& spec) {
  const auto weights = predictive_weights(params, config, spec);
  std::vector<double> terms{weights.log_omega0};
  const double log_n = std::log(static_cast<double>(weights.n));
  for (double w : weights.log_omega) terms.push_back(w - log_n);
  return std::fabs(std::expm1(log_sum_exp(terms) - weights.log_eppf));
}

std::vector<double> partition_class_probabilities(const ModelParamsR& params, int n, const QuadratureSpec& spec) {
  std::vector<double> out;
  for_each_partition(n, [&](std::span<const int> parts) {
    const Configuration config(std::vector<int>(parts.begin(), parts.end()));
    out.push_back(std::exp(log_partition_coefficient(afs(config)) + log_eppf(params, config, spec)));
  });
  return out;
}

double check_nunf(const ModelParamsR& params, int n, const QuadratureSpec& spec) {
  double total = 0.0;
  for (double p : partition_class_probabilities(params, n, spec)) total += p;
  return std::fabs(total - 1.0);
}

JumpSampler::JumpSampler(const ModelParamsR& params, int n_i, double v, std::int64_t max_rejections)
    : model_(params.model), n_i_(n_i), v_(v), max_rejections_(max_rejections) {
  if (n_i < 1) throw std::domain_error("sample_jump_given_v: n_i must be at least 1");
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("sample_jump_given_v: v must be positive");
  if (model_.kind() == ModelKind::Generic) {
    // In y = log s.
    grid_ = std::make_shared<const GridSampler>([this](double y) {
      const double rho = model_.log_density(std::exp(y));
      if (rho == -kInf) return -kInf;
      return (n_i_ + 1.0) * y + rho - v_ * std::exp(y);
    });
  }
}

double JumpSampler::sample(Rng& rng) const {
  switch (model_.kind()) {
    case ModelKind::Gamma: {
      std::gamma_distribution<double> gamma(static_cast<double>(n_i_), 1.0 / (1.0 + v_));
      return gamma(rng);
    }
    case ModelKind::GeneralizedGamma: {
      std::gamma_distribution<double> gamma(n_i_ - model_.alpha(), 1.0 / (1.0 + v_));
      return gamma(rng);
    }
    case ModelKind::Stable: {
      std::gamma_distribution<double> gamma(n_i_ - model_.alpha(), 1.0 / v_);
      return gamma(rng);
    }
    case ModelKind::TruncatedStable:
      return sample_truncated_gamma(n_i_ - model_.alpha(), v_, rng, max_rejections_);
    case ModelKind::Generic:
      return std::exp(grid_->sample(rng));
  }
  throw std::logic_error("unknown model kind");
}

double sample_jump_given_v(const ModelParamsR& params, int n_i, double v, Rng& rng, std::int64_t max_rejections) {
  return JumpSampler(params, n_i, v, max_rejections).sample(rng);
}

}  // namespace nbpk
