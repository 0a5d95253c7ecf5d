#include "nbpk/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nbpk/coalescent.hpp"
#include "nbpk/posterior.hpp"
#include "nbpk/special_functions.hpp"

namespace nbpk {

namespace {

constexpr double kIdentityTol = 1e-6;

std::string format(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

std::string model_label(const ModelParamsR& params) {
  return params.model.describe() + " r=" + format(params.r);
}

CheckResult make(const std::string& suite, std::string label, double residual, double tol) {
  return {suite, std::move(label), residual, tol, std::isfinite(residual) && residual < tol};
}

std::vector<Configuration> partitions_of(int n) {
  std::vector<Configuration> out;
  for_each_partition(n, [&](std::span<const int> parts) {
    out.emplace_back(std::vector<int>(parts.begin(), parts.end()));
  });
  return out;
}

const std::vector<double>& alpha_grid() {
  static const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  return grid;
}

void suite_nunf(const ValidationOptions& opt, const std::vector<ModelParamsR>& models, std::vector<CheckResult>& out) {
  for (const auto& params : models) {
    for (int n = 1; n <= opt.n_max; ++n) {
      out.push_back(make("nunf", model_label(params) + " n=" + std::to_string(n),
                         check_nunf(params, n, opt.quadrature), kIdentityTol));
    }
  }
}

void suite_nune(const ValidationOptions& opt, const std::vector<ModelParamsR>& models, std::vector<CheckResult>& out) {
  for (const auto& params : models) {
    for (int n = 1; n <= opt.n_max; ++n) {
      double worst = 0.0;
      for (const auto& config : partitions_of(n)) worst = std::max(worst, check_nune(params, config, opt.quadrature));
      out.push_back(make("nune", model_label(params) + " n=" + std::to_string(n), worst, kIdentityTol));
    }
  }
}

void suite_pd(const ValidationOptions& opt, std::vector<CheckResult>& out) {
  for (double alpha : alpha_grid()) {
    for (double theta : {0.5, 1.0, 2.0, 5.0}) {
      const ModelParamsR params(LevyModel::generalized_gamma(alpha), theta / alpha);
      double eppf_err = 0.0;
      double pred_err = 0.0;
      for (int n = 1; n <= opt.n_max; ++n) {
        for (const auto& config : partitions_of(n)) {
          eppf_err = std::max(eppf_err, std::fabs(log_eppf(params, config, opt.quadrature) -
                                                  pd_log_eppf(alpha, theta, config)));
          const auto pred = normalized_predictive(params, config, opt.quadrature);
          const double denom = theta + n;
          pred_err = std::max(pred_err, std::fabs(pred[0] - (theta + config.blocks() * alpha) / denom));
          for (int i = 0; i < config.blocks(); ++i) {
            pred_err = std::max(pred_err, std::fabs(pred[i + 1] - (config[i] - alpha) / denom));
          }
        }
      }
      const std::string label = "alpha=" + format(alpha) + " theta=" + format(theta);
      out.push_back(make("pd", label + " eppf", eppf_err, kIdentityTol));
      out.push_back(make("pd", label + " predictive", pred_err, kIdentityTol));
    }
  }
}

void suite_rindep(const ValidationOptions& opt, std::vector<CheckResult>& out) {
  for (double alpha : alpha_grid()) {
    double spread = 0.0;
    double oracle = 0.0;
    for (int n = 1; n <= opt.n_max; ++n) {
      for (const auto& config : partitions_of(n)) {
        double lo = INFINITY;
        double hi = -INFINITY;
        for (double r : {0.2, 1.0, 5.0, 25.0}) {
          const double value = log_eppf(ModelParamsR(LevyModel::stable(alpha), r), config, opt.quadrature);
          lo = std::min(lo, value);
          hi = std::max(hi, value);
          oracle = std::max(oracle, std::fabs(value - pd_log_eppf(alpha, 0.0, config)));
        }
        spread = std::max(spread, hi - lo);
      }
    }
    out.push_back(make("rindep", "stable alpha=" + format(alpha) + " spread over r", spread, 1e-8));
    out.push_back(make("rindep", "stable alpha=" + format(alpha) + " vs PD(alpha,0)", oracle, kIdentityTol));
  }
}

void suite_derivative(const std::vector<ModelParamsR>& models, std::vector<CheckResult>& out) {
  for (const auto& params : models) {
    const auto& model = params.model;
    double worst = 0.0;
    for (double v : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const double h = 1e-3 * v;
      const double dpsi = central_difference([&](double u) { return model.psi(u); }, v, h);
      worst = std::max(worst, std::fabs(dpsi / std::exp(model.log_pi_n(1, v)) - 1.0));
      for (int n = 2; n <= 10; ++n) {
        const double d = central_difference([&](double u) { return std::exp(model.log_pi_n(n - 1, u)); }, v, h);
        worst = std::max(worst, std::fabs(-d / std::exp(model.log_pi_n(n, v)) - 1.0));
      }
    }
    out.push_back(make("derivative", model_label(params), worst, 1e-5));
  }
}

void suite_predictive(const ValidationOptions& opt, const std::vector<ModelParamsR>& models,
                      std::vector<CheckResult>& out) {
  for (const auto& params : models) {
    double worst = 0.0;
    for (int n = 1; n <= opt.n_max; ++n) {
      for (const auto& config : partitions_of(n)) {
        const auto weights = predictive_weights(params, config, opt.quadrature);
        worst = std::max(worst, std::fabs(std::expm1(weights.log_omega0_alt - weights.log_omega0)));
      }
    }
    out.push_back(make("predictive", model_label(params) + " omega0 two forms", worst, kIdentityTol));
  }
}

void suite_coalescent(const ValidationOptions& opt, const std::vector<ModelParamsR>& models,
                      std::vector<CheckResult>& out) {
  for (const auto& params : models) {
    double identity = 0.0;
    double routes = 0.0;
    for (int n = 2; n <= opt.n_max; ++n) {
      for (const auto& config : partitions_of(n)) {
        const auto terms = backward_event_probabilities(params, config, opt.quadrature);
        identity = std::max(identity, std::fabs(std::expm1(terms.log_sum - terms.log_eppf)));
        for (int i = 0; i < config.blocks(); ++i) {
          const double direct = ratio_integrals(params, config, i, opt.quadrature);
          routes = std::max(routes, std::fabs(direct / terms.ratios[i] - 1.0));
        }
      }
    }
    out.push_back(make("coalescent", model_label(params) + " backward terms sum to p(n)", identity, 1e-5));
    out.push_back(make("coalescent", model_label(params) + " ratio routes agree", routes, 1e-8));
  }
  const int n = std::min(std::max(opt.n_max, 2), kMaxExactSolverSize);
  const Configuration start(std::vector<int>(n, 1));
  double worst = 0.0;
  for (double h : h_solver_exact(start, RateFunction::total_n(), [](const Configuration&) { return 1.0; },
                                 {0.0, 0.1, 1.0, 10.0})) {
    worst = std::max(worst, std::fabs(h - 1.0));
  }
  out.push_back(make("coalescent", "H solver keeps h0 = 1 (n=" + std::to_string(n) + ")", worst, 1e-9));
}

}  // namespace

std::vector<ModelParamsR> default_validation_models() {
  return {ModelParamsR(LevyModel::stable(0.5), 1.5), ModelParamsR(LevyModel::gamma(1.0), 2.0),
          ModelParamsR(LevyModel::generalized_gamma(0.5), 2.0), ModelParamsR(LevyModel::truncated_stable(0.5), 2.0)};
}

const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names{"nunf", "nune", "pd", "derivative", "rindep", "predictive", "coalescent"};
  return names;
}

std::vector<CheckResult> run_validation(const std::string& suite, const ValidationOptions& options) {
  if (options.n_max < 1) throw std::invalid_argument("validation n_max must be at least 1");
  const auto models = options.models.empty() ? default_validation_models() : options.models;
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (const auto& name : validation_suites()) {
      auto part = run_validation(name, options);
      out.insert(out.end(), part.begin(), part.end());
    }
  } else if (suite == "nunf") {
    suite_nunf(options, models, out);
  } else if (suite == "nune") {
    suite_nune(options, models, out);
  } else if (suite == "pd") {
    suite_pd(options, out);
  } else if (suite == "derivative") {
    suite_derivative(models, out);
  } else if (suite == "rindep") {
    suite_rindep(options, out);
  } else if (suite == "predictive") {
    suite_predictive(options, models, out);
  } else if (suite == "coalescent") {
    suite_coalescent(options, models, out);
  } else {
    throw std::invalid_argument("unknown validation suite '" + suite + "'");
  }
  return out;
}

double pd_log_eppf(double alpha, double theta, const Configuration& config) {
  const int n = config.total();
  double value = 0.0;
  for (int i = 1; i < config.blocks(); ++i) value += std::log(theta + i * alpha);
  for (int c : config.counts()) value += log_gamma(c - alpha) - log_gamma(1.0 - alpha);
  value -= log_gamma(theta + n) - log_gamma(theta + 1.0);
  return value;
}

double central_difference(const std::function<double(double)>& f, double v, double h) {
  return (f(v - 2.0 * h) - 8.0 * f(v - h) + 8.0 * f(v + h) - f(v + 2.0 * h)) / (12.0 * h);
}

}  // namespace nbpk
