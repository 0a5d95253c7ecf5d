#ifndef NBPK_VALIDATION_HPP
#define NBPK_VALIDATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "nbpk/levy_model.hpp"
#include "nbpk/partitions.hpp"
#include "nbpk/quadrature.hpp"

namespace nbpk {

struct CheckResult {
  std::string suite;
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ValidationOptions {
  int n_max = 5;
  /// Models the model-dependent suites run over; empty means default_validation_models().
  std::vector<ModelParamsR> models;
  QuadratureSpec quadrature{};
};

/// One representative per built-in density.
std::vector<ModelParamsR> default_validation_models();

/// Suite names accepted by run_validation, in run order for "all".
const std::vector<std::string>& validation_suites();

/// Runs a named suite ("nunf", "nune", "pd", "derivative", "rindep",
/// "predictive", "coalescent" or "all"). Unknown names throw std::invalid_argument.
std::vector<CheckResult> run_validation(const std::string& suite, const ValidationOptions& options);

/// Two-parameter Poisson-Dirichlet EPPF, closed form.
double pd_log_eppf(double alpha, double theta, const Configuration& config);

/// Five-point central difference of f at v with step h.
double central_difference(const std::function<double(double)>& f, double v, double h);

}  // namespace nbpk

#endif  // NBPK_VALIDATION_HPP
