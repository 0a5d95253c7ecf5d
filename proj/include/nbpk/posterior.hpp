#ifndef NBPK_POSTERIOR_HPP
#define NBPK_POSTERIOR_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "nbpk/grid_sampler.hpp"
#include "nbpk/levy_model.hpp"
#include "nbpk/partitions.hpp"
#include "nbpk/quadrature.hpp"
#include "nbpk/random.hpp"

namespace nbpk {

/// Raw prediction weights. They add up to the EPPF rather than to one:
///   omega0 + (1/n) sum_i omega_i = p(n).
/// Everything is held in log form since p(n) underflows quickly in n.
struct PredictiveWeights {
  double log_omega0 = 0.0;
  /// Same weight through the g_{r+1} representation; agrees with log_omega0
  /// up to quadrature error.
  double log_omega0_alt = 0.0;
  std::vector<double> log_omega;
  double log_eppf = 0.0;
  int n = 0;

  double omega0() const;
  std::vector<double> omega() const;
  double eppf() const;
};

/// log g_r(v, n) = log[ r^{[k]} / psi(v)^{r+k} * v^{n-1} / Gamma(n) * prod_i pi_{n_i}(v) ].
double log_g_r(const ModelParamsR& params, const Configuration& config, double v);
double log_g_r_at_log(const ModelParamsR& params, const Configuration& config, double log_v);

/// log[v g_r(v, n)] at v = exp(x): the density of x = log V, up to p(n).
/// Assembled from log(v^{n_i} pi_{n_i}) so it stays accurate for huge x.
double log_g_r_in_x(const ModelParamsR& params, const Configuration& config, double x);

namespace detail {
/// Assembles log g_r from its pieces. Split out so the log-linearity in the
/// pi product can be checked on its own.
double assemble_log_g_r(double r, int k, int n, double log_psi, double log_v, double log_pi_sum);
/// log int_R h(x) dx = log int_0^inf f(v) dv where h(x) = v f(v) at v = e^x,
/// under the change of variable selected in spec.
double integrate_over_v(const LogFunction& log_h_of_x, const QuadratureSpec& spec);
}  // namespace detail

/// log p(n) = log int_0^inf g_r(v, n) dv.
double log_eppf(const ModelParamsR& params, const Configuration& config, const QuadratureSpec& spec = {});

PredictiveWeights predictive_weights(const ModelParamsR& params, const Configuration& config,
                                     const QuadratureSpec& spec = {});

/// (omega0, omega_1 / n, ..., omega_k / n) / p(n): probabilities of a new block
/// and of joining each existing block.
std::vector<double> normalized_predictive(const ModelParamsR& params, const Configuration& config,
                                          const QuadratureSpec& spec = {});

/// |omega0 + (1/n) sum omega_i - p(n)| / p(n).
double check_nune(const ModelParamsR& params, const Configuration& config, const QuadratureSpec& spec = {});

/// |sum over partitions of n of (partition coefficient) * p(n) - 1|.
double check_nunf(const ModelParamsR& params, int n, const QuadratureSpec& spec = {});

/// Exact partition-class probabilities for sample size n: element i belongs
/// to the i-th partition produced by for_each_partition(n).
std::vector<double> partition_class_probabilities(const ModelParamsR& params, int n,
                                                  const QuadratureSpec& spec = {});

/// Draws from the density s^{n_i} e^{-vs} rho(s) / pi_{n_i}(v). Generic
/// densities build one grid at construction and reuse it for every draw.
class JumpSampler {
 public:
  JumpSampler(const ModelParamsR& params, int n_i, double v, std::int64_t max_rejections = 1'000'000);

  double sample(Rng& rng) const;

 private:
  LevyModel model_;
  int n_i_;
  double v_;
  std::int64_t max_rejections_;
  std::shared_ptr<const GridSampler> grid_;
};

/// One draw from the density s^{n_i} e^{-vs} rho(s) / pi_{n_i}(v).
double sample_jump_given_v(const ModelParamsR& params, int n_i, double v, Rng& rng,
                           std::int64_t max_rejections = 1'000'000);

}  // namespace nbpk

#endif  // NBPK_POSTERIOR_HPP
