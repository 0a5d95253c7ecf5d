#ifndef NBPK_SAMPLER_HPP
#define NBPK_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "nbpk/grid_sampler.hpp"
#include "nbpk/levy_model.hpp"
#include "nbpk/partitions.hpp"
#include "nbpk/random.hpp"

namespace nbpk {

/// Multiplier on pi_1/psi in the new-block weight of the urn step.
enum class NewBlockFactor {
  Blocks,        ///< r + k, k the current number of blocks
  Observations,  ///< r + l, l the current number of observations
};

/// Density the auxiliary variable is drawn from before each urn step.
enum class VDraw {
  /// g_r(v, n) * (v / n) * [(r+k) pi_1/psi + sum_i pi_{n_i+1}/pi_{n_i}]. With this
  /// choice the step probabilities average to the exact predictive rule.
  PredictiveAugmented,
  /// g_r(v, n) itself.
  Posterior,
};

struct UrnOptions {
  NewBlockFactor factor = NewBlockFactor::Blocks;
  VDraw v_draw = VDraw::PredictiveAugmented;
  bool record_v_trace = false;
  double grid_rel_tol = 1e-6;
};

struct ChainState {
  std::vector<int> counts;  // order of appearance
  double log_v = 0.0;
  std::int64_t step = 0;
  Rng rng;

  double v() const;
};

struct GibbsSampleRecord {
  Configuration final_config{std::vector<int>{1}};
  int k = 1;
  AfsVector afs{std::vector<int>{1}};
  std::optional<std::vector<double>> v_trace;
  std::uint64_t seed = 0;
};

/// Draws from the density proportional to g_r(v, n) for a fixed configuration,
/// reusing one grid for every draw.
class VSampler {
 public:
  VSampler(const ModelParamsR& params, const Configuration& config, double grid_rel_tol = 1e-6);

  double sample_log(Rng& rng) const { return grid_.sample(rng); }
  double sample(Rng& rng) const;

 private:
  GridSampler grid_;
};

/// log V for V drawn from the density proportional to g_r(v, n).
double sample_log_v(const ModelParamsR& params, const Configuration& config, Rng& rng,
                    double grid_rel_tol = 1e-6);
double sample_v(const ModelParamsR& params, const Configuration& config, Rng& rng, double grid_rel_tol = 1e-6);

/// Normalised probabilities (new block, block 1, ..., block k) of the urn
/// step given V = exp(log_v). With no observations yet the result is {1}.
std::vector<double> urn_step_probabilities(const ModelParamsR& params, std::span<const int> counts, double log_v,
                                           NewBlockFactor factor = NewBlockFactor::Blocks);

/// Adds one observation to state using state.log_v.
void urn_step(const ModelParamsR& params, ChainState& state, NewBlockFactor factor = NewBlockFactor::Blocks);

/// Runs the urn scheme with cached V grids. One instance serves any number
/// of chains for the same parameters; it is not thread-safe.
class UrnSampler {
 public:
  explicit UrnSampler(ModelParamsR params, UrnOptions options = {});

  const ModelParamsR& params() const { return params_; }
  const UrnOptions& options() const { return options_; }

  /// Draws log V for the current counts (or V_0 when counts are empty).
  double draw_log_v(std::span<const int> counts, Rng& rng);

  GibbsSampleRecord run_chain(int n_target, std::uint64_t seed);

  /// Histogram of K_n over replications with seeds seed, seed+1, ...;
  /// element k counts chains ending with k blocks (element 0 is unused).
  std::vector<std::int64_t> kn_histogram(int n, std::int64_t replications, std::uint64_t seed);

 private:
  const GridSampler& grid_for(std::span<const int> counts);

  ModelParamsR params_;
  UrnOptions options_;
  std::map<std::vector<int>, std::unique_ptr<GridSampler>> grids_;
};

GibbsSampleRecord run_chain(const ModelParamsR& params, int n_target, std::uint64_t seed,
                            const UrnOptions& options = {});

std::vector<std::int64_t> kn_posterior_mc(const ModelParamsR& params, int n, std::int64_t replications,
                                          std::uint64_t seed, const UrnOptions& options = {});

}  // namespace nbpk

#endif  // NBPK_SAMPLER_HPP
