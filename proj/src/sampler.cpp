#include "nbpk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nbpk/posterior.hpp"
#include "nbpk/special_functions.hpp"

namespace nbpk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double new_block_multiplier(double r, std::span<const int> counts, NewBlockFactor factor) {
  if (factor == NewBlockFactor::Blocks) return r + static_cast<double>(counts.size());
  return r + std::accumulate(counts.begin(), counts.end(), 0.0);
}

// Unnormalised log weights (new, block 1, ..., block k), each multiplied by v.
std::vector<double> log_step_weights(const ModelParamsR& params, std::span<const int> counts, double log_v,
                                     NewBlockFactor factor) {
  const auto& model = params.model;
  std::vector<double> out;
  out.reserve(counts.size() + 1);
  out.push_back(std::log(new_block_multiplier(params.r, counts, factor)) + model.log_scaled_pi_at_log(1, log_v) -
                model.log_psi_at_log(log_v));
  for (int c : counts) {
    out.push_back(model.log_scaled_pi_at_log(c + 1, log_v) - model.log_scaled_pi_at_log(c, log_v));
  }
  return out;
}

// log density of x = log V under g_r(v, n).
double log_posterior_in_x(const ModelParamsR& params, const Configuration& config, double x) {
  const double value = log_g_r_in_x(params, config, x);
  return std::isnan(value) ? -kInf : value;
}

}  // namespace

double ChainState::v() const { return std::exp(log_v); }

VSampler::VSampler(const ModelParamsR& params, const Configuration& config, double grid_rel_tol)
    : grid_([&](double x) { return log_posterior_in_x(params, config, x); }, grid_rel_tol) {}

double VSampler::sample(Rng& rng) const { return std::exp(grid_.sample(rng)); }

double sample_log_v(const ModelParamsR& params, const Configuration& config, Rng& rng, double grid_rel_tol) {
  return VSampler(params, config, grid_rel_tol).sample_log(rng);
}

double sample_v(const ModelParamsR& params, const Configuration& config, Rng& rng, double grid_rel_tol) {
  return std::exp(sample_log_v(params, config, rng, grid_rel_tol));
}

std::vector<double> urn_step_probabilities(const ModelParamsR& params, std::span<const int> counts, double log_v,
                                           NewBlockFactor factor) {
  if (counts.empty()) return {1.0};
  auto weights = log_step_weights(params, counts, log_v, factor);
  const double total = log_sum_exp(weights);
  for (double& w : weights) w = std::exp(w - total);
  return weights;
}

void urn_step(const ModelParamsR& params, ChainState& state, NewBlockFactor factor) {
  const auto probs = urn_step_probabilities(params, state.counts, state.log_v, factor);
  const double u = uniform_open(state.rng);
  double cumulative = 0.0;
  std::size_t choice = probs.size() - 1;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    cumulative += probs[j];
    if (u < cumulative) {
      choice = j;
      break;
    }
  }
  if (choice == 0) {
    state.counts.push_back(1);
  } else {
    ++state.counts[choice - 1];
  }
  ++state.step;
}

UrnSampler::UrnSampler(ModelParamsR params, UrnOptions options)
    : params_(std::move(params)), options_(options) {}

const GridSampler& UrnSampler::grid_for(std::span<const int> counts) {
  std::vector<int> key(counts.begin(), counts.end());
  std::sort(key.begin(), key.end(), std::greater<>());
  auto it = grids_.find(key);
  if (it != grids_.end()) return *it->second;

  std::unique_ptr<GridSampler> grid;
  if (key.empty()) {
    // V_0: g_r with n = k = 1, i.e. r pi_1(v) / psi(v)^{r+1}.
    const Configuration single({1});
    grid = std::make_unique<GridSampler>([&](double x) { return log_posterior_in_x(params_, single, x); },
                                         options_.grid_rel_tol);
  } else if (options_.v_draw == VDraw::Posterior) {
    const Configuration config(key);
    grid = std::make_unique<GridSampler>([&](double x) { return log_posterior_in_x(params_, config, x); },
                                         options_.grid_rel_tol);
  } else {
    const Configuration config(key);
    const double log_n = std::log(static_cast<double>(config.total()));
    grid = std::make_unique<GridSampler>(
        [&](double x) {
          const double base = log_posterior_in_x(params_, config, x);
          if (base == -kInf) return -kInf;
          const auto weights = log_step_weights(params_, key, x, options_.factor);
          const double value = base - log_n + log_sum_exp(weights);
          return std::isnan(value) ? -kInf : value;
        },
        options_.grid_rel_tol);
  }
  return *grids_.emplace(std::move(key), std::move(grid)).first->second;
}

double UrnSampler::draw_log_v(std::span<const int> counts, Rng& rng) { return grid_for(counts).sample(rng); }

GibbsSampleRecord UrnSampler::run_chain(int n_target, std::uint64_t seed) {
  if (n_target < 1) throw std::invalid_argument("run_chain: n_target must be at least 1");
  ChainState state{{}, 0.0, 0, make_rng(seed)};
  std::vector<double> trace;
  while (state.step < n_target) {
    state.log_v = draw_log_v(state.counts, state.rng);
    if (options_.record_v_trace) trace.push_back(state.v());
    urn_step(params_, state, options_.factor);
  }
  GibbsSampleRecord record;
  record.final_config = Configuration(state.counts);
  record.k = record.final_config.blocks();
  record.afs = afs(record.final_config);
  if (options_.record_v_trace) record.v_trace = std::move(trace);
  record.seed = seed;
  return record;
}

std::vector<std::int64_t> UrnSampler::kn_histogram(int n, std::int64_t replications, std::uint64_t seed) {
  if (replications < 1) throw std::invalid_argument("kn_posterior_mc: replications must be positive");
  std::vector<std::int64_t> histogram(n + 1, 0);
  for (std::int64_t rep = 0; rep < replications; ++rep) {
    ++histogram[run_chain(n, seed + static_cast<std::uint64_t>(rep)).k];
  }
  return histogram;
}

GibbsSampleRecord run_chain(const ModelParamsR& params, int n_target, std::uint64_t seed, const UrnOptions& options) {
  return UrnSampler(params, options).run_chain(n_target, seed);
}

std::vector<std::int64_t> kn_posterior_mc(const ModelParamsR& params, int n, std::int64_t replications,
                                          std::uint64_t seed, const UrnOptions& options) {
  return UrnSampler(params, options).kn_histogram(n, replications, seed);
}

}  // namespace nbpk
