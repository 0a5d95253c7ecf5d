#ifndef NBPK_COALESCENT_HPP
#define NBPK_COALESCENT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nbpk/levy_model.hpp"
#include "nbpk/partitions.hpp"
#include "nbpk/quadrature.hpp"
#include "nbpk/random.hpp"

namespace nbpk {

enum class EventKind { Coalescence, SingletonRemoval };

std::string to_string(EventKind kind);

struct AncestralEvent {
  double time = 0.0;
  EventKind kind = EventKind::Coalescence;
  int block_index = 0;  // 0-based, in order of appearance before the event
  Configuration config_after{std::vector<int>{1}};
};

struct CoalescentHistory {
  Configuration start{std::vector<int>{1}};
  std::vector<AncestralEvent> events;
  std::uint64_t seed = 0;

  /// Configuration in force at backward time t.
  const Configuration& state_at(double t) const;
};

/// Total event rate phi(n) of the ancestral chain.
class RateFunction {
 public:
  enum class Kind { TotalN, TotalNChoose2, Custom };

  static RateFunction total_n() { return RateFunction(Kind::TotalN, {}); }
  static RateFunction total_n_choose_2() { return RateFunction(Kind::TotalNChoose2, {}); }
  static RateFunction custom(std::function<double(const Configuration&)> phi);

  Kind kind() const { return kind_; }
  double operator()(const Configuration& config) const;

 private:
  RateFunction(Kind kind, std::function<double(const Configuration&)> custom)
      : kind_(kind), custom_(std::move(custom)) {}

  Kind kind_;
  std::function<double(const Configuration&)> custom_;
};

/// Backward terms of a configuration: term i is the probability weight that
/// the last of the n observations joined block i,
///   (n_i / n) (1 / (n-1)) omega_i(n - e_i)   if n_i > 1,
///   (1 / n) omega_0(n - e_i)                 if n_i = 1,
/// with the weights computed on the reduced configuration. The terms add up
/// to p(n).
struct BackwardTerms {
  std::vector<double> log_terms;
  double log_sum = 0.0;
  double log_eppf = 0.0;  ///< log p(n) from direct quadrature, for comparison with log_sum
  /// terms / sum; these reduce to n_i / n for every model.
  std::vector<double> probabilities;
  /// term_i / p(n - e_i).
  std::vector<double> ratios;
};

BackwardTerms backward_event_probabilities(const ModelParamsR& params, const Configuration& config,
                                           const QuadratureSpec& spec = {});

/// term_i / p(n - e_i) as a quotient of two integrals over v, without going
/// through the prediction weights.
double ratio_integrals(const ModelParamsR& params, const Configuration& config, std::size_t i,
                       const QuadratureSpec& spec = {});

/// phi(n) n_i / n for every block.
std::vector<double> transition_rates(const Configuration& config, const RateFunction& phi);

CoalescentHistory simulate_backward(const Configuration& config, const RateFunction& phi, std::uint64_t seed);

/// Largest total count h_solver_exact accepts.
inline constexpr int kMaxExactSolverSize = 12;

using ConfigurationFunction = std::function<double(const Configuration&)>;

/// 1 on the terminal configuration (1), 0 elsewhere.
double terminal_indicator(const Configuration& config);

/// H(n, t) = E[h0(n(t))] for each t in t_grid, from the backward equation on
/// the lattice of configurations reachable from config. Fourth-order
/// Runge-Kutta with step-doubling control to abs_tol.
std::vector<double> h_solver_exact(const Configuration& config, const RateFunction& phi,
                                   const ConfigurationFunction& h0, const std::vector<double>& t_grid,
                                   double abs_tol = 1e-10);

/// Bracket serialisation of the genealogy implied by a history, one tree per
/// allele separated by ';'. Leaves are named "b.j" (block b, lineage j, both
/// 1-based). A coalescence merges two lineages of the block chosen uniformly
/// with rng; a singleton removal closes that allele's tree.
std::string to_newick(const CoalescentHistory& history, Rng& rng);

}  // namespace nbpk

#endif  // NBPK_COALESCENT_HPP
