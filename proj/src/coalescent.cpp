#include "nbpk/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nbpk/posterior.hpp"
#include "nbpk/special_functions.hpp"

namespace nbpk {

std::string to_string(EventKind kind) {
  return kind == EventKind::Coalescence ? "coalescence" : "singleton_removal";
}

const Configuration& CoalescentHistory::state_at(double t) const {
  const Configuration* current = &start;
  for (const auto& event : events) {
    if (event.time > t) break;
    current = &event.config_after;
  }
  return *current;
}

RateFunction RateFunction::custom(std::function<double(const Configuration&)> phi) {
  if (!phi) throw std::invalid_argument("custom rate function is empty");
  return RateFunction(Kind::Custom, std::move(phi));
}

double RateFunction::operator()(const Configuration& config) const {
  const double n = config.total();
  double value = 0.0;
  switch (kind_) {
    case Kind::TotalN: value = n; break;
    case Kind::TotalNChoose2: value = 0.5 * n * (n - 1.0); break;
    case Kind::Custom: value = custom_(config); break;
  }
  if (config.total() >= 2 && !(value > 0.0 && std::isfinite(value))) {
    throw std::domain_error("rate function must be positive on configurations with n >= 2, got " +
                            std::to_string(value) + " at (" + config.to_string() + ")");
  }
  return value;
}

BackwardTerms backward_event_probabilities(const ModelParamsR& params, const Configuration& config,
                                           const QuadratureSpec& spec) {
  const int n = config.total();
  if (n < 2) throw std::invalid_argument("backward terms need at least two observations");
  BackwardTerms out;
  // Terms depend on block i only through n_i.
  std::map<int, std::pair<double, double>> by_size;
  for (std::size_t i = 0; i < static_cast<std::size_t>(config.blocks()); ++i) {
    const int size = config[i];
    auto it = by_size.find(size);
    if (it == by_size.end()) {
      const auto weights = predictive_weights(params, config.without_one(i), spec);
      const double term = size > 1 ? std::log(static_cast<double>(size) / n) - std::log(n - 1.0) + weights.log_omega[i]
                                   : weights.log_omega0 - std::log(static_cast<double>(n));
      it = by_size.emplace(size, std::make_pair(term, term - weights.log_eppf)).first;
    }
    out.log_terms.push_back(it->second.first);
    out.ratios.push_back(std::exp(it->second.second));
  }
  out.log_sum = log_sum_exp(out.log_terms);
  out.log_eppf = log_eppf(params, config, spec);
  for (double t : out.log_terms) out.probabilities.push_back(std::exp(t - out.log_sum));
  return out;
}

double ratio_integrals(const ModelParamsR& params, const Configuration& config, std::size_t i,
                       const QuadratureSpec& spec) {
  const int n = config.total();
  const int k = config.blocks();
  if (n < 2) throw std::invalid_argument("ratio_integrals needs at least two observations");
  if (i >= static_cast<std::size_t>(k)) throw std::out_of_range("ratio_integrals: block index out of range");
  const auto& model = params.model;
  const double r = params.r;
  const auto counts = config.counts();

  const double numerator = detail::integrate_over_v(
      [&](double x) {
        return model.log_scaled_pi_sum_at_log(counts, x) - (r + k) * model.log_psi_at_log(x);
      },
      spec);

  std::vector<int> reduced(counts.begin(), counts.end());
  const bool singleton = reduced[i] == 1;
  const double exponent = singleton ? r + k - 1.0 : r + k;
  if (singleton) {
    reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
  } else {
    --reduced[i];
  }
  const double denominator = detail::integrate_over_v(
      [&](double x) {
        return model.log_scaled_pi_sum_at_log(reduced, x) - exponent * model.log_psi_at_log(x);
      },
      spec);

  const double prefactor = singleton ? (r + k - 1.0) : static_cast<double>(config[i]);
  return prefactor / (n * (n - 1.0)) * std::exp(numerator - denominator);
}

std::vector<double> transition_rates(const Configuration& config, const RateFunction& phi) {
  if (config.total() < 2) throw std::invalid_argument("transition rates need at least two observations");
  const double total = phi(config);
  std::vector<double> rates;
  for (int c : config.counts()) rates.push_back(total * c / config.total());
  return rates;
}

CoalescentHistory simulate_backward(const Configuration& config, const RateFunction& phi, std::uint64_t seed) {
  CoalescentHistory history;
  history.start = config;
  history.seed = seed;
  Rng rng = make_rng(seed);
  Configuration current = config;
  double time = 0.0;
  while (current.total() > 1) {
    time += -std::log(uniform_open(rng)) / phi(current);
    // Block i is hit with probability n_i / n.
    int target = static_cast<int>(uniform_open(rng) * current.total());
    std::size_t block = 0;
    while (target >= current[block]) target -= current[block++];
    AncestralEvent event;
    event.time = time;
    event.kind = current[block] > 1 ? EventKind::Coalescence : EventKind::SingletonRemoval;
    event.block_index = static_cast<int>(block);
    event.config_after = current.without_one(block);
    current = event.config_after;
    history.events.push_back(std::move(event));
  }
  return history;
}

double terminal_indicator(const Configuration& config) { return config.total() == 1 ? 1.0 : 0.0; }

namespace {

struct Lattice {
  std::vector<Configuration> states;
  std::vector<double> exit_rate;
  // (child index, rate) per state.
  std::vector<std::vector<std::pair<std::size_t, double>>> moves;
};

Lattice build_lattice(const Configuration& start, const RateFunction& phi) {
  Lattice lattice;
  std::map<std::vector<int>, std::size_t> index;
  std::deque<std::size_t> queue;
  auto intern = [&](const Configuration& c) {
    std::vector<int> key(c.counts().begin(), c.counts().end());
    auto [it, inserted] = index.emplace(std::move(key), lattice.states.size());
    if (inserted) {
      lattice.states.push_back(c);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(start);
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const Configuration state = lattice.states[s];
    std::vector<std::pair<std::size_t, double>> moves;
    double exit = 0.0;
    if (state.total() >= 2) {
      const auto rates = transition_rates(state, phi);
      exit = std::accumulate(rates.begin(), rates.end(), 0.0);
      for (std::size_t i = 0; i < rates.size(); ++i) moves.emplace_back(intern(state.without_one(i)), rates[i]);
    }
    if (lattice.moves.size() <= s) {
      lattice.moves.resize(s + 1);
      lattice.exit_rate.resize(s + 1);
    }
    lattice.moves[s] = std::move(moves);
    lattice.exit_rate[s] = exit;
  }
  return lattice;
}

void derivative(const Lattice& lattice, const std::vector<double>& h, std::vector<double>& out) {
  for (std::size_t s = 0; s < h.size(); ++s) {
    double value = -lattice.exit_rate[s] * h[s];
    for (const auto& [child, rate] : lattice.moves[s]) value += rate * h[child];
    out[s] = value;
  }
}

void rk4_step(const Lattice& lattice, const std::vector<double>& y, double dt, std::vector<double>& out) {
  const std::size_t m = y.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  derivative(lattice, y, k1);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * dt * k1[j];
  derivative(lattice, tmp, k2);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * dt * k2[j];
  derivative(lattice, tmp, k3);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + dt * k3[j];
  derivative(lattice, tmp, k4);
  out.resize(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = y[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

}  // namespace

std::vector<double> h_solver_exact(const Configuration& config, const RateFunction& phi,
                                   const ConfigurationFunction& h0, const std::vector<double>& t_grid,
                                   double abs_tol) {
  if (config.total() > kMaxExactSolverSize) {
    throw std::invalid_argument("h_solver_exact: n = " + std::to_string(config.total()) + " exceeds " +
                                std::to_string(kMaxExactSolverSize) +
                                "; estimate H by averaging h0 over simulate_backward trajectories instead");
  }
  if (!(abs_tol > 0.0)) throw std::invalid_argument("h_solver_exact: abs_tol must be positive");
  for (double t : t_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("h_solver_exact: times must be finite and >= 0");
  }
  const Lattice lattice = build_lattice(config, phi);
  std::vector<double> y;
  for (const auto& state : lattice.states) y.push_back(h0(state));

  std::vector<std::size_t> order(t_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t_grid[a] < t_grid[b]; });

  const double max_rate = *std::max_element(lattice.exit_rate.begin(), lattice.exit_rate.end());
  double dt = max_rate > 0.0 ? 0.1 / max_rate : 1.0;
  double time = 0.0;
  std::vector<double> full, half, second, result(t_grid.size());
  constexpr int kMaxSteps = 10'000'000;
  int steps = 0;
  for (std::size_t idx : order) {
    const double target = t_grid[idx];
    while (time < target && max_rate > 0.0) {
      if (++steps > kMaxSteps) throw NumericalError("h_solver_exact: step size collapsed");
      const double h = std::min(dt, target - time);
      rk4_step(lattice, y, h, full);
      rk4_step(lattice, y, 0.5 * h, half);
      rk4_step(lattice, half, 0.5 * h, second);
      double error = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) error = std::max(error, std::fabs(second[j] - full[j]));
      error /= 15.0;
      if (error <= abs_tol) {
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = second[j] + (second[j] - full[j]) / 15.0;
        time += h;
        const double grow = error > 0.0 ? 0.9 * std::pow(abs_tol / error, 0.2) : 4.0;
        dt = std::max(dt, h) * std::min(4.0, grow);
      } else {
        dt = h * std::max(0.1, 0.9 * std::pow(abs_tol / error, 0.2));
      }
    }
    result[idx] = y[0];
  }
  return result;
}

std::string to_newick(const CoalescentHistory& history, Rng& rng) {
  std::vector<std::vector<std::string>> lineages;
  for (int b = 0; b < history.start.blocks(); ++b) {
    std::vector<std::string> leaves;
    for (int j = 0; j < history.start[b]; ++j) leaves.push_back(std::to_string(b + 1) + "." + std::to_string(j + 1));
    lineages.push_back(std::move(leaves));
  }
  std::string out;
  for (const auto& event : history.events) {
    auto& block = lineages.at(static_cast<std::size_t>(event.block_index));
    if (event.kind == EventKind::Coalescence) {
      std::uniform_int_distribution<std::size_t> pick(0, block.size() - 1);
      std::size_t a = pick(rng);
      std::size_t b = pick(rng);
      while (b == a) b = pick(rng);
      if (a > b) std::swap(a, b);
      block[a] = "(" + block[a] + "," + block[b] + ")";
      block.erase(block.begin() + static_cast<std::ptrdiff_t>(b));
    } else {
      out += block.front() + ";";
      lineages.erase(lineages.begin() + event.block_index);
    }
  }
  for (const auto& block : lineages) {
    for (const auto& clade : block) out += clade + ";";
  }
  return out;
}

}  // namespace nbpk
