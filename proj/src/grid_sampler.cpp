#include "nbpk/grid_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nbpk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogFloor = -745.0;
constexpr std::size_t kMaxCells = 1'000'000;

double cell_mass(double a, double b, double la, double lb) {
  const double h = b - a;
  const double d = lb - la;
  if (std::fabs(d) < 1e-9) return h * std::exp(0.5 * (la + lb));
  return h * (std::exp(lb) - std::exp(la)) / d;
}

// Position inside [a, b] at which a fraction u of the log-linear mass lies to the left.
double invert_cell(double a, double b, double la, double lb, double u) {
  const double h = b - a;
  const double d = lb - la;
  if (std::fabs(d) < 1e-9) return a + h * u;
  if (d > 0.0) return b + h * std::log(u + (1.0 - u) * std::exp(-d)) / d;
  return a + h * std::log1p(u * std::expm1(d)) / d;
}

}  // namespace

GridSampler::GridSampler(const LogFunction& log_h, double cell_rel_tol) {
  const LogFunction mapped = [&](double t) {
    const double value = log_h(std::sinh(t));
    if (std::isnan(value)) throw NumericalError("grid sampler: density returned NaN");
    return value == -kInf ? -kInf : value + detail::log_cosh(t);
  };
  const auto bracket = detail::find_bracket(mapped);
  if (!bracket) throw NumericalError("grid sampler: density is zero on the whole grid");
  const double shift = bracket->log_peak;
  auto g = [&](double t) { return std::max(kLogFloor, mapped(t) - shift); };

  // Start from the quadrature breakpoints, each split into eight cells.
  std::vector<double> start;
  const auto breaks = detail::bracket_breakpoints(*bracket);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    for (int j = 0; j < 8; ++j) start.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * j / 8.0);
  }
  start.push_back(breaks.back());
  std::vector<double> start_values(start.size());
  double total_estimate = 0.0;
  for (std::size_t i = 0; i < start.size(); ++i) start_values[i] = g(start[i]);
  for (std::size_t i = 0; i + 1 < start.size(); ++i) {
    total_estimate += cell_mass(start[i], start[i + 1], start_values[i], start_values[i + 1]);
  }

  struct Cell {
    double a, b, la, lb;
    int depth;
  };
  nodes_.push_back(start.front());
  log_density_.push_back(start_values.front());
  std::vector<Cell> stack;
  for (std::size_t i = 0; i + 1 < start.size(); ++i) {
    stack.push_back({start[i], start[i + 1], start_values[i], start_values[i + 1], 0});
    while (!stack.empty()) {
      const Cell cell = stack.back();
      stack.pop_back();
      const double m = 0.5 * (cell.a + cell.b);
      const double lm = g(m);
      const double coarse = cell_mass(cell.a, cell.b, cell.la, cell.lb);
      const double fine = cell_mass(cell.a, m, cell.la, lm) + cell_mass(m, cell.b, lm, cell.lb);
      const double change = std::fabs(coarse - fine);
      if (change > cell_rel_tol * fine && change > 1e-14 * total_estimate && cell.depth < 50) {
        stack.push_back({m, cell.b, lm, cell.lb, cell.depth + 1});
        stack.push_back({cell.a, m, cell.la, lm, cell.depth + 1});
        continue;
      }
      nodes_.push_back(m);
      log_density_.push_back(lm);
      nodes_.push_back(cell.b);
      log_density_.push_back(cell.lb);
      if (nodes_.size() > kMaxCells) throw NumericalError("grid sampler: grid refinement exceeded cell cap");
    }
  }

  cdf_.assign(nodes_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    cdf_[i + 1] = cdf_[i] + cell_mass(nodes_[i], nodes_[i + 1], log_density_[i], log_density_[i + 1]);
  }
  const double total = cdf_.back();
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("grid sampler: degenerate grid mass");
  for (double& c : cdf_) c /= total;
  log_mass_ = shift + std::log(total);
}

double GridSampler::sample(Rng& rng) const {
  const double u = uniform_open(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
  i = std::min(i, nodes_.size() - 2);
  const double span = cdf_[i + 1] - cdf_[i];
  const double local = span > 0.0 ? std::clamp((u - cdf_[i]) / span, 0.0, 1.0) : 0.5;
  const double t = invert_cell(nodes_[i], nodes_[i + 1], log_density_[i], log_density_[i + 1], local);
  return std::sinh(t);
}

}  // namespace nbpk
