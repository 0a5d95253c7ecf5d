#include "nbpk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "nbpk/special_functions.hpp"

namespace nbpk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScanStep = 0.25;
// sinh(t) stays finite for |t| < 710.
constexpr double kSinhCap = 709.0;
// Headroom before exp() of a shifted log value overflows.
constexpr double kRescaleThreshold = 600.0;

constexpr int kRuleSize = 12;

struct GaussRule {
  std::array<double, kRuleSize> nodes;
  std::array<double, kRuleSize> weights;
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule make_gauss_legendre() {
  GaussRule rule{};
  constexpr int n = kRuleSize;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_legendre();
  return rule;
}

struct Rescale {
  double new_shift;
};

struct Panel {
  double a;
  double b;
  double coarse;
  double left;
  double right;

  double fine() const { return left + right; }
  double error() const { return std::fabs(coarse - fine()); }
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const { return x.error() < y.error(); }
};

class AdaptiveRun {
 public:
  AdaptiveRun(const LogFunction& f, double shift) : f_(f), shift_(shift) {}

  // Integral of exp(f - shift) over [a, b].
  double rule(double a, double b) {
    const auto& g = gauss_rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kRuleSize; ++i) {
      const double value = f_(mid + half * g.nodes[i]);
      if (std::isnan(value) || value == kInf) {
        throw NumericalError("quadrature: integrand returned a non-finite log value");
      }
      observed_max_ = std::max(observed_max_, value);
      if (value - shift_ > kRescaleThreshold) throw Rescale{value};
      sum += g.weights[i] * std::exp(value - shift_);
    }
    return sum * half;
  }

  Panel make_panel(double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    return Panel{a, b, coarse, rule(a, m), rule(m, b)};
  }

  double observed_max() const { return observed_max_; }
  double shift() const { return shift_; }

 private:
  const LogFunction& f_;
  double shift_;
  double observed_max_ = -kInf;
};

struct RunResult {
  double value;  // relative to shift
  double error;
  double observed_max;
};

RunResult run_adaptive(const LogFunction& f, const std::vector<double>& breakpoints, double shift,
                       const QuadratureSpec& spec) {
  AdaptiveRun run(f, shift);
  std::vector<Panel> heap;
  std::vector<Panel> settled;
  heap.reserve(breakpoints.size() + 2 * static_cast<std::size_t>(spec.max_subdivisions));
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    heap.push_back(run.make_panel(a, b, run.rule(a, b)));
  }
  std::make_heap(heap.begin(), heap.end(), PanelOrder{});

  auto totals = [&]() {
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : heap) {
      value += p.fine();
      error += p.error();
    }
    for (const auto& p : settled) {
      value += p.fine();
      error += p.error();
    }
    return std::pair{value, error};
  };

  int subdivisions = 0;
  while (true) {
    const auto [value, error] = totals();
    if (value == 0.0 || error <= spec.rel_tol * value) return {value, error, run.observed_max()};
    if (heap.empty()) {
      throw QuadratureError("quadrature: panels cannot be refined further",
                            shift + std::log(value), shift + std::log(error));
    }
    if (subdivisions >= spec.max_subdivisions) {
      throw QuadratureError("quadrature: no convergence within max_subdivisions",
                            shift + std::log(value), shift + std::log(error));
    }
    std::pop_heap(heap.begin(), heap.end(), PanelOrder{});
    const Panel worst = heap.back();
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b) || (worst.b - worst.a) < 1e-13 * std::max(1.0, std::fabs(m))) {
      settled.push_back(worst);
      continue;
    }
    heap.push_back(run.make_panel(worst.a, m, worst.left));
    std::push_heap(heap.begin(), heap.end(), PanelOrder{});
    heap.push_back(run.make_panel(m, worst.b, worst.right));
    std::push_heap(heap.begin(), heap.end(), PanelOrder{});
    ++subdivisions;
  }
}

double integrate_panels(const LogFunction& f, const std::vector<double>& breakpoints,
                        double shift_guess, const QuadratureSpec& spec) {
  double shift = std::isfinite(shift_guess) ? shift_guess : 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      const RunResult result = run_adaptive(f, breakpoints, shift, spec);
      if (result.value > 1e-250) return shift + std::log(result.value);
      if (result.observed_max == -kInf) return -kInf;
      if (result.observed_max < shift - 1.0) {
        shift = result.observed_max;
        continue;
      }
      return shift + std::log(result.value);
    } catch (const Rescale& r) {
      shift = r.new_shift;
    }
  }
  throw NumericalError("quadrature: could not stabilise the log-space shift");
}

std::vector<double> uniform_breakpoints(double a, double b, int panels) {
  std::vector<double> points(panels + 1);
  for (int i = 0; i <= panels; ++i) points[i] = a + (b - a) * i / panels;
  points.back() = b;
  return points;
}

double max_at_midpoints(const LogFunction& f, const std::vector<double>& points) {
  double best = -kInf;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double value = f(0.5 * (points[i] + points[i + 1]));
    if (std::isnan(value)) throw NumericalError("quadrature: integrand returned NaN");
    best = std::max(best, value);
  }
  return best;
}

double log_integrate_rational(const LogFunction& log_f, const QuadratureSpec& spec) {
  const LogFunction mapped = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return -kInf;
    return log_f(t / (1.0 - t)) - 2.0 * std::log1p(-t);
  };
  return log_integrate_interval(mapped, 0.0, 1.0, spec);
}

double log_integrate_direct(const LogFunction& log_f, const QuadratureSpec& spec) {
  std::vector<double> pieces;
  double total = log_integrate_interval(log_f, 0.0, 1.0, spec);
  pieces.push_back(total);
  int negligible_run = 0;
  double previous = total;
  for (int j = 0; j < 1000; ++j) {
    const double a = std::ldexp(1.0, j);
    const double piece = log_integrate_interval(log_f, a, 2.0 * a, spec);
    pieces.push_back(piece);
    total = log_sum_exp(pieces);
    if (piece < total - 45.0 && piece <= previous) {
      if (++negligible_run >= 3) break;
    } else {
      negligible_run = 0;
    }
    previous = piece;
  }
  return total;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
    throw std::invalid_argument("QuadratureSpec: rel_tol must lie in (0, 1e-2]");
  }
  if (max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSpec: max_subdivisions must be at least 1");
  }
}

namespace detail {

double log_cosh(double t) {
  const double a = std::fabs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

std::optional<Bracket> find_bracket(const LogFunction& log_g, double drop) {
  const int max_steps = static_cast<int>(kSinhCap / kScanStep);
  std::vector<std::pair<double, double>> scan;  // (t, value)
  double best = -kInf;
  auto eval = [&](double t) {
    const double value = log_g(t);
    if (std::isnan(value)) throw NumericalError("quadrature: integrand returned NaN");
    best = std::max(best, value);
    scan.emplace_back(t, value);
    return value;
  };
  eval(0.0);
  for (int direction : {1, -1}) {
    int below = 0;
    double last = log_g(0.0);
    for (int j = 1; j <= max_steps; ++j) {
      const double value = eval(direction * j * kScanStep);
      if (std::isfinite(best) && value < best - drop && value <= last) {
        if (++below >= 4) break;
      } else {
        below = 0;
      }
      last = value;
    }
  }
  if (best == -kInf) return std::nullopt;
  std::sort(scan.begin(), scan.end());

  std::size_t ib = 0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan[i].second > scan[ib].second) ib = i;
  }

  // Golden-section refinement of the maximum between the neighbouring scan points.
  double peak = scan[ib].first;
  double log_peak = scan[ib].second;
  {
    double a = ib > 0 ? scan[ib - 1].first : peak;
    double b = ib + 1 < scan.size() ? scan[ib + 1].first : peak;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = log_g(c);
    double fd = log_g(d);
    for (int iter = 0; iter < 60 && (b - a) > 1e-10; ++iter) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = log_g(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = log_g(d);
      }
    }
    const double t = 0.5 * (a + b);
    const double value = log_g(t);
    if (value > log_peak) {
      peak = t;
      log_peak = value;
    }
  }

  double width = kScanStep;
  {
    const double h = 1e-4;
    const double curvature = (log_g(peak + h) - 2.0 * log_peak + log_g(peak - h)) / (h * h);
    if (std::isfinite(curvature) && curvature < 0.0) width = std::min(kScanStep, 1.0 / std::sqrt(-curvature));
  }

  const double threshold = log_peak - drop;
  std::size_t first = ib;
  std::size_t last = ib;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan[i].second >= threshold) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  const double lo = first > 0 ? scan[first - 1].first : scan[first].first;
  const double hi = last + 1 < scan.size() ? scan[last + 1].first : scan[last].first;
  return Bracket{std::min(lo, peak - kScanStep), std::max(hi, peak + kScanStep), peak, log_peak, width};
}

std::vector<double> bracket_breakpoints(const Bracket& bracket) {
  std::vector<double> points;
  const double coarse = 2.0 * kScanStep;
  const double start = std::ceil(bracket.lo / coarse) * coarse;
  points.push_back(bracket.lo);
  for (double t = start; t < bracket.hi; t += coarse) {
    if (t > bracket.lo) points.push_back(t);
  }
  points.push_back(bracket.hi);
  if (bracket.width < kScanStep) {
    points.push_back(bracket.peak);
    for (double m : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      for (double sign : {-1.0, 1.0}) {
        const double t = bracket.peak + sign * m * bracket.width;
        if (t > bracket.lo && t < bracket.hi) points.push_back(t);
      }
    }
  }
  std::sort(points.begin(), points.end());
  std::vector<double> unique;
  for (double t : points) {
    if (unique.empty() || t - unique.back() > 1e-12) unique.push_back(t);
  }
  return unique;
}

}  // namespace detail

double log_integrate_real_line(const LogFunction& log_h, const QuadratureSpec& spec) {
  spec.validate();
  const LogFunction mapped = [&](double t) {
    const double value = log_h(std::sinh(t));
    if (value == -kInf) return -kInf;
    return value + detail::log_cosh(t);
  };
  const auto bracket = detail::find_bracket(mapped);
  if (!bracket) return -kInf;
  return integrate_panels(mapped, detail::bracket_breakpoints(*bracket), bracket->log_peak, spec);
}

double log_integrate_halfline_log(const LogFunction& log_f_of_log_v, const QuadratureSpec& spec) {
  return log_integrate_real_line(
      [&](double x) {
        const double value = log_f_of_log_v(x);
        return value == -kInf ? -kInf : value + x;
      },
      spec);
}

double log_integrate_halfline(const LogFunction& log_f, const QuadratureSpec& spec) {
  spec.validate();
  switch (spec.transform) {
    case Transform::None:
      return log_integrate_direct(log_f, spec);
    case Transform::RationalToUnit:
      return log_integrate_rational(log_f, spec);
    case Transform::LogSinh:
      break;
  }
  return log_integrate_halfline_log(
      [&](double x) {
        const double v = std::exp(x);
        if (v == 0.0 || v == kInf) return -kInf;
        return log_f(v);
      },
      spec);
}

double log_integrate_interval(const LogFunction& log_h, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw std::invalid_argument("log_integrate_interval: need finite a < b");
  }
  const auto points = uniform_breakpoints(a, b, 32);
  return integrate_panels(log_h, points, max_at_midpoints(log_h, points), spec);
}

}  // namespace nbpk
