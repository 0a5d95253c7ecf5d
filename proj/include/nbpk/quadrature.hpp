#ifndef NBPK_QUADRATURE_HPP
#define NBPK_QUADRATURE_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbpk {

/// Change of variable applied before integrating over (0, inf).
enum class Transform {
  None,            ///< integrate in v on doubling panels [0,1], [1,2], [2,4], ...
  RationalToUnit,  ///< v = t / (1 - t), t in (0, 1)
  LogSinh,         ///< log v = sinh(t), t in R
};

struct QuadratureSpec {
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
  Transform transform = Transform::LogSinh;

  /// Throws std::invalid_argument unless rel_tol in (0, 1e-2] and max_subdivisions >= 1.
  void validate() const;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive refinement ran out of subdivisions. Carries the best estimate and
/// its error bound, both as natural logs.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double log_estimate, double log_error_bound)
      : NumericalError(what), log_estimate_(log_estimate), log_error_bound_(log_error_bound) {}
  double log_estimate() const { return log_estimate_; }
  double log_error_bound() const { return log_error_bound_; }

 private:
  double log_estimate_;
  double log_error_bound_;
};

/// A function returning the log of a nonnegative integrand; -inf means zero.
using LogFunction = std::function<double(double)>;

/// log int_0^inf exp(log_f(v)) dv.
double log_integrate_halfline(const LogFunction& log_f, const QuadratureSpec& spec = {});

/// Same integral, with the integrand given as a function of x = log v. Integrands
/// whose mass extends past the range of double (slowly varying tails) need this form.
double log_integrate_halfline_log(const LogFunction& log_f_of_log_v, const QuadratureSpec& spec = {});

/// log int_R exp(log_h(y)) dy, evaluated in the coordinate y = sinh(t).
double log_integrate_real_line(const LogFunction& log_h, const QuadratureSpec& spec = {});

/// log int_a^b exp(log_h(t)) dt for finite a < b.
double log_integrate_interval(const LogFunction& log_h, double a, double b,
                              const QuadratureSpec& spec = {});

namespace detail {

/// log cosh t, the log-Jacobian of y = sinh(t).
double log_cosh(double t);

/// Region of the t axis that carries all but a factor e^{-drop} of the peak density.
struct Bracket {
  double lo;
  double hi;
  double peak;      ///< location of the maximum
  double log_peak;  ///< value of the log density at the maximum
  double width;     ///< curvature scale at the maximum
};

/// Scans log_g on a grid around t = 0, stepping outward until the density has
/// dropped by `drop` nats, then refines the maximum. Returns nullopt when log_g
/// is -inf everywhere on the scanned range.
std::optional<Bracket> find_bracket(const LogFunction& log_g, double drop = 60.0);

/// Panel boundaries over a bracket: the scan grid plus extra points clustered
/// around a sharp peak.
std::vector<double> bracket_breakpoints(const Bracket& bracket);

}  // namespace detail

}  // namespace nbpk

#endif  // NBPK_QUADRATURE_HPP
