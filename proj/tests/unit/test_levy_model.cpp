#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nbpk/levy_model.hpp"
#include "nbpk/validation.hpp"

using namespace nbpk;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// psi and pi_n straight from their defining integrals over the Levy density.
struct BoostOracle {
  const LevyModel& model;

  double integrate(const std::function<double(double)>& f) const {
    if (model.kind() == ModelKind::TruncatedStable) {
      boost::math::quadrature::tanh_sinh<double> integrator;
      return integrator.integrate(f, 0.0, 1.0);
    }
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f);
  }
  // The integrands vanish at both ends; the guards keep 0 * inf out.
  static double finite_or_zero(double value) { return std::isfinite(value) ? value : 0.0; }
  double psi(double v) const {
    return 1.0 + integrate([&](double x) {
             if (!(x > 0.0)) return 0.0;
             return finite_or_zero(std::exp(std::log(-std::expm1(-v * x)) + model.log_density(x)));
           });
  }
  double pi(int n, double v) const {
    return integrate([&](double x) {
      if (!(x > 0.0)) return 0.0;
      return finite_or_zero(std::exp(n * std::log(x) - v * x + model.log_density(x)));
    });
  }
};

std::vector<LevyModel> builtins() {
  return {LevyModel::stable(0.3), LevyModel::stable(0.8), LevyModel::gamma(0.7), LevyModel::gamma(3.0),
          LevyModel::generalized_gamma(0.25), LevyModel::generalized_gamma(0.75), LevyModel::truncated_stable(0.4),
          LevyModel::truncated_stable(0.9)};
}

}  // namespace

TEST_CASE("closed forms agree with direct integration of the density") {
  for (const auto& model : builtins()) {
    const BoostOracle oracle{model};
    for (double v : {0.05, 0.5, 1.0, 4.0, 30.0}) {
      CAPTURE(model.describe());
      CAPTURE(v);
      CHECK(model.psi(v) == doctest::Approx(oracle.psi(v)).epsilon(1e-9));
      for (int n : {1, 2, 3, 7}) {
        CAPTURE(n);
        CHECK(std::exp(model.log_pi_n(n, v)) == doctest::Approx(oracle.pi(n, v)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("stable closed forms") {
  const auto model = LevyModel::stable(0.5);
  CHECK(model.psi(4.0) == doctest::Approx(3.0));
  // pi_1(v) = alpha v^{alpha - 1}
  CHECK(std::exp(model.log_pi_n(1, 4.0)) == doctest::Approx(0.5 * 0.5));
  CHECK(model.psi(0.0) == 1.0);
}

TEST_CASE("evaluation at log v far outside double range") {
  for (const auto& model : builtins()) {
    CAPTURE(model.describe());
    for (double log_v : {-2000.0, 2000.0}) {
      CHECK(std::isfinite(model.log_psi_at_log(log_v)));
      CHECK(std::isfinite(model.log_pi_at_log(3, log_v)));
    }
  }
  const auto gamma = LevyModel::gamma(2.0);
  CHECK(gamma.log_psi_at_log(2000.0) == doctest::Approx(std::log1p(2.0 * 2000.0)).epsilon(1e-12));
  CHECK(gamma.log_psi_at_log(-kInf) == 0.0);
}

TEST_CASE("scaled pi_n equals v^n pi_n and keeps its accuracy at huge v") {
  for (const auto& model : builtins()) {
    CAPTURE(model.describe());
    for (double log_v : {-5.0, 0.0, 3.0}) {
      for (int n : {1, 2, 6}) {
        CHECK(model.log_scaled_pi_at_log(n, log_v) ==
              doctest::Approx(n * log_v + model.log_pi_at_log(n, log_v)).epsilon(1e-12));
      }
    }
  }
  // v^n pi_n(v) = theta Gamma(n) (v / (1+v))^n, which tends to theta Gamma(n).
  const auto gamma = LevyModel::gamma(2.0);
  CHECK(gamma.log_scaled_pi_at_log(3, 1e20) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(gamma.log_scaled_pi_at_log(3, 40.0) == doctest::Approx(std::log(4.0) - 3.0 * std::log1p(std::exp(-40.0))));
  // alpha Gamma(n - alpha) / Gamma(1 - alpha) (1+v)^alpha (v / (1+v))^n.
  const auto gg = LevyModel::generalized_gamma(0.5);
  CHECK(gg.log_scaled_pi_at_log(2, 40.0) ==
        doctest::Approx(std::log(0.25) + 0.5 * (40.0 + std::exp(-40.0)) - 2.0 * std::exp(-40.0)).epsilon(1e-15));
}

TEST_CASE("derivative identities by finite differences") {
  for (const auto& model : builtins()) {
    for (double v : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      CAPTURE(model.describe());
      CAPTURE(v);
      const double h = 1e-3 * v;
      const double dpsi = central_difference([&](double u) { return model.psi(u); }, v, h);
      CHECK(dpsi == doctest::Approx(std::exp(model.log_pi_n(1, v))).epsilon(1e-7));
      for (int n = 2; n <= 10; ++n) {
        const double d = central_difference([&](double u) { return std::exp(model.log_pi_n(n - 1, u)); }, v, h);
        CHECK(-d == doctest::Approx(std::exp(model.log_pi_n(n, v))).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("generic density reproduces the built-in it copies") {
  const double alpha = 0.4;
  const auto builtin = LevyModel::generalized_gamma(alpha);
  const auto generic = LevyModel::generic([&](double s) {
    return std::log(alpha) - std::lgamma(1.0 - alpha) - (alpha + 1.0) * std::log(s) - s;
  });
  CHECK(generic.kind() == ModelKind::Generic);
  for (double v : {0.1, 1.0, 10.0}) {
    CHECK(generic.psi(v) == doctest::Approx(builtin.psi(v)).epsilon(1e-9));
    for (int n : {1, 2, 5}) CHECK(generic.log_pi_n(n, v) == doctest::Approx(builtin.log_pi_n(n, v)).epsilon(1e-9));
  }
  // Compact support, as in the truncated stable.
  const auto truncated = LevyModel::generic([&](double s) { return s <= 1.0 ? std::log(0.6) - 1.6 * std::log(s) : -kInf; });
  const auto ts = LevyModel::truncated_stable(0.6);
  CHECK(truncated.psi(3.0) == doctest::Approx(ts.psi(3.0)).epsilon(1e-8));
  CHECK(truncated.log_pi_n(2, 3.0) == doctest::Approx(ts.log_pi_n(2, 3.0)).epsilon(1e-8));
}

TEST_CASE("parameter and density validation") {
  CHECK_THROWS_AS(LevyModel::stable(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LevyModel::stable(1.0), std::invalid_argument);
  CHECK_THROWS_AS(LevyModel::gamma(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(LevyModel::truncated_stable(1.2), std::invalid_argument);
  CHECK_THROWS_AS(ModelParamsR(LevyModel::gamma(1.0), 0.0), std::invalid_argument);
  // Finite mass near zero: not an infinite-activity density.
  CHECK_THROWS_AS(LevyModel::generic([](double s) { return -s; }), std::invalid_argument);
  // s rho(s) not integrable at zero.
  CHECK_THROWS_AS(LevyModel::generic([](double s) { return -2.5 * std::log(s) - s; }), std::invalid_argument);
  // rho not integrable at infinity.
  CHECK_THROWS_AS(LevyModel::generic([](double s) { return -1.5 * std::log(s) + (s > 1 ? 0.5 * std::log(s) : 0.0); }),
                  std::invalid_argument);
  CHECK_THROWS_AS(LevyModel::stable(0.5).log_pi_n(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(LevyModel::stable(0.5).log_pi_n(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(LevyModel::stable(0.5).psi(-1.0), std::domain_error);
  CHECK(to_string(ModelKind::GeneralizedGamma) == "gengamma");
}
