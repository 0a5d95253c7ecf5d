#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nbpk/special_functions.hpp"

using namespace nbpk;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("log_gamma matches boost across the positive axis") {
  for (double x : {1e-8, 1e-3, 0.1, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 3.7, 10.0, 55.5, 171.0, 1e4, 1e8}) {
    const double expected = boost::math::lgamma(x);
    CHECK(log_gamma(x) == doctest::Approx(expected).epsilon(1e-13).scale(1.0));
  }
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("regularized incomplete gamma matches boost") {
  for (double s : {0.05, 0.3, 0.5, 1.0, 2.5, 10.0, 50.0, 150.0}) {
    for (double x : {1e-6, 1e-3, 0.1, 1.0, 5.0, 20.0, 60.0, 200.0}) {
      CAPTURE(s);
      CAPTURE(x);
      const double p = boost::math::gamma_p(s, x);
      const double q = boost::math::gamma_q(s, x);
      CHECK(regularized_gamma_p(s, x) == doctest::Approx(p).epsilon(1e-11));
      if (q > 1e-290) CHECK(regularized_gamma_q(s, x) == doctest::Approx(q).epsilon(1e-10));
    }
  }
}

TEST_CASE("log incomplete gamma stays finite at extreme arguments") {
  // x far beyond double range: the lower integral is the full gamma function.
  CHECK(log_lower_incomplete_gamma(0.4, 1000.0) == doctest::Approx(log_gamma(0.4)));
  CHECK(log_lower_incomplete_gamma(0.4, kInf) == doctest::Approx(log_gamma(0.4)));
  CHECK(log_lower_incomplete_gamma(0.4, -kInf) == -kInf);
  // x tiny: gamma(s, x) ~ x^s / s.
  const double log_x = -600.0;
  CHECK(log_lower_incomplete_gamma(0.7, log_x) == doctest::Approx(0.7 * log_x - std::log(0.7)).epsilon(1e-14));
  // Upper tail far out, checked against boost's non-normalised tgamma.
  const double expected = std::log(boost::math::tgamma(2.5, 600.0));
  CHECK(log_upper_incomplete_gamma(2.5, std::log(600.0)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(log_upper_incomplete_gamma(2.5, 1000.0) == -kInf);
  CHECK(lower_incomplete_gamma(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK_THROWS_AS(log_lower_incomplete_gamma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(lower_incomplete_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("chi-square survival function matches boost") {
  for (double dof : {1.0, 4.0, 10.0}) {
    const boost::math::chi_squared dist(dof);
    for (double stat : {0.5, 3.0, 12.0, 40.0}) {
      CHECK(chi_square_sf(stat, dof) == doctest::Approx(boost::math::cdf(boost::math::complement(dist, stat))).epsilon(1e-10));
    }
  }
  CHECK(chi_square_sf(0.0, 3.0) == 1.0);
}

TEST_CASE("log-space helpers") {
  CHECK(log_add_exp(-kInf, 2.0) == 2.0);
  CHECK(log_add_exp(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
  const std::vector<double> xs{-1000.0, -1000.0 + std::log(3.0)};
  CHECK(log_sum_exp(xs) == doctest::Approx(-1000.0 + std::log(4.0)));
  CHECK(log_sum_exp(std::vector<double>{}) == -kInf);
  CHECK(log_sum_exp(std::vector<double>{-kInf, -kInf}) == -kInf);
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(800.0) == doctest::Approx(800.0));
  CHECK(softplus(-800.0) == doctest::Approx(std::exp(-800.0)));
  CHECK(log1m_exp(-1e-20) == doctest::Approx(std::log(1e-20)));
  CHECK(log1m_exp(-50.0) == doctest::Approx(-std::exp(-50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(log1m_exp(0.1), std::domain_error);
}
