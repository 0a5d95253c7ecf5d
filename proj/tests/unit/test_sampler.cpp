#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "nbpk/posterior.hpp"
#include "nbpk/sampler.hpp"
#include "nbpk/special_functions.hpp"
#include "oracles.hpp"

using namespace nbpk;

namespace {

double chi_square_p_value(const ModelParamsR& params, int n, long chains, const UrnOptions& options,
                          std::uint64_t seed) {
  const auto exact = partition_class_probabilities(params, n);
  std::map<std::vector<int>, std::size_t> index;
  for_each_partition(n, [&](std::span<const int> parts) {
    index.emplace(std::vector<int>(parts.begin(), parts.end()), index.size());
  });
  std::vector<long> counts(exact.size(), 0);
  UrnSampler sampler(params, options);
  for (long i = 0; i < chains; ++i) ++counts[index.at(sampler.run_chain(n, seed + i).final_config.sorted_counts())];
  return chi_square_sf(oracle::chi_square_statistic(exact, counts), static_cast<double>(exact.size() - 1));
}

// E[f(V)] under g_r(v, n) by quadrature, f given through log f(log v).
double quadrature_moment(const ModelParamsR& params, const Configuration& config,
                         const std::function<double(double)>& log_f) {
  const double top = detail::integrate_over_v(
      [&](double x) { return log_f(x) + log_g_r_in_x(params, config, x); }, QuadratureSpec{});
  return std::exp(top - log_eppf(params, config));
}

}  // namespace

TEST_CASE("urn step probabilities at a fixed V") {
  const ModelParamsR params(LevyModel::generalized_gamma(0.5), 2.0);
  const std::vector<int> counts{1};
  const double pi1 = 0.5 * std::pow(2.0, -0.5);
  const double pi2 = 0.5 * std::tgamma(1.5) / std::tgamma(0.5) * std::pow(2.0, -1.5);
  const double psi = std::sqrt(2.0);
  const double a = 3.0 * pi1 / psi;
  const double b = pi2 / pi1;
  const auto probs = urn_step_probabilities(params, counts, 0.0);
  REQUIRE(probs.size() == 2);
  CHECK(probs[0] == doctest::Approx(a / (a + b)).epsilon(1e-13));
  CHECK(probs[1] == doctest::Approx(b / (a + b)).epsilon(1e-13));
  CHECK(urn_step_probabilities(params, std::vector<int>{}, 0.0) == std::vector<double>{1.0});

  ChainState state{{}, 0.0, 0, make_rng(1)};
  urn_step(params, state);
  CHECK(state.counts == std::vector<int>{1});
  CHECK(state.step == 1);
}

TEST_CASE("chains are reproducible and well formed") {
  const ModelParamsR params(LevyModel::truncated_stable(0.5), 2.0);
  UrnOptions options;
  options.record_v_trace = true;
  const auto a = run_chain(params, 12, 77, options);
  const auto b = run_chain(params, 12, 77, options);
  CHECK(a.final_config == b.final_config);
  CHECK(*a.v_trace == *b.v_trace);
  CHECK(a.v_trace->size() == 12);
  for (double v : *a.v_trace) CHECK(v > 0.0);
  CHECK(a.final_config.total() == 12);
  CHECK(a.k == a.final_config.blocks());
  CHECK(a.afs == afs(a.final_config));
  CHECK(a.seed == 77);
  Rng rng = make_rng(4);
  CHECK(sample_v(params, Configuration({2, 1}), rng) > 0.0);
  const auto single = run_chain(params, 1, 5);
  CHECK(single.final_config == Configuration({1}));
  CHECK(single.k == 1);
  CHECK_FALSE(single.v_trace.has_value());
  CHECK_THROWS_AS(run_chain(params, 0, 1), std::invalid_argument);
}

TEST_CASE("probability of a single block at n = 2 under PD(0.5, 1)") {
  const ModelParamsR params(LevyModel::generalized_gamma(0.5), 2.0);
  const long chains = 100000;
  const auto hist = kn_posterior_mc(params, 2, chains, 2024);
  const double p = static_cast<double>(hist[1]) / chains;
  CHECK(std::fabs(p - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / chains));
}

TEST_CASE("K_3 under the stable model") {
  const long chains = 60000;
  for (double r : {0.5, 4.0}) {
    const auto hist = kn_posterior_mc(ModelParamsR(LevyModel::stable(0.5), r), 3, chains, 99);
    long total = 0;
    for (auto h : hist) total += h;
    CHECK(total == chains);
    CHECK(hist[0] == 0);
    const double p = static_cast<double>(hist[1]) / chains;
    CHECK(std::fabs(p - 0.375) < 3.5 * std::sqrt(0.375 * 0.625 / chains));
  }
  const auto one = kn_posterior_mc(ModelParamsR(LevyModel::stable(0.5), 1.0), 1, 10, 1);
  CHECK(one[1] == 10);
}

TEST_CASE("exact scheme passes and literal variants fail the partition chi-square") {
  const ModelParamsR params(LevyModel::stable(0.5), 1.5);
  CHECK(chi_square_p_value(params, 3, 20000, UrnOptions{}, 5) > 0.001);
  UrnOptions literal;
  literal.v_draw = VDraw::Posterior;
  CHECK(chi_square_p_value(params, 3, 20000, literal, 5) < 1e-6);
  UrnOptions observations;
  observations.factor = NewBlockFactor::Observations;
  CHECK(chi_square_p_value(params, 3, 20000, observations, 5) < 1e-6);
  // Generalized gamma: the step probabilities do not depend on V.
  const ModelParamsR gg(LevyModel::generalized_gamma(0.5), 3.0);
  CHECK(chi_square_p_value(gg, 3, 20000, literal, 6) > 0.001);
}

TEST_CASE("V draws match quadrature moments") {
  const int draws = 100000;
  SUBCASE("gamma model: V has no mean, so compare the bounded V / (1 + V)") {
    const ModelParamsR params(LevyModel::gamma(1.0), 2.0);
    const Configuration config({2, 1});
    const double m1 = quadrature_moment(params, config, [](double x) { return x - softplus(x); });
    const double m2 = quadrature_moment(params, config, [](double x) { return 2.0 * (x - softplus(x)); });
    Rng rng = make_rng(8);
    const VSampler sampler(params, config);
    std::vector<double> u, u2;
    for (int i = 0; i < draws; ++i) {
      const double x = sampler.sample_log(rng);
      const double t = std::exp(x - softplus(x));
      u.push_back(t);
      u2.push_back(t * t);
    }
    const auto a = oracle::mean_and_error(u);
    const auto b = oracle::mean_and_error(u2);
    CHECK(std::fabs(a.mean - m1) < 3.0 * a.standard_error);
    CHECK(std::fabs(b.mean - m2) < 3.0 * b.standard_error);
  }
  SUBCASE("generalized gamma with finite fourth moment") {
    const ModelParamsR params(LevyModel::generalized_gamma(0.7), 9.0);
    const Configuration config({3, 1, 1});
    const double m1 = quadrature_moment(params, config, [](double x) { return x; });
    const double m2 = quadrature_moment(params, config, [](double x) { return 2.0 * x; });
    Rng rng = make_rng(9);
    const VSampler sampler(params, config);
    std::vector<double> v, v2;
    for (int i = 0; i < draws; ++i) {
      const double s = sampler.sample(rng);
      REQUIRE(s > 0.0);
      v.push_back(s);
      v2.push_back(s * s);
    }
    const auto a = oracle::mean_and_error(v);
    const auto b = oracle::mean_and_error(v2);
    CHECK(std::fabs(a.mean - m1) < 3.0 * a.standard_error);
    CHECK(std::fabs(b.mean - m2) < 3.0 * b.standard_error);
  }
}
