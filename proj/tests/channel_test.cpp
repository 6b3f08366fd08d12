#include "cnoma/channel.hpp"

#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <vector>

#include "support/stats.hpp"

using namespace cnoma;

TEST_CASE("fading parameter validation") {
  CHECK_THROWS_AS(FadingParams(0.4, 1.0), std::domain_error);
  CHECK_THROWS_AS(FadingParams(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(FadingParams(1.0, -3.0), std::domain_error);
  const FadingParams p(0.5, 2.0);
  CHECK(p.m == 0.5);
  CHECK(p.omega == 2.0);
}

TEST_CASE("sample moments match the gamma law") {
  const FadingParams p(1.5, 10.0);
  Rng rng(2024);
  const int n = 1'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = sample_power_gain(p, rng);
    CHECK(g > 0.0);
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  // E = Omega with SE sqrt(Omega^2/m/n); Var = Omega^2/m, its SE from the
  // fourth central moment of the gamma law.
  const double se_mean = std::sqrt(10.0 * 10.0 / 1.5 / n);
  CHECK(std::abs(mean - 10.0) < 3.0 * se_mean);
  const double theta = 10.0 / 1.5;
  const double mu4 = 3.0 * 1.5 * (1.5 + 2.0) * theta * theta * theta * theta;
  const double var_true = 1.5 * theta * theta;
  const double se_var = std::sqrt((mu4 - var_true * var_true) / n);
  CHECK(std::abs(var - var_true) < 3.0 * se_var);
  CHECK(var_true == doctest::Approx(66.6666666667).epsilon(1e-6));
}

TEST_CASE("m = 1 power gain is exponential (KS at 1e6 samples)") {
  const FadingParams p(1.0, 1.0);
  Rng rng(99);
  std::vector<double> samples(1'000'000);
  for (double& s : samples) s = sample_power_gain(p, rng);
  const double d =
      teststats::ks_distance(std::move(samples),
                             [](double x) { return 1.0 - std::exp(-x); });
  // alpha = 0.01 critical value 1.628/sqrt(n)
  CHECK(d < 1.628 / 1000.0);
}

TEST_CASE("sampler follows the pdf for every scenario parameter set") {
  // Table-style parameter sets used across the experiments.
  const FadingParams sets[] = {{1.5, 10.0}, {1.5, 2.0}, {1.0, 10.0},
                               {1.5, 8.0},  {1.5, 4.0}, {1.5, 12.0}};
  int seed = 7;
  for (const FadingParams& p : sets) {
    Rng rng(seed++);
    std::vector<double> samples(1'000'000);
    for (double& s : samples) s = sample_power_gain(p, rng);
    const double lambda = p.m / p.omega;
    const double d = teststats::ks_distance(
        std::move(samples),
        [&](double x) { return teststats::gamma_p(p.m, lambda * x); });
    CHECK(d < 0.002);
  }
}

TEST_CASE("pdf boundary values") {
  CHECK(power_gain_pdf(FadingParams(1.0, 1.0), 0.0) == doctest::Approx(1.0));
  CHECK(power_gain_pdf(FadingParams(2.0, 1.0), 0.0) == 0.0);
  CHECK(std::isinf(power_gain_pdf(FadingParams(0.5, 1.0), 0.0)));
  CHECK(power_gain_pdf(FadingParams(1.5, 10.0), -1.0) == 0.0);
}

TEST_CASE("pdf integrates to one") {
  const FadingParams p(1.5, 10.0);
  boost::math::quadrature::exp_sinh<double> integ;
  const double total =
      integ.integrate([&](double g) { return power_gain_pdf(p, g); }, 1e-12);
  CHECK(std::abs(total - 1.0) < 1e-10);
}
