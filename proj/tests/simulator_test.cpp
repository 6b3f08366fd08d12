#include "cnoma/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "cnoma/analytic.hpp"
#include "cnoma/rng.hpp"

using namespace cnoma;

namespace {

Scenario scenario_I() {
  return {"I", FadingParams(1.5, 10.0), FadingParams(1.5, 2.0),
          FadingParams(1.5, 10.0)};
}

SimConfig reference_config(double snr_db, std::uint64_t seed,
                           std::uint64_t min_errors, std::uint64_t max_bits) {
  return {scenario_I(), EhProtocol::hybrid(0.1, 0.1, 0.95),
          PowerAllocation::from_alpha2(0.1), snr_db, seed,
          StoppingRule{min_errors, max_bits}};
}

bool within_sigma(double emp, double ana, std::uint64_t errs, std::uint64_t bits,
                  double n_sigma) {
  const double se = std::sqrt(emp * (1.0 - emp) / static_cast<double>(bits));
  (void)errs;
  return std::abs(emp - ana) <= n_sigma * se;
}

}  // namespace

TEST_CASE("detectors on noiseless observables") {
  const PowerAllocation pa = PowerAllocation::from_alpha2(0.1);
  const double g = 2.0, P = 1.0;
  const double a1 = std::sqrt(0.9), a2 = std::sqrt(0.1);

  // Strong-user decision follows the sign; ties break to +1.
  CHECK(detect_s1(std::sqrt(P * g) * (a1 + a2), g, P, pa) == 1);
  CHECK(detect_s1(-std::sqrt(P * g) * (a1 - a2), g, P, pa) == -1);
  CHECK(detect_s1(0.0, g, P, pa) == 1);

  // Correct cancellation recovers s2 exactly.
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      const double y = std::sqrt(P * g) * (a1 * s1 + a2 * s2);
      const int s1_hat = detect_s1(y, g, P, pa);
      CHECK(s1_hat == s1);
      CHECK(sic_detect_s2(y, g, P, s1_hat, pa) == s2);
    }
  }

  // A wrong first decision leaves a dominating residual: error propagation.
  const double y = std::sqrt(P * g) * (a1 + a2 * -1.0);  // s1=+1, s2=-1
  CHECK(sic_detect_s2(y, g, P, -1, pa) == 1);  // flipped by the residual
}

TEST_CASE("batch seeds are collision-free and mix the master") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    seen.insert(derive_batch_seed(77, i));
  }
  CHECK(seen.size() == 10000);
  CHECK(derive_batch_seed(77, 3) != derive_batch_seed(78, 3));
}

TEST_CASE("streams derived from adjacent batches look independent") {
  const FadingParams f(1.5, 10.0);
  const int n = 1'000'000;
  Rng a(derive_batch_seed(5, 0));
  Rng b(derive_batch_seed(5, 1));
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_power_gain(f, a);
    const double y = sample_power_gain(f, b);
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double ma = sa / n, mb = sb / n;
  const double corr = (sab / n - ma * mb) /
                      std::sqrt((saa / n - ma * ma) * (sbb / n - mb * mb));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("trial count merge is associative and commutative") {
  TrialCounts a{10, 1, 2, 3, 4, 5, 6, false};
  TrialCounts b{20, 2, 3, 4, 5, 6, 7, true};
  TrialCounts c{30, 3, 4, 5, 6, 7, 8, false};
  TrialCounts ab_c = a;
  ab_c.merge(b).merge(c);
  TrialCounts bc = b;
  bc.merge(c);
  TrialCounts a_bc = a;
  a_bc.merge(bc);
  TrialCounts cba = c;
  cba.merge(b).merge(a);
  for (const TrialCounts& t : {ab_c, a_bc, cba}) {
    CHECK(t.bits == 60);
    CHECK(t.relay_err_s1 == 6);
    CHECK(t.e2e_err_u2 == 21);
    CHECK(t.budget_exhausted);
  }
}

TEST_CASE("ber estimate") {
  const BerEstimate e = BerEstimate::from_counts(250, 1'000'000);
  CHECK(e.ber == doctest::Approx(2.5e-4));
  CHECK(e.n_errors == 250);
  CHECK(e.ci95_halfwidth == doctest::Approx(1.96 * std::sqrt(2.5e-4 * (1 - 2.5e-4) / 1e6))
                                .epsilon(1e-6));
  CHECK_THROWS_AS(BerEstimate::from_counts(0, 0), std::domain_error);
}

TEST_CASE("run_point is bit-reproducible across worker counts and runs") {
  const SimConfig cfg = reference_config(6.0, 424242, 100, 1u << 20);
  const TrialCounts w1 = run_point(cfg, 1);
  const TrialCounts w1b = run_point(cfg, 1);
  const TrialCounts w4 = run_point(cfg, 4);
  const TrialCounts w8 = run_point(cfg, 8);
  for (const TrialCounts* t : {&w1b, &w4, &w8}) {
    CHECK(t->bits == w1.bits);
    CHECK(t->relay_err_s1 == w1.relay_err_s1);
    CHECK(t->relay_err_s2 == w1.relay_err_s2);
    CHECK(t->phase2_err_u1 == w1.phase2_err_u1);
    CHECK(t->phase2_err_u2 == w1.phase2_err_u2);
    CHECK(t->e2e_err_u1 == w1.e2e_err_u1);
    CHECK(t->e2e_err_u2 == w1.e2e_err_u2);
  }
  // Different seed, different tallies.
  SimConfig other = cfg;
  other.master_seed = 7;
  CHECK(run_point(other, 2).relay_err_s2 != w1.relay_err_s2);
}

TEST_CASE("pure-noise limit sends every ber to one half") {
  SimConfig cfg = reference_config(-100.0, 11, 100, 1u << 20);
  const TrialCounts c = run_point(cfg, 2);
  const double n = static_cast<double>(c.bits);
  for (std::uint64_t errs : {c.relay_err_s1, c.relay_err_s2, c.phase2_err_u1,
                             c.phase2_err_u2}) {
    CHECK(std::abs(errs / n - 0.5) < 4.0 * std::sqrt(0.25 / n));
  }
  // Independent phase flips push the e2e rate toward 1/2 as well, but from
  // composed events; just require the same band.
  CHECK(std::abs(c.e2e_err_u1 / n - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("budget exhaustion is flagged and bounded") {
  SimConfig cfg = reference_config(30.0, 3, 400, 1u << 16);
  const TrialCounts c = run_point(cfg, 2);
  CHECK(c.budget_exhausted);
  CHECK(c.bits == (1u << 16));
}

TEST_CASE("stage error rates agree with the analytic forms at 10 dB") {
  const SimConfig cfg = reference_config(10.0, 20240601, 400, 100'000'000);
  const TrialCounts c = run_point(cfg, 2);
  CHECK(!c.budget_exhausted);
  const AberBreakdown b = e2e_aber(cfg.scenario, cfg.protocol, cfg.pa, 10.0);

  CHECK(c.relay_err_s1 >= 400);
  CHECK(within_sigma(static_cast<double>(c.relay_err_s1) / c.bits, b.relay_s1,
                     c.relay_err_s1, c.bits, 4.0));
  CHECK(within_sigma(static_cast<double>(c.relay_err_s2) / c.bits, b.relay_s2,
                     c.relay_err_s2, c.bits, 4.0));
  CHECK(within_sigma(static_cast<double>(c.phase2_err_u1) / c.bits, b.phase2_u1,
                     c.phase2_err_u1, c.bits, 4.0));
  CHECK(within_sigma(static_cast<double>(c.phase2_err_u2) / c.bits, b.phase2_u2,
                     c.phase2_err_u2, c.bits, 4.0));

  // Union bound on the end-to-end rates.
  CHECK(c.e2e_err_u1 / static_cast<double>(c.bits) <=
        static_cast<double>(c.relay_err_s1 + c.phase2_err_u1) / c.bits);
  CHECK(c.e2e_err_u2 / static_cast<double>(c.bits) <=
        static_cast<double>(c.relay_err_s2 + c.phase2_err_u2) / c.bits);
}

TEST_CASE("no-EH stage error rates agree with the analytic forms at 10 dB") {
  SimConfig cfg = reference_config(10.0, 555, 400, 100'000'000);
  cfg.protocol = EhProtocol::no_eh();
  const TrialCounts c = run_point(cfg, 2);
  const AberBreakdown b = e2e_aber(cfg.scenario, cfg.protocol, cfg.pa, 10.0);
  CHECK(within_sigma(static_cast<double>(c.relay_err_s2) / c.bits, b.relay_s2,
                     c.relay_err_s2, c.bits, 4.0));
  CHECK(within_sigma(static_cast<double>(c.phase2_err_u1) / c.bits, b.phase2_u1,
                     c.phase2_err_u1, c.bits, 4.0));
  CHECK(within_sigma(static_cast<double>(c.phase2_err_u2) / c.bits, b.phase2_u2,
                     c.phase2_err_u2, c.bits, 4.0));
  // Without the harvested-power coupling the union model is near exact.
  CHECK(within_sigma(static_cast<double>(c.e2e_err_u1) / c.bits, b.e2e_u1,
                     c.e2e_err_u1, c.bits, 4.0));
}

TEST_CASE("sim config validation") {
  SimConfig cfg = reference_config(10.0, 1, 400, 1u << 20);
  CHECK_THROWS_AS(run_point(cfg, 0), std::invalid_argument);
  cfg.stop.min_errors = 50;
  CHECK_THROWS_AS(run_point(cfg, 1), std::invalid_argument);
  cfg.stop.min_errors = 400;
  cfg.total_snr_db = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(run_point(cfg, 1), std::invalid_argument);
}
