#include "cnoma/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include "cnoma/rng.hpp"

namespace cnoma {

namespace {

constexpr std::uint64_t kBatchFrames = 32768;
constexpr int kBatchesPerRound = 8;

struct PointPhysics {
  double ps;            // source power (noise power normalized to 1)
  double ps_info;       // information power at the relay: ps * varpi
  double psi;           // harvest gain; < 0 marks the no-EH relay
  double sqrt_a1;
  double sqrt_a2;
};

TrialCounts run_batch(const SimConfig& cfg, const PointPhysics& ph,
                      std::uint64_t seed, std::uint64_t frames) {
  Rng rng(seed);
  TrialCounts c;
  c.bits = frames;
  const FadingParams& fr = cfg.scenario.relay_link;
  const FadingParams& f1 = cfg.scenario.user1_link;
  const FadingParams& f2 = cfg.scenario.user2_link;
  const double th_r = fr.omega / fr.m;
  const double th_1 = f1.omega / f1.m;
  const double th_2 = f2.omega / f2.m;
  for (std::uint64_t i = 0; i < frames; ++i) {
    const double gr = rng.gamma(fr.m, th_r);
    const double g1 = rng.gamma(f1.m, th_1);
    const double g2 = rng.gamma(f2.m, th_2);
    const int s1 = rng.uniform() < 0.5 ? 1 : -1;
    const int s2 = rng.uniform() < 0.5 ? 1 : -1;

    // Phase 1: superposed signal at the relay, MLD then SIC.
    const double x_src = ph.sqrt_a1 * s1 + ph.sqrt_a2 * s2;
    const double y_r = std::sqrt(ph.ps_info * gr) * x_src + rng.normal();
    const int s1_hat = detect_s1(y_r, gr, ph.ps_info, cfg.pa);
    const int s2_hat = sic_detect_s2(y_r, gr, ph.ps_info, s1_hat, cfg.pa);
    c.relay_err_s1 += s1_hat != s1;
    c.relay_err_s2 += s2_hat != s2;

    // Phase 2: relay re-encodes its decisions and forwards them with the
    // power harvested from this frame's relay-link gain.
    const double pr = ph.psi < 0.0 ? ph.ps : ph.ps * gr * ph.psi;
    const double x_rel = ph.sqrt_a1 * s1_hat + ph.sqrt_a2 * s2_hat;
    const double y_1 = std::sqrt(pr * g1) * x_rel + rng.normal();
    const int u1_hat = detect_s1(y_1, g1, pr, cfg.pa);
    const double y_2 = std::sqrt(pr * g2) * x_rel + rng.normal();
    const int u2_s1 = detect_s1(y_2, g2, pr, cfg.pa);
    const int u2_hat = sic_detect_s2(y_2, g2, pr, u2_s1, cfg.pa);

    c.phase2_err_u1 += u1_hat != s1_hat;
    c.phase2_err_u2 += u2_hat != s2_hat;
    c.e2e_err_u1 += u1_hat != s1;
    c.e2e_err_u2 += u2_hat != s2;
  }
  return c;
}

bool stop_satisfied(const TrialCounts& c, const StoppingRule& stop) {
  const std::uint64_t slowest =
      std::min({c.relay_err_s1, c.relay_err_s2, c.phase2_err_u1,
                c.phase2_err_u2, c.e2e_err_u1, c.e2e_err_u2});
  return slowest >= stop.min_errors;
}

}  // namespace

TrialCounts& TrialCounts::merge(const TrialCounts& other) {
  bits += other.bits;
  relay_err_s1 += other.relay_err_s1;
  relay_err_s2 += other.relay_err_s2;
  phase2_err_u1 += other.phase2_err_u1;
  phase2_err_u2 += other.phase2_err_u2;
  e2e_err_u1 += other.e2e_err_u1;
  e2e_err_u2 += other.e2e_err_u2;
  budget_exhausted = budget_exhausted || other.budget_exhausted;
  return *this;
}

BerEstimate BerEstimate::from_counts(std::uint64_t errors, std::uint64_t bits) {
  if (bits == 0) {
    throw std::domain_error("BerEstimate: no bits observed");
  }
  const double p = static_cast<double>(errors) / static_cast<double>(bits);
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(bits));
  return {p, bits, errors, 1.959963984540054 * se};
}

int detect_s1(double y, double /*h_gain*/, double /*tx_power*/,
              const PowerAllocation& /*pa*/) {
  return y >= 0.0 ? 1 : -1;
}

int sic_detect_s2(double y, double h_gain, double tx_power, int s1_hat,
                  const PowerAllocation& pa) {
  const double residual = y - std::sqrt(tx_power * pa.alpha1() * h_gain) * s1_hat;
  return residual >= 0.0 ? 1 : -1;
}

std::uint64_t derive_batch_seed(std::uint64_t master_seed,
                                std::uint64_t batch_index) {
  return mix64(master_seed ^ mix64(batch_index));
}

TrialCounts run_point(const SimConfig& cfg, int workers) {
  if (workers < 1) {
    throw std::invalid_argument("run_point: workers must be >= 1");
  }
  if (cfg.stop.min_errors < 100) {
    throw std::invalid_argument("run_point: stopping rule needs min_errors >= 100");
  }
  if (!std::isfinite(cfg.total_snr_db)) {
    throw std::invalid_argument("run_point: total_snr_db must be finite");
  }
  const DerivedPower dp = derive_power(cfg.protocol);
  PointPhysics ph;
  ph.ps = dp.phi * std::pow(10.0, cfg.total_snr_db / 10.0);
  ph.ps_info = ph.ps * dp.varpi;
  ph.psi = dp.psi ? *dp.psi : -1.0;
  ph.sqrt_a1 = std::sqrt(cfg.pa.alpha1());
  ph.sqrt_a2 = std::sqrt(cfg.pa.alpha2());

  TrialCounts total;
  std::uint64_t next_batch = 0;
  // Fixed-size rounds keep the set of executed batches (and hence the merged
  // totals) independent of the worker count.
  while (!stop_satisfied(total, cfg.stop) && total.bits < cfg.stop.max_bits) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> plan;  // index, frames
    std::uint64_t planned = total.bits;
    for (int b = 0; b < kBatchesPerRound && planned < cfg.stop.max_bits; ++b) {
      const std::uint64_t frames =
          std::min<std::uint64_t>(kBatchFrames, cfg.stop.max_bits - planned);
      plan.emplace_back(next_batch++, frames);
      planned += frames;
    }
    std::vector<TrialCounts> results(plan.size());
    const std::size_t stride = static_cast<std::size_t>(workers);
    for (std::size_t start = 0; start < plan.size(); start += stride) {
      const std::size_t end = std::min(plan.size(), start + stride);
      std::vector<std::future<TrialCounts>> wave;
      for (std::size_t k = start; k < end; ++k) {
        const auto [index, frames] = plan[k];
        wave.push_back(std::async(
            workers > 1 ? std::launch::async : std::launch::deferred,
            [&cfg, &ph, index, frames] {
              return run_batch(cfg, ph, derive_batch_seed(cfg.master_seed, index),
                               frames);
            }));
      }
      for (std::size_t k = start; k < end; ++k) {
        results[k] = wave[k - start].get();
      }
    }
    for (const auto& r : results) total.merge(r);
  }
  total.budget_exhausted = !stop_satisfied(total, cfg.stop);
  return total;
}

}  // namespace cnoma
