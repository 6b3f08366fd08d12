#pragma once

#include <cstdint>

#include "cnoma/channel.hpp"
#include "cnoma/protocol.hpp"

namespace cnoma {

/// A point stops once every tracked error counter holds min_errors, or the
/// frame budget is exhausted (the estimate is then flagged low-confidence).
struct StoppingRule {
  std::uint64_t min_errors = 400;
  std::uint64_t max_bits = 100'000'000;
};

struct SimConfig {
  Scenario scenario;
  EhProtocol protocol;
  PowerAllocation pa;
  double total_snr_db;
  std::uint64_t master_seed = 1;
  StoppingRule stop;
};

/// Error tallies of one simulated point. Each frame carries one bit per user;
/// relay counters compare relay decisions against source bits, phase2
/// counters compare user decisions against the bits the relay re-encoded,
/// e2e counters compare user decisions against source bits.
struct TrialCounts {
  std::uint64_t bits = 0;
  std::uint64_t relay_err_s1 = 0;
  std::uint64_t relay_err_s2 = 0;
  std::uint64_t phase2_err_u1 = 0;
  std::uint64_t phase2_err_u2 = 0;
  std::uint64_t e2e_err_u1 = 0;
  std::uint64_t e2e_err_u2 = 0;
  bool budget_exhausted = false;

  TrialCounts& merge(const TrialCounts& other);
};

struct BerEstimate {
  double ber;
  std::uint64_t n_bits;
  std::uint64_t n_errors;
  double ci95_halfwidth;

  static BerEstimate from_counts(std::uint64_t errors, std::uint64_t bits);
};

/// Sign decision on the matched-filter output; with the strong user holding
/// the larger power share this is the MLD for its symbol (ties go to +1).
int detect_s1(double y, double h_gain, double tx_power, const PowerAllocation& pa);

/// Subtract the reconstructed strong-user component, then sign decision.
int sic_detect_s2(double y, double h_gain, double tx_power, int s1_hat,
                  const PowerAllocation& pa);

/// Counter-mode seed derivation; injective in batch_index for a fixed master.
std::uint64_t derive_batch_seed(std::uint64_t master_seed, std::uint64_t batch_index);

/// Simulate one operating point of the full chain. Batches execute on up to
/// `workers` threads in fixed-size rounds; results are bit-identical for any
/// worker count and a fixed master seed.
TrialCounts run_point(const SimConfig& cfg, int workers = 1);

}  // namespace cnoma
