#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnoma/analytic.hpp"
#include "cnoma/simulator.hpp"

namespace cnoma {

enum class SweepAxis { Snr, Alpha2, EhGrid };
enum class SweepMode { Analytic, Simulate, Both };
enum class Objective { MaxUser, U1, U2, Mean };

const char* to_string(SweepAxis axis);
const char* to_string(SweepMode mode);
const char* to_string(Objective objective);

/// Inclusive numeric grid, either start/stop/step or an explicit list.
struct Grid {
  std::vector<double> values;

  static Grid range(double start, double stop, double step);
  static Grid list(std::vector<double> values);
};

/// One experiment: a grid over the chosen axis, crossed with the fixed
/// scenarios and protocols, evaluated analytically and/or by simulation.
struct SweepSpec {
  SweepAxis axis = SweepAxis::Snr;
  SweepMode mode = SweepMode::Analytic;
  std::vector<Scenario> scenarios;
  std::vector<EhProtocol> protocols;
  double alpha2 = 0.1;          // fixed share when axis != Alpha2
  double total_snr_db = 20.0;   // fixed SNR when axis != Snr
  Grid grid;                    // snr or alpha2 axis grid
  Grid beta_grid;               // EhGrid axis
  Grid rho_grid;                // EhGrid axis
  double eta = 0.95;            // EhGrid axis harvest efficiency
  std::uint64_t master_seed = 1;
  StoppingRule stop;
  Objective objective = Objective::MaxUser;
};

/// One CSV row: a (grid point, protocol, user, stage) cell with whichever of
/// the analytic / Monte Carlo columns the sweep mode fills.
struct ResultRow {
  std::string scenario;
  std::string protocol;
  double beta = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  double alpha2 = 0.0;
  double snr_db = 0.0;
  int user = 1;
  std::string stage;  // relay | phase2 | e2e
  std::optional<double> ber_analytic;
  std::optional<double> ber_mc;
  std::optional<std::uint64_t> n_bits;
  std::optional<std::uint64_t> n_errors;
  std::optional<double> ci95;
};

struct RunManifest {
  std::string config_digest;
  std::uint64_t master_seed = 0;
  std::string artifact_version;
  double wall_clock_sec = 0.0;
  std::vector<std::string> budget_flags;  // points that hit the frame budget
  std::vector<std::string> failures;      // points whose evaluation failed
};

/// Expand the sweep into rows, deterministically ordered by
/// (scenario, protocol, grid point, user, stage).
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers = 1,
                                 RunManifest* manifest = nullptr);

struct EhOptimum {
  double beta;
  double rho;
  double value;
};

/// Exhaustive grid argmin of the analytic e2e objective over (beta, rho)
/// for the hybrid protocol; ties break toward smaller beta, then rho.
EhOptimum optimize_eh(const Scenario& scenario, const PowerAllocation& pa,
                      double total_snr_db, const Grid& beta_grid,
                      const Grid& rho_grid, Objective objective,
                      double eta = 0.95);

struct AlphaOptimum {
  double alpha2;
  double value;
};

/// Exhaustive grid argmin of the analytic e2e objective over alpha2.
AlphaOptimum optimize_alpha(const Scenario& scenario, const EhProtocol& protocol,
                            double total_snr_db, const Grid& alpha2_grid,
                            Objective objective);

/// Write rows as CSV (fixed header, shortest round-trip floats, absent
/// values empty) and the manifest as JSON next to it.
void write_results(const std::vector<ResultRow>& rows, const RunManifest& manifest,
                   const std::string& path);

/// Location of the manifest written next to a CSV ("out.csv" -> "out.manifest.json").
std::string manifest_path_for(const std::string& csv_path);

std::vector<ResultRow> read_results_csv(const std::string& path);

/// Parse an experiment config document (JSON). Throws std::runtime_error
/// with a descriptive message on malformed input.
SweepSpec load_config(const std::string& path);
SweepSpec parse_config(const std::string& json_text);

/// Digest of the canonicalized config document (key order independent).
std::string config_digest(const std::string& json_text);

}  // namespace cnoma
