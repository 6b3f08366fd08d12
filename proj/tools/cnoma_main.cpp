// Experiment driver: analytic/simulated BER sweeps, EH and power-allocation
// grid optimization, CSV emission.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cnoma/harness.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void warn_degenerate_protocols(const cnoma::SweepSpec& spec) {
  for (const auto& p : spec.protocols) {
    if (p.harvests() && cnoma::derive_power(p).varpi == 0.0) {
      std::cerr << "warning: protocol " << cnoma::to_string(p.kind())
                << " with rho=1 leaves no information power in phase 1\n";
    }
  }
  if (spec.axis == cnoma::SweepAxis::EhGrid) {
    for (double rho : spec.rho_grid.values) {
      if (rho == 1.0) {
        std::cerr << "warning: rho=1 grid cells leave no information power "
                     "in phase 1\n";
        break;
      }
    }
  }
}

int run_sweep_command(const cnoma::SweepSpec& spec, const std::string& digest,
                      const std::string& out, int workers) {
  warn_degenerate_protocols(spec);
  cnoma::RunManifest manifest;
  manifest.config_digest = digest;
  const auto rows = cnoma::run_sweep(spec, workers, &manifest);
  cnoma::write_results(rows, manifest, out);
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return 0;
}

cnoma::Grid grid_or_default(const cnoma::Grid& grid, double start, double stop,
                            double step) {
  return grid.values.empty() ? cnoma::Grid::range(start, stop, step) : grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative-NOMA link ABER engine with a harvesting relay"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string out_path = "results.csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  app.add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  app.add_option("--out", out_path, "output CSV path");
  app.add_option("--seed", seed, "master seed override")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--workers", workers, "worker thread count")
      ->check(CLI::PositiveNumber);

  auto* cmd_analytic = app.add_subcommand("analytic", "analytic sweep");
  auto* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo sweep");
  auto* cmd_compare = app.add_subcommand("compare", "analytic and Monte Carlo sweep");
  auto* cmd_sweep_alpha = app.add_subcommand("sweep-alpha", "sweep the power split");
  auto* cmd_sweep_eh = app.add_subcommand("sweep-eh", "sweep the EH factor grid");
  auto* cmd_opt_eh = app.add_subcommand("optimize-eh", "grid argmin over (beta, rho)");
  auto* cmd_opt_alpha = app.add_subcommand("optimize-alpha", "grid argmin over alpha2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }

  try {
    const std::string text = slurp(config_path);
    cnoma::SweepSpec spec = cnoma::parse_config(text);
    const std::string digest = cnoma::config_digest(text);
    if (seed_given) spec.master_seed = seed;

    if (cmd_analytic->parsed()) {
      spec.mode = cnoma::SweepMode::Analytic;
      return run_sweep_command(spec, digest, out_path, workers);
    }
    if (cmd_simulate->parsed()) {
      spec.mode = cnoma::SweepMode::Simulate;
      return run_sweep_command(spec, digest, out_path, workers);
    }
    if (cmd_compare->parsed()) {
      spec.mode = cnoma::SweepMode::Both;
      return run_sweep_command(spec, digest, out_path, workers);
    }
    if (cmd_sweep_alpha->parsed()) {
      spec.axis = cnoma::SweepAxis::Alpha2;
      return run_sweep_command(spec, digest, out_path, workers);
    }
    if (cmd_sweep_eh->parsed()) {
      spec.axis = cnoma::SweepAxis::EhGrid;
      spec.beta_grid = grid_or_default(spec.beta_grid, 0.0, 0.9, 0.05);
      spec.rho_grid = grid_or_default(spec.rho_grid, 0.0, 0.95, 0.05);
      return run_sweep_command(spec, digest, out_path, workers);
    }
    if (cmd_opt_eh->parsed()) {
      const auto beta_grid = grid_or_default(spec.beta_grid, 0.0, 0.9, 0.05);
      const auto rho_grid = grid_or_default(spec.rho_grid, 0.0, 0.95, 0.05);
      const auto pa = cnoma::PowerAllocation::from_alpha2(spec.alpha2);
      for (const auto& sc : spec.scenarios) {
        const auto opt = cnoma::optimize_eh(sc, pa, spec.total_snr_db, beta_grid,
                                            rho_grid, spec.objective, spec.eta);
        nlohmann::json j{{"scenario", sc.name},
                         {"beta_star", opt.beta},
                         {"rho_star", opt.rho},
                         {"objective", cnoma::to_string(spec.objective)},
                         {"value", opt.value}};
        std::cout << j.dump() << "\n";
      }
      return 0;
    }
    if (cmd_opt_alpha->parsed()) {
      // The config grid is only an alpha2 grid when the axis says so.
      const auto grid = spec.axis == cnoma::SweepAxis::Alpha2
                            ? spec.grid
                            : cnoma::Grid::range(0.025, 0.5, 0.025);
      for (const auto& sc : spec.scenarios) {
        for (const auto& prot : spec.protocols) {
          const auto opt = cnoma::optimize_alpha(sc, prot, spec.total_snr_db,
                                                 grid, spec.objective);
          nlohmann::json j{{"scenario", sc.name},
                           {"protocol", cnoma::to_string(prot.kind())},
                           {"alpha2_star", opt.alpha2},
                           {"objective", cnoma::to_string(spec.objective)},
                           {"value", opt.value}};
          std::cout << j.dump() << "\n";
        }
      }
      return 0;
    }
    throw std::runtime_error("no subcommand handled");
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
