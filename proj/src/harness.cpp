#include "cnoma/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cnoma {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_u64(std::uint64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& s, const char* what) {
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(std::string("csv: bad ") + what + " value '" + s + "'");
  }
  return v;
}

struct PointParams {
  const Scenario* scenario;
  EhProtocol protocol;
  PowerAllocation pa;
  double snr_db;
};

struct PointResult {
  std::optional<AberBreakdown> analytic;
  std::optional<TrialCounts> mc;
  std::string error;
};

std::string point_label(const PointParams& p) {
  std::ostringstream os;
  os << "scenario=" << p.scenario->name << " protocol="
     << to_string(p.protocol.kind()) << " beta=" << p.protocol.beta()
     << " rho=" << p.protocol.rho() << " alpha2=" << p.pa.alpha2()
     << " snr_db=" << p.snr_db;
  return os.str();
}

PointResult evaluate_point(const PointParams& p, const SweepSpec& spec,
                           std::uint64_t point_seed, int sim_workers) {
  PointResult out;
  try {
    if (spec.mode != SweepMode::Simulate) {
      out.analytic = e2e_aber(*p.scenario, p.protocol, p.pa, p.snr_db);
    }
    if (spec.mode != SweepMode::Analytic) {
      SimConfig cfg{*p.scenario, p.protocol, p.pa, p.snr_db, point_seed,
                    spec.stop};
      out.mc = run_point(cfg, sim_workers);
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void emit_rows(const PointParams& p, const PointResult& r,
               std::vector<ResultRow>& rows) {
  static constexpr const char* kStages[] = {"relay", "phase2", "e2e"};
  for (int user = 1; user <= 2; ++user) {
    for (int st = 0; st < 3; ++st) {
      ResultRow row;
      row.scenario = p.scenario->name;
      row.protocol = to_string(p.protocol.kind());
      row.beta = p.protocol.beta();
      row.rho = p.protocol.rho();
      row.eta = p.protocol.harvests() ? p.protocol.eta() : 0.0;
      row.alpha2 = p.pa.alpha2();
      row.snr_db = p.snr_db;
      row.user = user;
      row.stage = kStages[st];
      if (r.analytic) {
        const AberBreakdown& b = *r.analytic;
        if (st == 0) row.ber_analytic = user == 1 ? b.relay_s1 : b.relay_s2;
        if (st == 1) row.ber_analytic = user == 1 ? b.phase2_u1 : b.phase2_u2;
        if (st == 2) row.ber_analytic = user == 1 ? b.e2e_u1 : b.e2e_u2;
      }
      if (r.mc) {
        const TrialCounts& c = *r.mc;
        std::uint64_t errors = 0;
        if (st == 0) errors = user == 1 ? c.relay_err_s1 : c.relay_err_s2;
        if (st == 1) errors = user == 1 ? c.phase2_err_u1 : c.phase2_err_u2;
        if (st == 2) errors = user == 1 ? c.e2e_err_u1 : c.e2e_err_u2;
        const BerEstimate est = BerEstimate::from_counts(errors, c.bits);
        row.ber_mc = est.ber;
        row.n_bits = est.n_bits;
        row.n_errors = est.n_errors;
        row.ci95 = est.ci95_halfwidth;
      }
      rows.push_back(std::move(row));
    }
  }
}

double objective_value(const AberBreakdown& b, Objective objective) {
  switch (objective) {
    case Objective::MaxUser: return std::max(b.e2e_u1, b.e2e_u2);
    case Objective::U1: return b.e2e_u1;
    case Objective::U2: return b.e2e_u2;
    case Objective::Mean: return 0.5 * (b.e2e_u1 + b.e2e_u2);
  }
  throw std::logic_error("objective_value: unknown objective");
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

FadingParams parse_fading(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("m") || !j.contains("omega")) {
    throw std::runtime_error(std::string("config: ") + what +
                             " needs {m, omega}");
  }
  return FadingParams(j.at("m").get<double>(), j.at("omega").get<double>());
}

EhProtocol parse_protocol(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double beta = j.value("beta", 0.0);
  const double rho = j.value("rho", 0.0);
  const double eta = j.value("eta", 0.95);
  if (kind == "none") return EhProtocol::no_eh();
  if (kind == "ps") return EhProtocol::power_split(rho, eta);
  if (kind == "ts") return EhProtocol::time_switch(beta, eta);
  if (kind == "hybrid") return EhProtocol::hybrid(beta, rho, eta);
  throw std::runtime_error("config: unknown protocol kind '" + kind + "'");
}

Grid parse_grid(const json& j, const char* what) {
  if (j.is_object() && j.contains("values")) {
    return Grid::list(j.at("values").get<std::vector<double>>());
  }
  if (j.is_object() && j.contains("start")) {
    return Grid::range(j.at("start").get<double>(), j.at("stop").get<double>(),
                       j.at("step").get<double>());
  }
  if (j.is_array()) {
    return Grid::list(j.get<std::vector<double>>());
  }
  throw std::runtime_error(std::string("config: grid '") + what +
                           "' needs {start,stop,step} or {values}");
}

}  // namespace

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Snr: return "snr";
    case SweepAxis::Alpha2: return "alpha2";
    case SweepAxis::EhGrid: return "eh_grid";
  }
  return "?";
}

const char* to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::Analytic: return "analytic";
    case SweepMode::Simulate: return "simulate";
    case SweepMode::Both: return "both";
  }
  return "?";
}

const char* to_string(Objective objective) {
  switch (objective) {
    case Objective::MaxUser: return "max_user";
    case Objective::U1: return "u1";
    case Objective::U2: return "u2";
    case Objective::Mean: return "mean";
  }
  return "?";
}

Grid Grid::range(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) ||
      stop < start) {
    throw std::invalid_argument("Grid::range: need finite start <= stop, step > 0");
  }
  Grid g;
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  g.values.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    g.values.push_back(start + i * step);
  }
  return g;
}

Grid Grid::list(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("Grid::list: grid must be non-empty");
  }
  Grid g;
  g.values = std::move(values);
  return g;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers,
                                 RunManifest* manifest) {
  const auto t0 = std::chrono::steady_clock::now();
  if (spec.scenarios.empty()) {
    throw std::invalid_argument("run_sweep: no scenarios given");
  }
  if (spec.axis != SweepAxis::EhGrid && spec.protocols.empty()) {
    throw std::invalid_argument("run_sweep: no protocols given");
  }
  if (workers < 1) {
    throw std::invalid_argument("run_sweep: workers must be >= 1");
  }

  // Deterministic point enumeration: scenario-major, then protocol/grid.
  std::vector<PointParams> points;
  for (const Scenario& sc : spec.scenarios) {
    if (spec.axis == SweepAxis::Snr) {
      for (const EhProtocol& prot : spec.protocols) {
        for (double snr : spec.grid.values) {
          points.push_back({&sc, prot, PowerAllocation::from_alpha2(spec.alpha2), snr});
        }
      }
    } else if (spec.axis == SweepAxis::Alpha2) {
      for (const EhProtocol& prot : spec.protocols) {
        for (double a2 : spec.grid.values) {
          points.push_back({&sc, prot, PowerAllocation::from_alpha2(a2),
                            spec.total_snr_db});
        }
      }
    } else {
      for (double beta : spec.beta_grid.values) {
        for (double rho : spec.rho_grid.values) {
          points.push_back({&sc, EhProtocol::hybrid(beta, rho, spec.eta),
                            PowerAllocation::from_alpha2(spec.alpha2),
                            spec.total_snr_db});
        }
      }
    }
  }
  if (points.empty()) {
    throw std::invalid_argument("run_sweep: empty grid");
  }

  std::vector<PointResult> results(points.size());
  if (spec.mode == SweepMode::Analytic && workers > 1) {
    // Analytic points are independent; dispatch in bounded waves.
    for (std::size_t start = 0; start < points.size();
         start += static_cast<std::size_t>(workers)) {
      const std::size_t end =
          std::min(points.size(), start + static_cast<std::size_t>(workers));
      std::vector<std::future<PointResult>> wave;
      for (std::size_t k = start; k < end; ++k) {
        wave.push_back(std::async(std::launch::async, [&, k] {
          return evaluate_point(points[k], spec,
                                derive_batch_seed(spec.master_seed, k), 1);
        }));
      }
      for (std::size_t k = start; k < end; ++k) {
        results[k] = wave[k - start].get();
      }
    }
  } else {
    // Simulation points run one at a time; each point parallelizes its own
    // frame batches, which keeps results independent of the worker count.
    for (std::size_t k = 0; k < points.size(); ++k) {
      results[k] = evaluate_point(points[k], spec,
                                  derive_batch_seed(spec.master_seed, k), workers);
    }
  }

  std::vector<ResultRow> rows;
  rows.reserve(points.size() * 6);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!results[k].error.empty()) {
      std::cerr << "point failed: " << point_label(points[k]) << ": "
                << results[k].error << "\n";
      if (manifest) {
        manifest->failures.push_back(point_label(points[k]) + ": " +
                                     results[k].error);
      }
    }
    if (manifest && results[k].mc && results[k].mc->budget_exhausted) {
      manifest->budget_flags.push_back(point_label(points[k]));
    }
    emit_rows(points[k], results[k], rows);
  }
  if (manifest) {
    manifest->master_seed = spec.master_seed;
    manifest->artifact_version = "0.1.0";
    manifest->wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
  return rows;
}

EhOptimum optimize_eh(const Scenario& scenario, const PowerAllocation& pa,
                      double total_snr_db, const Grid& beta_grid,
                      const Grid& rho_grid, Objective objective, double eta) {
  EhOptimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  bool found = false;
  for (double beta : beta_grid.values) {
    for (double rho : rho_grid.values) {
      try {
        const AberBreakdown b = e2e_aber(
            scenario, EhProtocol::hybrid(beta, rho, eta), pa, total_snr_db);
        const double v = objective_value(b, objective);
        if (!found || v < best.value) {
          best = {beta, rho, v};
          found = true;
        }
      } catch (const std::exception& e) {
        std::cerr << "optimize_eh: skipped beta=" << beta << " rho=" << rho
                  << ": " << e.what() << "\n";
      }
    }
  }
  if (!found) {
    throw std::runtime_error("optimize_eh: every grid cell failed");
  }
  return best;
}

AlphaOptimum optimize_alpha(const Scenario& scenario, const EhProtocol& protocol,
                            double total_snr_db, const Grid& alpha2_grid,
                            Objective objective) {
  AlphaOptimum best{0.0, std::numeric_limits<double>::infinity()};
  bool found = false;
  for (double a2 : alpha2_grid.values) {
    try {
      const AberBreakdown b = e2e_aber(
          scenario, protocol, PowerAllocation::from_alpha2(a2), total_snr_db);
      const double v = objective_value(b, objective);
      if (!found || v < best.value) {
        best = {a2, v};
        found = true;
      }
    } catch (const std::exception& e) {
      std::cerr << "optimize_alpha: skipped alpha2=" << a2 << ": " << e.what()
                << "\n";
    }
  }
  if (!found) {
    throw std::runtime_error("optimize_alpha: every grid cell failed");
  }
  return best;
}

static const char* kCsvHeader =
    "scenario,protocol,beta,rho,eta,alpha2,snr_db,user,stage,ber_analytic,"
    "ber_mc,n_bits,n_errors,ci95";

std::string manifest_path_for(const std::string& csv_path) {
  std::string base = csv_path;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") {
    base.resize(base.size() - 4);
  }
  return base + ".manifest.json";
}

void write_results(const std::vector<ResultRow>& rows, const RunManifest& manifest,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_results: cannot open '" + path + "'");
  }
  out << kCsvHeader << "\n";
  for (const ResultRow& r : rows) {
    out << r.scenario << ',' << r.protocol << ',' << format_double(r.beta)
        << ',' << format_double(r.rho) << ',' << format_double(r.eta) << ','
        << format_double(r.alpha2) << ',' << format_double(r.snr_db) << ','
        << r.user << ',' << r.stage << ','
        << (r.ber_analytic ? format_double(*r.ber_analytic) : "") << ','
        << (r.ber_mc ? format_double(*r.ber_mc) : "") << ','
        << (r.n_bits ? format_u64(*r.n_bits) : "") << ','
        << (r.n_errors ? format_u64(*r.n_errors) : "") << ','
        << (r.ci95 ? format_double(*r.ci95) : "") << "\n";
  }
  if (!out) {
    throw std::runtime_error("write_results: failed writing '" + path + "'");
  }

  json m;
  m["config_digest"] = manifest.config_digest;
  m["master_seed"] = manifest.master_seed;
  m["artifact_version"] = manifest.artifact_version;
  m["wall_clock_sec"] = manifest.wall_clock_sec;
  m["budget_flags"] = manifest.budget_flags;
  m["failures"] = manifest.failures;
  const std::string mpath = manifest_path_for(path);
  std::ofstream mout(mpath);
  if (!mout) {
    throw std::runtime_error("write_results: cannot open '" + mpath + "'");
  }
  mout << m.dump(2) << "\n";
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_results_csv: cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("read_results_csv: unexpected header in '" + path + "'");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const std::size_t c = line.find(',', pos);
      f.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (f.size() != 14) {
      throw std::runtime_error("read_results_csv: malformed row '" + line + "'");
    }
    ResultRow r;
    r.scenario = f[0];
    r.protocol = f[1];
    r.beta = parse_double_field(f[2], "beta");
    r.rho = parse_double_field(f[3], "rho");
    r.eta = parse_double_field(f[4], "eta");
    r.alpha2 = parse_double_field(f[5], "alpha2");
    r.snr_db = parse_double_field(f[6], "snr_db");
    r.user = static_cast<int>(parse_double_field(f[7], "user"));
    r.stage = f[8];
    if (!f[9].empty()) r.ber_analytic = parse_double_field(f[9], "ber_analytic");
    if (!f[10].empty()) r.ber_mc = parse_double_field(f[10], "ber_mc");
    if (!f[11].empty()) r.n_bits = static_cast<std::uint64_t>(parse_double_field(f[11], "n_bits"));
    if (!f[12].empty()) r.n_errors = static_cast<std::uint64_t>(parse_double_field(f[12], "n_errors"));
    if (!f[13].empty()) r.ci95 = parse_double_field(f[13], "ci95");
    rows.push_back(std::move(r));
  }
  return rows;
}

SweepSpec parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  SweepSpec spec;

  const std::string axis = j.value("axis", "snr");
  if (axis == "snr") spec.axis = SweepAxis::Snr;
  else if (axis == "alpha2") spec.axis = SweepAxis::Alpha2;
  else if (axis == "eh_grid") spec.axis = SweepAxis::EhGrid;
  else throw std::runtime_error("config: unknown axis '" + axis + "'");

  const std::string mode = j.value("mode", "analytic");
  if (mode == "analytic") spec.mode = SweepMode::Analytic;
  else if (mode == "simulate") spec.mode = SweepMode::Simulate;
  else if (mode == "both") spec.mode = SweepMode::Both;
  else throw std::runtime_error("config: unknown mode '" + mode + "'");

  const std::string objective = j.value("objective", "max_user");
  if (objective == "max_user") spec.objective = Objective::MaxUser;
  else if (objective == "u1") spec.objective = Objective::U1;
  else if (objective == "u2") spec.objective = Objective::U2;
  else if (objective == "mean") spec.objective = Objective::Mean;
  else throw std::runtime_error("config: unknown objective '" + objective + "'");

  if (!j.contains("scenarios") || !j.at("scenarios").is_array() ||
      j.at("scenarios").empty()) {
    throw std::runtime_error("config: 'scenarios' must be a non-empty array");
  }
  for (const json& js : j.at("scenarios")) {
    const std::string name = js.at("name").get<std::string>();
    if (name.find(',') != std::string::npos) {
      throw std::runtime_error("config: scenario names must not contain commas");
    }
    spec.scenarios.push_back(Scenario{name, parse_fading(js.at("relay"), "relay"),
                                      parse_fading(js.at("user1"), "user1"),
                                      parse_fading(js.at("user2"), "user2")});
  }
  if (j.contains("protocols")) {
    for (const json& jp : j.at("protocols")) {
      spec.protocols.push_back(parse_protocol(jp));
    }
  }
  if (spec.axis != SweepAxis::EhGrid && spec.protocols.empty()) {
    throw std::runtime_error("config: 'protocols' must be a non-empty array");
  }

  spec.alpha2 = j.value("alpha2", 0.1);
  spec.total_snr_db = j.value("total_snr_db", 20.0);
  spec.eta = j.value("eta", 0.95);
  spec.master_seed = j.value("seed", std::uint64_t{1});
  if (j.contains("stop")) {
    spec.stop.min_errors = j.at("stop").value("min_errors", std::uint64_t{400});
    spec.stop.max_bits = j.at("stop").value("max_bits", std::uint64_t{100'000'000});
  }
  if (spec.stop.min_errors < 100) {
    throw std::runtime_error("config: stop.min_errors must be >= 100");
  }

  if (spec.axis == SweepAxis::EhGrid) {
    spec.beta_grid = parse_grid(j.at("beta_grid"), "beta_grid");
    spec.rho_grid = parse_grid(j.at("rho_grid"), "rho_grid");
    for (double b : spec.beta_grid.values) {
      if (b < 0.0 || b > 0.99) throw std::runtime_error("config: beta grid out of [0, 0.99]");
    }
    for (double r : spec.rho_grid.values) {
      if (r < 0.0 || r > 1.0) throw std::runtime_error("config: rho grid out of [0, 1]");
    }
  } else {
    spec.grid = parse_grid(j.at("grid"), "grid");
    if (spec.axis == SweepAxis::Alpha2) {
      for (double a : spec.grid.values) {
        if (!(a > 0.0 && a <= 0.5)) {
          throw std::runtime_error("config: alpha2 grid out of (0, 0.5]");
        }
      }
    }
  }
  return spec;
}

SweepSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_digest(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace cnoma
