#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cnoma/analytic.hpp"
#include "cnoma/harness.hpp"
#include "cnoma/simulator.hpp"
#include "cnoma/specfun.hpp"

namespace py = pybind11;
using namespace cnoma;

PYBIND11_MODULE(_cnoma, m) {
  m.doc() = "Cooperative-NOMA link ABER engine with a harvesting relay";

  // --- numerical kernels ---------------------------------------------------
  m.def("q_function", &q_function, py::arg("x"),
        "Gaussian tail probability Pr{N(0,1) > x}");
  m.def("ln_gamma", &ln_gamma, py::arg("x"));
  m.def("hyp2f1", &hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"),
        "Gauss hypergeometric 2F1 for c > 0 and z in [0, 1)");
  m.def(
      "gauss_laguerre",
      [](int order) {
        const QuadratureRule r = gauss_laguerre(order);
        return py::make_tuple(r.nodes, r.weights);
      },
      py::arg("order"), "Nodes and weights for the weight e^-x on (0, inf)");
  m.def(
      "meijer_g_3345",
      [](const std::array<double, 4>& top, const std::array<double, 5>& bottom,
         double x) { return meijer_g_3345(top, bottom, x); },
      py::arg("top"), py::arg("bottom"), py::arg("x"),
      "Meijer G^{3,3}_{4,5} by Mellin-Barnes contour integration");

  // --- channel and protocol ------------------------------------------------
  py::class_<FadingParams>(m, "FadingParams")
      .def(py::init<double, double>(), py::arg("m"), py::arg("omega"))
      .def_readonly("m", &FadingParams::m)
      .def_readonly("omega", &FadingParams::omega);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](const std::string& name, const FadingParams& relay,
                       const FadingParams& user1, const FadingParams& user2) {
             return Scenario{name, relay, user1, user2};
           }),
           py::arg("name"), py::arg("relay"), py::arg("user1"), py::arg("user2"))
      .def_readonly("name", &Scenario::name)
      .def_readonly("relay", &Scenario::relay_link)
      .def_readonly("user1", &Scenario::user1_link)
      .def_readonly("user2", &Scenario::user2_link);

  py::class_<EhProtocol>(m, "EhProtocol")
      .def_static("no_eh", &EhProtocol::no_eh)
      .def_static("power_split", &EhProtocol::power_split, py::arg("rho"),
                  py::arg("eta"))
      .def_static("time_switch", &EhProtocol::time_switch, py::arg("beta"),
                  py::arg("eta"))
      .def_static("hybrid", &EhProtocol::hybrid, py::arg("beta"), py::arg("rho"),
                  py::arg("eta"))
      .def_property_readonly("beta", &EhProtocol::beta)
      .def_property_readonly("rho", &EhProtocol::rho)
      .def_property_readonly("eta", &EhProtocol::eta)
      .def_property_readonly("harvests", &EhProtocol::harvests)
      .def_property_readonly("kind",
                             [](const EhProtocol& p) { return to_string(p.kind()); });

  py::class_<DerivedPower>(m, "DerivedPower")
      .def_readonly("phi", &DerivedPower::phi)
      .def_readonly("varpi", &DerivedPower::varpi)
      .def_property_readonly("psi",
                             [](const DerivedPower& d) -> py::object {
                               if (!d.psi) return py::none();
                               return py::float_(*d.psi);
                             })
      .def_readonly("t_harvest", &DerivedPower::t_harvest)
      .def_readonly("t_phase1", &DerivedPower::t_phase1)
      .def_readonly("t_phase2", &DerivedPower::t_phase2);
  m.def("derive_power", &derive_power, py::arg("protocol"));
  m.def("harvested_energy", &harvested_energy, py::arg("protocol"), py::arg("ps"),
        py::arg("g_r"));
  m.def("relay_power", &relay_power, py::arg("ps"), py::arg("g_r"), py::arg("dp"));

  py::class_<PowerAllocation>(m, "PowerAllocation")
      .def_static("from_alpha2", &PowerAllocation::from_alpha2, py::arg("alpha2"))
      .def_property_readonly("alpha1", &PowerAllocation::alpha1)
      .def_property_readonly("alpha2", &PowerAllocation::alpha2);

  py::class_<ConstellationWeights>(m, "ConstellationWeights")
      .def_readonly("zeta_i", &ConstellationWeights::zeta_i)
      .def_readonly("zeta_j", &ConstellationWeights::zeta_j)
      .def_readonly("nu_j", &ConstellationWeights::nu_j);
  m.def("constellation_weights", &constellation_weights, py::arg("pa"));

  // --- analytics -------------------------------------------------------------
  py::class_<AberBreakdown>(m, "AberBreakdown")
      .def_readonly("relay_s1", &AberBreakdown::relay_s1)
      .def_readonly("relay_s2", &AberBreakdown::relay_s2)
      .def_readonly("phase2_u1", &AberBreakdown::phase2_u1)
      .def_readonly("phase2_u2", &AberBreakdown::phase2_u2)
      .def_readonly("e2e_u1", &AberBreakdown::e2e_u1)
      .def_readonly("e2e_u2", &AberBreakdown::e2e_u2)
      .def_readonly("phase2_u1_via_oracle", &AberBreakdown::phase2_u1_via_oracle)
      .def_readonly("phase2_u2_via_oracle", &AberBreakdown::phase2_u2_via_oracle);

  m.def("aber_relay_s1", &aber_relay_s1);
  m.def("aber_relay_s2", &aber_relay_s2);
  m.def("aber_phase2_u1", &aber_phase2_u1);
  m.def("aber_phase2_u2", &aber_phase2_u2);
  m.def("aber_phase2_no_eh", &aber_phase2_no_eh);
  m.def("e2e_aber", &e2e_aber, py::arg("scenario"), py::arg("protocol"),
        py::arg("pa"), py::arg("total_snr_db"));
  m.def(
      "oracle_single_hop",
      [](const std::vector<std::pair<double, double>>& coeffs, double c_scale,
         const FadingParams& fading) {
        return oracle_single_hop(coeffs, c_scale, fading);
      },
      py::arg("coeffs"), py::arg("c_scale"), py::arg("fading"));
  m.def(
      "oracle_product_hop",
      [](const std::vector<std::pair<double, double>>& coeffs, double c_scale,
         const FadingParams& fading_r, const FadingParams& fading_k) {
        return oracle_product_hop(coeffs, c_scale, fading_r, fading_k);
      },
      py::arg("coeffs"), py::arg("c_scale"), py::arg("fading_r"), py::arg("fading_k"));

  // --- simulation ------------------------------------------------------------
  py::class_<StoppingRule>(m, "StoppingRule")
      .def(py::init([](std::uint64_t min_errors, std::uint64_t max_bits) {
             return StoppingRule{min_errors, max_bits};
           }),
           py::arg("min_errors") = 400, py::arg("max_bits") = 100'000'000)
      .def_readwrite("min_errors", &StoppingRule::min_errors)
      .def_readwrite("max_bits", &StoppingRule::max_bits);

  py::class_<TrialCounts>(m, "TrialCounts")
      .def_readonly("bits", &TrialCounts::bits)
      .def_readonly("relay_err_s1", &TrialCounts::relay_err_s1)
      .def_readonly("relay_err_s2", &TrialCounts::relay_err_s2)
      .def_readonly("phase2_err_u1", &TrialCounts::phase2_err_u1)
      .def_readonly("phase2_err_u2", &TrialCounts::phase2_err_u2)
      .def_readonly("e2e_err_u1", &TrialCounts::e2e_err_u1)
      .def_readonly("e2e_err_u2", &TrialCounts::e2e_err_u2)
      .def_readonly("budget_exhausted", &TrialCounts::budget_exhausted);

  m.def(
      "run_point",
      [](const Scenario& scenario, const EhProtocol& protocol,
         const PowerAllocation& pa, double total_snr_db, std::uint64_t seed,
         const StoppingRule& stop, int workers) {
        return run_point(SimConfig{scenario, protocol, pa, total_snr_db, seed, stop},
                         workers);
      },
      py::arg("scenario"), py::arg("protocol"), py::arg("pa"),
      py::arg("total_snr_db"), py::arg("seed") = 1,
      py::arg("stop") = StoppingRule{}, py::arg("workers") = 1,
      "Simulate one operating point of the full detect-forward-detect chain");
  m.def("derive_batch_seed", &derive_batch_seed, py::arg("master_seed"),
        py::arg("batch_index"));

  // --- optimization ----------------------------------------------------------
  m.def(
      "optimize_eh",
      [](const Scenario& scenario, const PowerAllocation& pa, double snr_db,
         const std::vector<double>& beta_grid, const std::vector<double>& rho_grid,
         const std::string& objective, double eta) {
        Objective obj = Objective::MaxUser;
        if (objective == "u1") obj = Objective::U1;
        else if (objective == "u2") obj = Objective::U2;
        else if (objective == "mean") obj = Objective::Mean;
        else if (objective != "max_user")
          throw std::invalid_argument("unknown objective '" + objective + "'");
        const EhOptimum o = optimize_eh(scenario, pa, snr_db, Grid::list(beta_grid),
                                        Grid::list(rho_grid), obj, eta);
        return py::make_tuple(o.beta, o.rho, o.value);
      },
      py::arg("scenario"), py::arg("pa"), py::arg("total_snr_db"),
      py::arg("beta_grid"), py::arg("rho_grid"), py::arg("objective") = "max_user",
      py::arg("eta") = 0.95);
  m.def(
      "optimize_alpha",
      [](const Scenario& scenario, const EhProtocol& protocol, double snr_db,
         const std::vector<double>& alpha2_grid, const std::string& objective) {
        Objective obj = Objective::MaxUser;
        if (objective == "u1") obj = Objective::U1;
        else if (objective == "u2") obj = Objective::U2;
        else if (objective == "mean") obj = Objective::Mean;
        else if (objective != "max_user")
          throw std::invalid_argument("unknown objective '" + objective + "'");
        const AlphaOptimum o = optimize_alpha(scenario, protocol, snr_db,
                                              Grid::list(alpha2_grid), obj);
        return py::make_tuple(o.alpha2, o.value);
      },
      py::arg("scenario"), py::arg("protocol"), py::arg("total_snr_db"),
      py::arg("alpha2_grid"), py::arg("objective") = "max_user");

  py::register_exception<NonConvergence>(m, "NonConvergence");
  py::register_exception<ContourError>(m, "ContourError");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
