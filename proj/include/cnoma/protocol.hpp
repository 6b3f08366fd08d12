#pragma once

#include <array>
#include <optional>

namespace cnoma {

enum class EhKind { None, PowerSplit, TimeSwitch, Hybrid };

/// Relay energy-supply protocol. The time-switching factor beta is capped at
/// 0.99 (the harvest gain diverges at beta = 1); the power-splitting factor
/// rho may reach 1, which leaves no information power in phase 1.
class EhProtocol {
 public:
  static EhProtocol no_eh();
  static EhProtocol power_split(double rho, double eta);
  static EhProtocol time_switch(double beta, double eta);
  static EhProtocol hybrid(double beta, double rho, double eta);

  EhKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double rho() const { return rho_; }
  double eta() const { return eta_; }
  bool harvests() const { return kind_ != EhKind::None; }

 private:
  EhProtocol(EhKind kind, double beta, double rho, double eta);

  EhKind kind_;
  double beta_;
  double rho_;
  double eta_;
};

const char* to_string(EhKind kind);

/// Factors derived from the protocol over the normalized block T = 1:
/// source power factor phi, information fraction varpi, harvest gain psi
/// (disengaged for the no-EH relay), and the three time fractions.
struct DerivedPower {
  double phi;
  double varpi;
  std::optional<double> psi;
  double t_harvest;
  double t_phase1;
  double t_phase2;
};

DerivedPower derive_power(const EhProtocol& protocol);

/// Energy harvested over one block given source power and the relay-link
/// power gain. Throws std::invalid_argument for the no-EH relay.
double harvested_energy(const EhProtocol& protocol, double ps, double g_r);

/// Relay transmit power: ps * g_r * psi when harvesting, ps otherwise.
double relay_power(double ps, double g_r, const DerivedPower& dp);

/// Power split between the users. alpha1 + alpha2 = 1 and alpha2 <= alpha1;
/// equality is the degenerate sweep endpoint where the superposed symbols
/// of opposite user bits coincide.
class PowerAllocation {
 public:
  static PowerAllocation from_alpha2(double alpha2);

  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }

 private:
  PowerAllocation(double a1, double a2) : alpha1_(a1), alpha2_(a2) {}
  double alpha1_;
  double alpha2_;
};

/// Superposition-constellation distance sets entering the conditional BER
/// kernels: the two-term set for the strong-power symbol detector and the
/// signed five-term set for the SIC detector.
struct ConstellationWeights {
  std::array<double, 2> zeta_i;
  std::array<double, 5> zeta_j;
  std::array<int, 5> nu_j;
};

ConstellationWeights constellation_weights(const PowerAllocation& pa);

}  // namespace cnoma
