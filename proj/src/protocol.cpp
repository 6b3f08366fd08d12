#include "cnoma/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace cnoma {

namespace {
constexpr double kBetaCap = 0.99;
}

EhProtocol::EhProtocol(EhKind kind, double beta, double rho, double eta)
    : kind_(kind), beta_(beta), rho_(rho), eta_(eta) {
  if (kind_ == EhKind::None) return;
  if (!(eta_ > 0.0 && eta_ < 1.0)) {
    throw std::domain_error("EhProtocol: eta must lie in (0,1)");
  }
  if (kind_ != EhKind::PowerSplit && !(beta_ >= 0.0 && beta_ <= kBetaCap)) {
    throw std::domain_error("EhProtocol: beta must lie in [0, 0.99]");
  }
  if (kind_ != EhKind::TimeSwitch && !(rho_ >= 0.0 && rho_ <= 1.0)) {
    throw std::domain_error("EhProtocol: rho must lie in [0, 1]");
  }
}

EhProtocol EhProtocol::no_eh() { return {EhKind::None, 0.0, 0.0, 0.0}; }

EhProtocol EhProtocol::power_split(double rho, double eta) {
  return {EhKind::PowerSplit, 0.0, rho, eta};
}

EhProtocol EhProtocol::time_switch(double beta, double eta) {
  return {EhKind::TimeSwitch, beta, 0.0, eta};
}

EhProtocol EhProtocol::hybrid(double beta, double rho, double eta) {
  return {EhKind::Hybrid, beta, rho, eta};
}

const char* to_string(EhKind kind) {
  switch (kind) {
    case EhKind::None: return "none";
    case EhKind::PowerSplit: return "ps";
    case EhKind::TimeSwitch: return "ts";
    case EhKind::Hybrid: return "hybrid";
  }
  return "?";
}

DerivedPower derive_power(const EhProtocol& protocol) {
  const double beta = protocol.beta();
  const double rho = protocol.rho();
  const double eta = protocol.eta();
  if (beta >= 1.0) {
    throw std::domain_error("derive_power: beta = 1 has unbounded harvest gain");
  }
  switch (protocol.kind()) {
    case EhKind::None:
      return {1.0, 1.0, std::nullopt, 0.0, 0.5, 0.5};
    case EhKind::PowerSplit:
      return {2.0, 1.0 - rho, eta * rho, 0.0, 0.5, 0.5};
    case EhKind::TimeSwitch:
      return {2.0 / (beta + 1.0), 1.0, 2.0 * eta * beta / (1.0 - beta), beta,
              0.5 * (1.0 - beta), 0.5 * (1.0 - beta)};
    case EhKind::Hybrid:
      return {2.0 / (beta + 1.0), 1.0 - rho,
              eta * (rho + 2.0 * beta / (1.0 - beta)), beta,
              0.5 * (1.0 - beta), 0.5 * (1.0 - beta)};
  }
  throw std::logic_error("derive_power: unknown protocol kind");
}

double harvested_energy(const EhProtocol& protocol, double ps, double g_r) {
  if (!(ps > 0.0) || g_r < 0.0) {
    throw std::domain_error("harvested_energy: need ps > 0 and g_r >= 0");
  }
  const double beta = protocol.beta();
  const double rho = protocol.rho();
  const double eta = protocol.eta();
  switch (protocol.kind()) {
    case EhKind::None:
      throw std::invalid_argument("harvested_energy: no-EH relay harvests nothing");
    case EhKind::PowerSplit:
      return eta * ps * rho * 0.5 * g_r;
    case EhKind::TimeSwitch:
      return eta * ps * beta * g_r;
    case EhKind::Hybrid:
      return eta * ps * 0.5 * (2.0 * beta + rho * (1.0 - beta)) * g_r;
  }
  throw std::logic_error("harvested_energy: unknown protocol kind");
}

double relay_power(double ps, double g_r, const DerivedPower& dp) {
  if (!dp.psi) return ps;
  return ps * g_r * *dp.psi;
}

PowerAllocation PowerAllocation::from_alpha2(double alpha2) {
  if (!(alpha2 > 0.0 && alpha2 <= 0.5)) {
    throw std::domain_error("PowerAllocation: alpha2 must lie in (0, 0.5]");
  }
  return {1.0 - alpha2, alpha2};
}

ConstellationWeights constellation_weights(const PowerAllocation& pa) {
  const double r1 = std::sqrt(pa.alpha1());
  const double r2 = std::sqrt(pa.alpha2());
  ConstellationWeights w;
  w.zeta_i = {(r1 + r2) * (r1 + r2), (r1 - r2) * (r1 - r2)};
  const double s1 = std::sqrt(2.0 * pa.alpha1());
  w.zeta_j = {pa.alpha2(), (r1 + r2) * (r1 + r2), (s1 + r2) * (s1 + r2),
              (r1 - r2) * (r1 - r2), (2.0 * r1 - r2) * (2.0 * r1 - r2)};
  w.nu_j = {2, -1, 1, 1, -1};
  return w;
}

}  // namespace cnoma
