#pragma once

#include <span>
#include <utility>

#include "cnoma/channel.hpp"
#include "cnoma/protocol.hpp"

namespace cnoma {

/// Coefficient bundle of the product-channel average for one (relay link,
/// user link, kernel scale) tuple. density_norm and prefactor correspond to
/// the Delta factors of the closed form; shape_diff/shape_mean to its
/// u-parameters. meijer_arg is the Mellin-Barnes argument 2*L/a with
/// L = (m_r/Omega_r)(m_k/Omega_k) and a the conditional-kernel SNR scale.
struct AnalyticCoefficients {
  double shape_diff;    // m_r - m_k
  double shape_mean;    // (m_r + m_k) / 2
  double density_norm;  // (m_r/Om_r)^m_r (m_k/Om_k)^m_k / (G(m_r) G(m_k)), > 0
  double prefactor;     // density_norm * (m_k Om_r / m_r Om_k)^{diff/2} * a^{-mean}
  double arg_scale;     // 2 sqrt(L / a)
  double meijer_arg;    // 2 L / a
};

AnalyticCoefficients product_coefficients(double kernel_scale,
                                          const FadingParams& relay,
                                          const FadingParams& user);

/// Analytical ABERs of one operating point: per-phase components and their
/// end-to-end combinations 1-(1-relay)(1-phase2). The via_oracle flags mark
/// phase-2 values that fell back to quadrature after a contour failure.
struct AberBreakdown {
  double relay_s1;
  double relay_s2;
  double phase2_u1;
  double phase2_u2;
  double e2e_u1;
  double e2e_u2;
  bool phase2_u1_via_oracle = false;
  bool phase2_u2_via_oracle = false;
};

/// ABER of the strong-power symbol at the relay (Nakagami average of the
/// two-term conditional kernel; hypergeometric closed form).
double aber_relay_s1(const Scenario& scenario, const EhProtocol& protocol,
                     const PowerAllocation& pa, double total_snr_db);

/// ABER of the SIC-detected symbol at the relay (signed five-term kernel).
double aber_relay_s2(const Scenario& scenario, const EhProtocol& protocol,
                     const PowerAllocation& pa, double total_snr_db);

/// Second-phase ABER at user 1 under a harvesting relay: the conditional
/// kernel averages over the product of both hop gains (Meijer-G closed
/// form along a Mellin-Barnes contour). Requires an EH protocol.
double aber_phase2_u1(const Scenario& scenario, const EhProtocol& protocol,
                      const PowerAllocation& pa, double total_snr_db);

/// Same for user 2 with the signed five-term kernel.
double aber_phase2_u2(const Scenario& scenario, const EhProtocol& protocol,
                      const PowerAllocation& pa, double total_snr_db);

/// Second-phase ABER under the no-EH relay (fixed relay power): single-gain
/// average over the user link with unit information fraction.
double aber_phase2_no_eh(const Scenario& scenario, int user,
                         const PowerAllocation& pa, double total_snr_db);

/// Full breakdown for any protocol at one operating point.
AberBreakdown e2e_aber(const Scenario& scenario, const EhProtocol& protocol,
                       const PowerAllocation& pa, double total_snr_db);

/// Ground-truth quadrature of sum_j w_j E_g[Q(sqrt(c_scale zeta_j g))] over
/// one Gamma-distributed gain. Independent of the hypergeometric route.
double oracle_single_hop(std::span<const std::pair<double, double>> coeffs,
                         double c_scale, const FadingParams& fading);

/// Ground-truth quadrature of the same sum averaged over the product of two
/// independent Gamma gains. Independent of the Meijer-G route.
double oracle_product_hop(std::span<const std::pair<double, double>> coeffs,
                          double c_scale, const FadingParams& fading_r,
                          const FadingParams& fading_k);

namespace detail {
// Single averages used by both the closed forms and their tests.
double single_hop_closed(double kernel_scale, const FadingParams& fading);
double product_hop_closed(double kernel_scale, const FadingParams& relay,
                          const FadingParams& user, bool* via_oracle);
double single_hop_avg_quad(double kernel_scale, const FadingParams& fading);
double product_hop_avg_quad(double kernel_scale, const FadingParams& relay,
                            const FadingParams& user);
}  // namespace detail

}  // namespace cnoma
