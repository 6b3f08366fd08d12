#include "cnoma/analytic.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cnoma/specfun.hpp"

namespace cnoma {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double snr_to_gamma(double phi, double total_snr_db) {
  return phi * std::pow(10.0, total_snr_db / 10.0);
}

// Signed five-term / two-term kernel sums share this shape.
template <typename Avg>
double weighted_kernel_sum(const ConstellationWeights& w, bool five_term,
                           Avg&& avg) {
  if (!five_term) {
    return 0.5 * (avg(w.zeta_i[0]) + avg(w.zeta_i[1]));
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < w.zeta_j.size(); ++j) {
    acc += w.nu_j[j] * avg(w.zeta_j[j]);
  }
  return 0.5 * acc;
}

}  // namespace

AnalyticCoefficients product_coefficients(double kernel_scale,
                                          const FadingParams& relay,
                                          const FadingParams& user) {
  if (!(kernel_scale > 0.0)) {
    throw std::domain_error("product_coefficients: kernel scale must be positive");
  }
  const double mr = relay.m, mk = user.m;
  const double lr = mr / relay.omega, lk = mk / user.omega;
  AnalyticCoefficients c;
  c.shape_diff = mr - mk;
  c.shape_mean = 0.5 * (mr + mk);
  c.density_norm = std::exp(mr * std::log(lr) + mk * std::log(lk) -
                            std::lgamma(mr) - std::lgamma(mk));
  const double L = lr * lk;
  c.prefactor = c.density_norm *
                std::pow(mk * relay.omega / (mr * user.omega), 0.5 * c.shape_diff) *
                std::pow(kernel_scale, -c.shape_mean);
  c.arg_scale = 2.0 * std::sqrt(L / kernel_scale);
  c.meijer_arg = 2.0 * L / kernel_scale;
  return c;
}

namespace detail {

double single_hop_closed(double kernel_scale, const FadingParams& fading) {
  const double m = fading.m;
  const double cbar = kernel_scale * fading.omega / (2.0 * m);
  // Zero-SNR / zero-distance limit; the cutoff keeps 1/(1+cbar) strictly
  // below 1 in double arithmetic and its truncation error is O(sqrt(cbar)).
  if (cbar < 1e-14) return 0.5;
  const double z = 1.0 / (1.0 + cbar);
  const double ln_pre = std::lgamma(m + 0.5) - std::lgamma(m + 1.0) -
                        std::log(2.0 * kSqrtPi) + 0.5 * std::log(cbar) -
                        (m + 0.5) * std::log1p(cbar);
  return std::exp(ln_pre) * hyp2f1(1.0, m + 0.5, m + 1.0, z);
}

double product_hop_closed(double kernel_scale, const FadingParams& relay,
                          const FadingParams& user, bool* via_oracle) {
  if (via_oracle) *via_oracle = false;
  if (kernel_scale < 1e-280) return 0.5;
  const double mr = relay.m, mk = user.m;
  const double u2 = 0.5 * (mr + mk);
  const double L = (mr / relay.omega) * (mk / user.omega);
  const std::array<double, 4> top = {0.0, 1.0, 0.5, 1.0 - u2};
  const std::array<double, 5> bottom = {mr, mk, 1.0 - u2, 0.0, 0.0};
  const double x = 2.0 * L / kernel_scale;
  try {
    const double g = meijer_g_3345(top, bottom, x);
    return g / (2.0 * kSqrtPi * std::exp(std::lgamma(mr) + std::lgamma(mk)));
  } catch (const ContourError&) {
  } catch (const NonConvergence&) {
  }
  if (via_oracle) *via_oracle = true;
  return product_hop_avg_quad(kernel_scale, relay, user);
}

double single_hop_avg_quad(double kernel_scale, const FadingParams& fading) {
  if (kernel_scale <= 0.0) return 0.5;
  const double m = fading.m;
  const double lambda = m / fading.omega;
  const double ln_norm = m * std::log(lambda) - std::lgamma(m);
  auto f = [&](double g) {
    const double ln_pdf = ln_norm + (m - 1.0) * std::log(g) - lambda * g;
    return q_function(std::sqrt(kernel_scale * g)) * std::exp(ln_pdf);
  };
  static thread_local boost::math::quadrature::exp_sinh<double> integ;
  return integ.integrate(f, 1e-12);
}

double product_hop_avg_quad(double kernel_scale, const FadingParams& relay,
                            const FadingParams& user) {
  if (kernel_scale <= 0.0) return 0.5;
  const double mr = relay.m;
  const double lr = mr / relay.omega;
  const double ln_norm = mr * std::log(lr) - std::lgamma(mr);
  auto outer = [&](double gr) {
    const double ln_pdf = ln_norm + (mr - 1.0) * std::log(gr) - lr * gr;
    return single_hop_avg_quad(kernel_scale * gr, user) * std::exp(ln_pdf);
  };
  static thread_local boost::math::quadrature::exp_sinh<double> integ;
  return integ.integrate(outer, 1e-10);
}

}  // namespace detail

double aber_relay_s1(const Scenario& scenario, const EhProtocol& protocol,
                     const PowerAllocation& pa, double total_snr_db) {
  const DerivedPower dp = derive_power(protocol);
  const double gamma = snr_to_gamma(dp.phi, total_snr_db);
  const ConstellationWeights w = constellation_weights(pa);
  return weighted_kernel_sum(w, false, [&](double zeta) {
    return detail::single_hop_closed(dp.varpi * gamma * zeta, scenario.relay_link);
  });
}

double aber_relay_s2(const Scenario& scenario, const EhProtocol& protocol,
                     const PowerAllocation& pa, double total_snr_db) {
  const DerivedPower dp = derive_power(protocol);
  const double gamma = snr_to_gamma(dp.phi, total_snr_db);
  const ConstellationWeights w = constellation_weights(pa);
  return weighted_kernel_sum(w, true, [&](double zeta) {
    return detail::single_hop_closed(dp.varpi * gamma * zeta, scenario.relay_link);
  });
}

namespace {

double aber_phase2_eh(const Scenario& scenario, const EhProtocol& protocol,
                      const PowerAllocation& pa, double total_snr_db, int user,
                      bool* via_oracle) {
  if (!protocol.harvests()) {
    throw std::domain_error("aber_phase2: harvesting protocol required");
  }
  const DerivedPower dp = derive_power(protocol);
  const double gamma = snr_to_gamma(dp.phi, total_snr_db);
  const double psi = *dp.psi;
  const ConstellationWeights w = constellation_weights(pa);
  const FadingParams& link =
      user == 1 ? scenario.user1_link : scenario.user2_link;
  bool any_fallback = false;
  const double value =
      weighted_kernel_sum(w, user == 2, [&](double zeta) {
        bool flag = false;
        const double v = detail::product_hop_closed(gamma * zeta * psi,
                                                    scenario.relay_link, link,
                                                    &flag);
        any_fallback = any_fallback || flag;
        return v;
      });
  if (via_oracle) *via_oracle = any_fallback;
  return value;
}

}  // namespace

double aber_phase2_u1(const Scenario& scenario, const EhProtocol& protocol,
                      const PowerAllocation& pa, double total_snr_db) {
  return aber_phase2_eh(scenario, protocol, pa, total_snr_db, 1, nullptr);
}

double aber_phase2_u2(const Scenario& scenario, const EhProtocol& protocol,
                      const PowerAllocation& pa, double total_snr_db) {
  return aber_phase2_eh(scenario, protocol, pa, total_snr_db, 2, nullptr);
}

double aber_phase2_no_eh(const Scenario& scenario, int user,
                         const PowerAllocation& pa, double total_snr_db) {
  if (user != 1 && user != 2) {
    throw std::domain_error("aber_phase2_no_eh: user must be 1 or 2");
  }
  const double gamma = snr_to_gamma(1.0, total_snr_db);
  const ConstellationWeights w = constellation_weights(pa);
  const FadingParams& link =
      user == 1 ? scenario.user1_link : scenario.user2_link;
  return weighted_kernel_sum(w, user == 2, [&](double zeta) {
    return detail::single_hop_closed(gamma * zeta, link);
  });
}

AberBreakdown e2e_aber(const Scenario& scenario, const EhProtocol& protocol,
                       const PowerAllocation& pa, double total_snr_db) {
  AberBreakdown b{};
  b.relay_s1 = aber_relay_s1(scenario, protocol, pa, total_snr_db);
  b.relay_s2 = aber_relay_s2(scenario, protocol, pa, total_snr_db);
  if (protocol.harvests()) {
    b.phase2_u1 = aber_phase2_eh(scenario, protocol, pa, total_snr_db, 1,
                                 &b.phase2_u1_via_oracle);
    b.phase2_u2 = aber_phase2_eh(scenario, protocol, pa, total_snr_db, 2,
                                 &b.phase2_u2_via_oracle);
  } else {
    b.phase2_u1 = aber_phase2_no_eh(scenario, 1, pa, total_snr_db);
    b.phase2_u2 = aber_phase2_no_eh(scenario, 2, pa, total_snr_db);
  }
  b.e2e_u1 = 1.0 - (1.0 - b.relay_s1) * (1.0 - b.phase2_u1);
  b.e2e_u2 = 1.0 - (1.0 - b.relay_s2) * (1.0 - b.phase2_u2);
  return b;
}

double oracle_single_hop(std::span<const std::pair<double, double>> coeffs,
                         double c_scale, const FadingParams& fading) {
  double acc = 0.0;
  for (const auto& [weight, zeta] : coeffs) {
    acc += weight * detail::single_hop_avg_quad(c_scale * zeta, fading);
  }
  return acc;
}

double oracle_product_hop(std::span<const std::pair<double, double>> coeffs,
                          double c_scale, const FadingParams& fading_r,
                          const FadingParams& fading_k) {
  double acc = 0.0;
  for (const auto& [weight, zeta] : coeffs) {
    acc += weight * detail::product_hop_avg_quad(c_scale * zeta, fading_r, fading_k);
  }
  return acc;
}

}  // namespace cnoma
