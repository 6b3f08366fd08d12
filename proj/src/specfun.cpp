#include "cnoma/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cnoma {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSeriesTerms = 10000;
constexpr double kSeriesTol = 1e-12;

bool near(double u, double v) {
  return std::abs(u - v) <= 1e-12 * std::max({1.0, std::abs(u), std::abs(v)});
}

// Connection-formula coefficients lose ~|s - round(s)|^-1 digits near
// integer s, so route those cases through the direct series instead.
bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-6; }

}  // namespace

double q_function(double x) {
  return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
}

double ln_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("ln_gamma: argument must be positive");
  }
  return std::lgamma(x);
}

namespace detail {

SignedLnGamma signed_ln_gamma(double x) {
  if (x > 0.0) {
    return {std::lgamma(x), 1};
  }
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  const double s = std::sin(kPi * x);
  if (s == 0.0) {
    return {std::numeric_limits<double>::infinity(), 1};
  }
  const double ln_abs = std::log(kPi / std::abs(s)) - std::lgamma(1.0 - x);
  return {ln_abs, s > 0.0 ? 1 : -1};
}

double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= kSeriesTol * std::abs(sum)) {
      return sum;
    }
  }
  throw NonConvergence("hyp2f1: series did not converge within 10000 terms");
}

double hyp2f1_via_1mz(double a, double b, double c, double z) {
  // 2F1(a,b;c;z) = A * 2F1(a,b;a+b-c+1;w) + B * w^s * 2F1(c-a,c-b;s+1;w)
  // with w = 1-z, s = c-a-b; valid for non-integer s.
  const double w = 1.0 - z;
  const double s = c - a - b;
  const auto gc = signed_ln_gamma(c);
  const auto gs = signed_ln_gamma(s);
  const auto gms = signed_ln_gamma(-s);
  const auto gca = signed_ln_gamma(c - a);
  const auto gcb = signed_ln_gamma(c - b);
  const auto ga = signed_ln_gamma(a);
  const auto gb = signed_ln_gamma(b);

  const double ln_A = gc.ln_abs + gs.ln_abs - gca.ln_abs - gcb.ln_abs;
  const double ln_B = gc.ln_abs + gms.ln_abs - ga.ln_abs - gb.ln_abs;
  const int sign_A = gc.sign * gs.sign * gca.sign * gcb.sign;
  const int sign_B = gc.sign * gms.sign * ga.sign * gb.sign;

  double out = 0.0;
  if (std::isfinite(ln_A)) {
    out += sign_A * std::exp(ln_A) * hyp2f1_series(a, b, a + b - c + 1.0, w);
  }
  if (std::isfinite(ln_B)) {
    out += sign_B * std::exp(ln_B + s * std::log(w)) *
           hyp2f1_series(c - a, c - b, s + 1.0, w);
  }
  return out;
}

std::complex<double> ln_gamma_complex(std::complex<double> z) {
  // Recurrence up to Re z >= 10, then Stirling with Bernoulli terms.
  std::complex<double> shift(0.0, 0.0);
  while (z.real() < 10.0) {
    shift += std::log(z);
    z += 1.0;
  }
  static constexpr double kBern[] = {
      1.0 / 12.0,       -1.0 / 360.0,     1.0 / 1260.0,        -1.0 / 1680.0,
      1.0 / 1188.0,     -691.0 / 360360.0, 1.0 / 156.0};
  const std::complex<double> z2 = z * z;
  std::complex<double> series(0.0, 0.0);
  std::complex<double> zpow = z;
  for (double bk : kBern) {
    series += bk / zpow;
    zpow *= z2;
  }
  const std::complex<double> ln =
      (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
  return ln - shift;
}

}  // namespace detail

double hyp2f1(double a, double b, double c, double z) {
  if (!(c > 0.0)) {
    throw std::domain_error("hyp2f1: c must be positive");
  }
  if (!(z >= 0.0 && z < 1.0)) {
    throw std::domain_error("hyp2f1: z must lie in [0,1)");
  }
  if (z > 0.5 && !near_integer(c - a - b)) {
    return detail::hyp2f1_via_1mz(a, b, c, z);
  }
  return detail::hyp2f1_series(a, b, c, z);
}

QuadratureRule gauss_laguerre(int order) {
  if (order < 2 || order > 256) {
    throw std::domain_error("gauss_laguerre: order must be in [2, 256]");
  }
  const int n = order;
  std::vector<long double> x(n), w(n);
  long double z = 0.0L;
  for (int i = 0; i < n; ++i) {
    // Stroud/Secrest style initial guesses, then Newton on L_n.
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * n);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * n);
    } else {
      const long double ai = i - 1;
      z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - x[i - 2]);
    }
    long double p1 = 0.0L, p2 = 0.0L, pp = 0.0L;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (int j = 0; j < n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j + 1.0L - z) * p2 - j * p3) / (j + 1.0L);
      }
      pp = n * (p1 - p2) / z;  // L_n'(z) at the current iterate
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-17L * std::max(z, 1.0L)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NonConvergence("gauss_laguerre: Newton iteration stalled");
    }
    x[i] = z;
    w[i] = z / (static_cast<long double>(n) * n * p2 * p2);
  }
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.assign(x.begin(), x.end());
  rule.weights.assign(w.begin(), w.end());
  long double wsum = 0.0L;
  for (long double wi : w) wsum += wi;
  if (std::abs(static_cast<double>(wsum) - 1.0) > 1e-10) {
    throw NonConvergence("gauss_laguerre: weight normalization failed");
  }
  return rule;
}

namespace {

// Gamma factors of the Mellin-Barnes integrand after cancelling identical
// numerator/denominator pairs.
struct GammaFactors {
  std::vector<double> num_b;  //  Gamma(b - s)
  std::vector<double> num_a;  //  Gamma(1 - a + s)
  std::vector<double> den_b;  // /Gamma(1 - b + s)
  std::vector<double> den_a;  // /Gamma(a - s)
};

GammaFactors reduce_factors(const std::array<double, 4>& top,
                            const std::array<double, 5>& bottom) {
  GammaFactors f;
  f.num_b = {bottom[0], bottom[1], bottom[2]};
  f.num_a = {top[0], top[1], top[2]};
  f.den_b = {bottom[3], bottom[4]};
  f.den_a = {top[3]};
  for (auto it = f.den_a.begin(); it != f.den_a.end();) {
    auto hit = std::find_if(f.num_b.begin(), f.num_b.end(),
                            [&](double v) { return near(v, *it); });
    if (hit != f.num_b.end()) {
      f.num_b.erase(hit);
      it = f.den_a.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = f.den_b.begin(); it != f.den_b.end();) {
    auto hit = std::find_if(f.num_a.begin(), f.num_a.end(),
                            [&](double v) { return near(v, *it); });
    if (hit != f.num_a.end()) {
      f.num_a.erase(hit);
      it = f.den_b.erase(it);
    } else {
      ++it;
    }
  }
  return f;
}

// Admissible strip (left, right) for the vertical line: all poles of the
// Gamma(b-s) family lie right of it, all poles of Gamma(1-a+s) left of it.
std::pair<double, double> pole_strip(const GammaFactors& f) {
  double left = -std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  for (double a : f.num_a) left = std::max(left, a - 1.0);
  for (double b : f.num_b) right = std::min(right, b);
  if (!(left < right - 1e-9)) {
    throw ContourError("meijer_g_3345: pole families admit no separating line");
  }
  return {left, right};
}

std::complex<double> log_integrand(const GammaFactors& f, double sigma,
                                   double t, double ln_x) {
  const std::complex<double> s(sigma, t);
  std::complex<double> l = s * ln_x;
  for (double b : f.num_b) l += detail::ln_gamma_complex(b - s);
  for (double a : f.num_a) l += detail::ln_gamma_complex(1.0 - a + s);
  for (double b : f.den_b) l -= detail::ln_gamma_complex(1.0 - b + s);
  for (double a : f.den_a) l -= detail::ln_gamma_complex(a - s);
  return l;
}

double trapezoid_pass(const GammaFactors& f, double sigma, double H, int panels,
                      double ln_x) {
  const double h = H / panels;
  std::vector<std::complex<double>> lv(panels + 1);
  double m = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= panels; ++k) {
    lv[k] = log_integrand(f, sigma, k * h, ln_x);
    if (std::isfinite(lv[k].real())) m = std::max(m, lv[k].real());
  }
  std::complex<double> acc(0.0, 0.0);
  for (int k = 0; k <= panels; ++k) {
    if (!std::isfinite(lv[k].real())) continue;  // integrand zero (1/Gamma pole)
    const std::complex<double> v = std::exp(lv[k] - m);
    acc += (k == 0 || k == panels) ? 0.5 * v : v;
  }
  // G = (1/pi) Re int_0^H exp(l(t)) dt by conjugate symmetry in t. Assemble
  // in log scale: the peak offset m can exceed the double exponent range.
  const double r = acc.real() * h / kPi;
  if (r == 0.0) return 0.0;
  const double sign = r > 0.0 ? 1.0 : -1.0;
  return sign * std::exp(m + std::log(std::abs(r)));
}

double adaptive_half_span(const GammaFactors& f, double sigma, double ln_x) {
  double peak = log_integrand(f, sigma, 0.0, ln_x).real();
  double H = 8.0;
  for (int it = 0; it < 64; ++it) {
    const double end = log_integrand(f, sigma, H, ln_x).real();
    peak = std::max(peak, end);
    if (end < peak + std::log(1e-14)) {
      return H;
    }
    H *= 1.5;
    if (H > 5000.0) break;
  }
  throw NonConvergence("meijer_g_3345: integrand tail does not decay");
}

}  // namespace

ContourSpec default_contour(const std::array<double, 4>& top,
                            const std::array<double, 5>& bottom, double x) {
  const GammaFactors f = reduce_factors(top, bottom);
  const auto [left, right] = pole_strip(f);
  ContourSpec spec;
  spec.real_shift = 0.5 * (left + right);
  const double ln_x = std::log(x);
  spec.half_span = adaptive_half_span(f, spec.real_shift, ln_x);
  // Panel density must resolve both the Gamma-factor variation and the
  // x^{it} oscillation (period 2*pi/|ln x|).
  spec.panel_count =
      std::max({256, static_cast<int>(16.0 * spec.half_span),
                static_cast<int>(0.4 * spec.half_span * (std::abs(ln_x) + 10.0))});
  return spec;
}

double meijer_g_3345(const std::array<double, 4>& top,
                     const std::array<double, 5>& bottom, double x,
                     const ContourSpec& spec) {
  if (!(x > 0.0)) {
    throw std::domain_error("meijer_g_3345: argument must be positive");
  }
  if (spec.panel_count < 64) {
    throw std::invalid_argument("meijer_g_3345: panel_count must be >= 64");
  }
  if (!(spec.half_span > 0.0)) {
    throw std::invalid_argument("meijer_g_3345: half_span must be positive");
  }
  const GammaFactors f = reduce_factors(top, bottom);
  const auto [left, right] = pole_strip(f);
  if (!(spec.real_shift > left && spec.real_shift < right)) {
    throw ContourError("meijer_g_3345: real_shift outside the admissible strip");
  }
  const double ln_x = std::log(x);
  int panels = spec.panel_count;
  double prev = trapezoid_pass(f, spec.real_shift, spec.half_span, panels, ln_x);
  for (int pass = 0; pass < 7; ++pass) {
    panels *= 2;
    const double cur =
        trapezoid_pass(f, spec.real_shift, spec.half_span, panels, ln_x);
    if (std::abs(cur - prev) <=
        1e-8 * std::max({std::abs(cur), std::abs(prev)}) + 1e-300) {
      return cur;
    }
    prev = cur;
  }
  throw NonConvergence("meijer_g_3345: panel doubling failed to stabilize");
}

double meijer_g_3345(const std::array<double, 4>& top,
                     const std::array<double, 5>& bottom, double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("meijer_g_3345: argument must be positive");
  }
  return meijer_g_3345(top, bottom, x, default_contour(top, bottom, x));
}

}  // namespace cnoma
