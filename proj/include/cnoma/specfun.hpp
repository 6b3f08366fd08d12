#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace cnoma {

/// Raised when an iterative kernel (series, contour refinement, root finder)
/// fails to reach its tolerance within the permitted work budget.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when no admissible vertical integration line exists for a
/// Mellin-Barnes contour (pole families overlap).
struct ContourError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gaussian tail probability Pr{N(0,1) > x}.
double q_function(double x);

/// log Gamma(x) for x > 0. Throws std::domain_error otherwise.
double ln_gamma(double x);

/// Gauss hypergeometric 2F1(a,b;c;z) for c > 0 and z in [0,1).
///
/// Direct power series for z <= 0.5; for larger z the series is summed at
/// argument 1-z through the standard connection formula, which keeps the
/// term count small as z -> 1. Throws NonConvergence past 10000 terms.
double hyp2f1(double a, double b, double c, double z);

namespace detail {
// Both evaluation routes, exposed so tests can cross-check them.
double hyp2f1_series(double a, double b, double c, double z);
double hyp2f1_via_1mz(double a, double b, double c, double z);

// log Gamma on the complex plane (principal value up to multiples of 2*pi*i;
// only exp(sums) of these are consumed, which is branch-insensitive).
std::complex<double> ln_gamma_complex(std::complex<double> z);

// ln|Gamma(x)| and the sign of Gamma(x) for real x not a non-positive integer.
struct SignedLnGamma {
  double ln_abs;
  int sign;
};
SignedLnGamma signed_ln_gamma(double x);
}  // namespace detail

/// Nodes and weights of a Gaussian rule for the weight e^{-x} on (0, inf).
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, all positive
  std::vector<double> weights;  // positive; sum to 1
  int order = 0;
};

/// Gauss-Laguerre rule of the given order (2..256). Nodes/weights are
/// computed by Newton iteration in extended precision. Weights of orders
/// beyond ~190 fall below the double range and come back subnormal or zero.
QuadratureRule gauss_laguerre(int order);

/// Vertical Mellin-Barnes contour for meijer_g_3345.
struct ContourSpec {
  double real_shift;   // real part of the integration line
  double half_span;    // imaginary extent [-half_span, half_span]
  int panel_count;     // trapezoid panels on [0, half_span]; >= 64
};

/// Contour with the real shift at the midpoint of the gap between the two
/// pole families and the half span grown until the integrand endpoint
/// magnitude is negligible. Throws ContourError when no gap exists.
ContourSpec default_contour(const std::array<double, 4>& top,
                            const std::array<double, 5>& bottom, double x);

/// Meijer G^{3,3}_{4,5}(x | top; bottom) for x > 0 by numerical integration
/// of the Mellin-Barnes integrand along a vertical line. Identical
/// numerator/denominator parameter pairs are cancelled before the pole
/// analysis. Panel count is doubled until two successive refinements agree
/// to 1e-8 relative; NonConvergence is raised otherwise.
double meijer_g_3345(const std::array<double, 4>& top,
                     const std::array<double, 5>& bottom, double x);
double meijer_g_3345(const std::array<double, 4>& top,
                     const std::array<double, 5>& bottom, double x,
                     const ContourSpec& spec);

}  // namespace cnoma
