#include "cnoma/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cnoma {

FadingParams::FadingParams(double shape, double spread) : m(shape), omega(spread) {
  if (!(m >= 0.5)) {
    throw std::domain_error("FadingParams: Nakagami shape must be >= 0.5");
  }
  if (!(omega > 0.0)) {
    throw std::domain_error("FadingParams: spread must be positive");
  }
}

double sample_power_gain(const FadingParams& params, Rng& rng) {
  return rng.gamma(params.m, params.omega / params.m);
}

double power_gain_pdf(const FadingParams& params, double g) {
  if (g < 0.0) return 0.0;
  const double lambda = params.m / params.omega;
  if (g == 0.0) {
    if (params.m > 1.0) return 0.0;
    if (params.m == 1.0) return lambda;
    return std::numeric_limits<double>::infinity();
  }
  const double ln = params.m * std::log(lambda) + (params.m - 1.0) * std::log(g) -
                    lambda * g - std::lgamma(params.m);
  return std::exp(ln);
}

}  // namespace cnoma
