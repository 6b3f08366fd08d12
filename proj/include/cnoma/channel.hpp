#pragma once

#include <string>

#include "cnoma/rng.hpp"

namespace cnoma {

/// Nakagami-m fading description of one link: shape m (>= 0.5) and spread
/// Omega (> 0, the mean power gain). The power gain |h|^2 of a Nakagami-m
/// envelope is Gamma(m, Omega/m).
struct FadingParams {
  FadingParams(double shape, double spread);

  double m;
  double omega;
};

/// Fading parameters of the three links of one experiment.
struct Scenario {
  std::string name;
  FadingParams relay_link;  // source -> relay
  FadingParams user1_link;  // relay -> user 1
  FadingParams user2_link;  // relay -> user 2
};

/// One draw of the power gain |h|^2 ~ Gamma(m, Omega/m). Detection is
/// coherent so the channel phase never enters the model.
double sample_power_gain(const FadingParams& params, Rng& rng);

/// Density of the power gain at g >= 0.
double power_gain_pdf(const FadingParams& params, double g);

}  // namespace cnoma
