#pragma once

#include <string_view>
#include <vector>

#include "mcf/hard_fairness.hpp"

namespace mcf {

/// Effective ratio of other-cell interference to in-cell transmit power at one load.
struct BetaEstimate {
    double beta = 0.0;
    double c = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct BetaBounds {
    double lower;  // 2 D^-alpha zeta(alpha, 1)
    double upper;  // D^-alpha (zeta(alpha, 1/2) + zeta(alpha, 3/2))
};

BetaBounds beta_bounds(const ChannelParams& params);

/// Eb/N0 when interference is beta times the in-cell power:
/// sc / (1 - beta c sc). Throws LimitExceeded when the denominator is <= 0.
OperatingPoint simplified_mc_ebn0(double c, double beta, const CompositeGainDist& dist,
                                  const QuadratureSpec& spec = {});

/// The beta at which the simplified model reproduces mc_ebn0 exactly.
BetaEstimate beta_effective(double c, const CompositeGainDist& dist, const ChannelParams& params,
                            const QuadratureSpec& spec = {});

/// Single value for planning: beta at the midpoint of [c_min, c_max].
BetaEstimate nominal_beta(double c_min, double c_max, const CompositeGainDist& dist,
                          const ChannelParams& params, const QuadratureSpec& spec = {});

/// ebn0_sc / (1 - beta c ebn0_sc), all linear. Throws DomainError (forbidden
/// region) when beta c ebn0_sc >= 1.
double sc_to_mc(double ebn0_sc, double beta, double c);

enum class Regime { NoiseDominated, InterferenceDominated, Forbidden };

std::string_view regime_name(Regime regime);

/// Noise-dominated if ebn0_sc <= 1/(2 beta c); forbidden if ebn0_sc >= 1/(beta c);
/// interference-dominated in between.
Regime classify_regime(double ebn0_sc, double beta, double c);

/// 1 / (2 beta c), the boundary of the noise-dominated regime.
double noise_regime_threshold(double beta, double c);

}  // namespace mcf
