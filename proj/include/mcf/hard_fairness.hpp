#pragma once

#include "mcf/channel.hpp"

namespace mcf {

/// A (spectral efficiency, system Eb/N0) pair. c in bit/s/Hz.
struct OperatingPoint {
    double c = 0.0;
    double ebn0_linear = 0.0;
    double ebn0_db = 0.0;

    static OperatingPoint from_linear(double c, double ebn0_linear) {
        return {c, ebn0_linear, to_db(ebn0_linear)};
    }
};

/// Minimum system Eb/N0 of an isolated cell at load c:
/// ln 2 * int 2^{c G(x)} dG(x) / x.
OperatingPoint sc_ebn0(double c, const CompositeGainDist& dist, const QuadratureSpec& spec = {});

/// ln 2 * c * int int 2^{c G(xy)} Phi(x) dF_s dH_M / (xy): the fraction of
/// transmitted power that comes back as other-cell interference.
double interference_load(double c, const CompositeGainDist& dist, const ChannelParams& params,
                         const QuadratureSpec& spec = {});

/// 1 - interference_load(c): positive exactly when the multi-cell system is feasible.
double hf_denominator(double c, const CompositeGainDist& dist, const ChannelParams& params,
                      const QuadratureSpec& spec = {});

/// Minimum system Eb/N0 on the infinite linear array. Throws LimitExceeded when
/// c is at or beyond the spectral-efficiency limit.
OperatingPoint mc_ebn0(double c, const CompositeGainDist& dist, const ChannelParams& params,
                       const QuadratureSpec& spec = {});

/// Root of hf_denominator in c, or +infinity when the denominator stays
/// positive over the whole search range.
double spectral_efficiency_limit(const CompositeGainDist& dist, const ChannelParams& params,
                                 const QuadratureSpec& spec = {});

/// Common interference level every BS converges to as K grows:
/// n0 * A / (1 - A) with A = interference_load(c). Throws LimitExceeded if A >= 1.
double asymptotic_interference(double c, const CompositeGainDist& dist, const ChannelParams& params,
                               double n0 = 1.0, const QuadratureSpec& spec = {});

}  // namespace mcf
