#pragma once

#include <optional>

#include "mcf/hard_fairness.hpp"

namespace mcf {

// Partial reuse on the linear array. Even and odd cells alternate phases: in
// its active phase a cell serves all users, in the other phase only users
// within the reuse radius r0. Outer-zone users therefore get half their
// requested rate. The geometry is normalized to D = 2 (cell radius 1); other D
// values are mapped onto it and the Eb/N0 shifted by 10 alpha log10(D/2) dB.

/// Fraction of their requested rate that outer-zone users receive.
inline constexpr double kOuterZoneRateFraction = 0.5;

struct PartialReuseState {
    double c = 0.0;           // overall spectral efficiency, bit/s/Hz
    double r0 = 1.0;          // reuse radius (in units of the cell radius)
    double gamma0 = 0.0;      // bits per symbol of a cell in its fully active phase (all M subchannels)
    double gamma1 = 0.0;      // same for the inner-only phase: gamma0 (r0 - delta)/(1 - delta)
    double load0 = 0.0;       // gamma0 / M
    double load1 = 0.0;       // gamma1 / M
    Matrix2 a_matrix{};       // [receiving parity][transmitting parity]
    double i0 = 0.0;          // interference at fully active cells, units of N0
    double i1 = 0.0;          // interference at inner-only cells, units of N0
    OperatingPoint point;
};

/// C = (gamma0 / 2M) (1 + r0 - 2 delta) / (1 - delta) in the normalized geometry.
double partial_spectral_efficiency(double gamma0_bits, double r0, const ChannelParams& params);

/// Eb/N0 curves for cell spacing D follow from the D = 2 ones by this dB shift.
double cell_rescaling_shift_db(double D, double alpha);

/// Evaluates the partial-reuse system at a fixed channel configuration.
/// Caches the full-cell gain distribution; inner-zone distributions are built per r0.
class PartialReuseModel {
public:
    explicit PartialReuseModel(const ChannelParams& params, const QuadratureSpec& spec = {});

    /// Parameters after normalization to D = 2.
    const ChannelParams& normalized_params() const { return normalized_; }
    const ChannelParams& params() const { return params_; }

    /// Loads (bit/s/Hz) of the fully active and inner-only cells for overall load c.
    std::pair<double, double> loads(double c, double r0) const;

    /// A[i][j]: interference at a parity-i BS per unit (N0 + I_j) caused by the
    /// parity-j cells. Row/column 0 is the fully active parity.
    Matrix2 aij_coefficients(double c, double r0) const;

    /// Solves (I - A)(i0, i1) = A 1. Throws LimitExceeded past the partial-reuse limit.
    Vector2 interference_pair(double c, double r0) const;

    /// Full state including the minimum Eb/N0. Throws LimitExceeded past the limit.
    PartialReuseState evaluate(double c, double r0) const;

    OperatingPoint ebn0(double c, double r0) const { return evaluate(c, r0).point; }

    struct Optimum {
        bool feasible = false;
        double r0 = 0.0;
        OperatingPoint point;
    };

    /// Minimizes Eb/N0 over r0 in [delta, 1]: 64-point grid, then golden-section
    /// refinement around the best grid point. Infeasible r0 count as +infinity.
    Optimum optimize_r0(double c, int grid_points = 64, double r0_tol = 1e-4) const;

    /// Largest c for which the interference pair stays finite at this r0
    /// (spectral radius of A reaches 1); +infinity if none below 512.
    double spectral_efficiency_limit(double r0) const;

private:
    CompositeGainDist inner_dist(double r0) const;

    ChannelParams params_;
    ChannelParams normalized_;
    QuadratureSpec spec_;
    double shift_db_;
    CompositeGainDist full_;
};

/// Spectral radius of a nonnegative 2x2 matrix.
double spectral_radius(const Matrix2& a);

}  // namespace mcf
