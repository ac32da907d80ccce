"""Spectral efficiency vs. system Eb/N0 of uplink cellular arrays."""

from ._core import (
    BetaEstimate,
    BracketError,
    ChannelParams,
    ConvergenceError,
    DomainError,
    LimitExceeded,
    OperatingPoint,
    SingularSystemError,
    __version__,
    beta_bounds,
    beta_effective,
    classify_regime,
    hurwitz_zeta,
    mc_ebn0,
    mean_interference,
    optimize_r0,
    partial_ebn0,
    pfs_capacity_limit,
    pfs_lower_bound,
    pfs_upper_bound,
    phi0_kernel,
    phi1_kernel,
    phi_kernel,
    run,
    sc_ebn0,
    sc_to_mc,
    simulate_pfs,
    spectral_efficiency_limit,
)


def records(table):
    """Rows of a `run` result as dicts; numeric cells become floats, empty cells None."""

    def convert(cell):
        if cell == "":
            return None
        try:
            return float(cell)
        except ValueError:
            return cell

    return [dict(zip(table["columns"], map(convert, row))) for row in table["rows"]]


__all__ = [name for name in dir() if not name.startswith("_")]
