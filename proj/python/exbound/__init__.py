"""Early exercise boundary solver for nonlinear Black-Scholes models."""

from ._core import (
    BoundaryCurve,
    DistanceReport,
    Grid,
    LevelStats,
    MarketParams,
    PortfolioState,
    PsiTable,
    SolveReport,
    SolveResult,
    SolverControls,
    VolatilitySpec,
    build_psi_table,
    curve_distance,
    eoc,
    initial_state,
    leland_constant,
    loglog_slope,
    param_order,
    parabolicity_margin,
    rapm_mu,
    reconstruct_price,
    sigma_squared,
    solve,
    solve_integral_equation,
    to_asset_price,
)

__all__ = [
    "BoundaryCurve",
    "DistanceReport",
    "Grid",
    "LevelStats",
    "MarketParams",
    "PortfolioState",
    "PsiTable",
    "SolveReport",
    "SolveResult",
    "SolverControls",
    "VolatilitySpec",
    "build_psi_table",
    "curve_distance",
    "eoc",
    "initial_state",
    "leland_constant",
    "loglog_slope",
    "param_order",
    "parabolicity_margin",
    "rapm_mu",
    "reconstruct_price",
    "sigma_squared",
    "solve",
    "solve_integral_equation",
    "to_asset_price",
]

__version__ = "0.1.0"
