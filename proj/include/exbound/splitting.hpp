#pragma once

#include <span>
#include <utility>
#include <vector>

#include "exbound/landau.hpp"
#include "exbound/volatility.hpp"

namespace exbound {

struct SolverControls {
    double micro_tol = 1e-7;  // stopping threshold for the within-level iteration
    int max_micro = 50;
    int store_every = 0;       // snapshot stride; 0 means max(1, m/100)
    double relaxation = 1.0;   // under-relaxation factor in (0, 1]
};

/// Interior rows i = 1..n-1 of the implicit diffusion step, Dirichlet data
/// already folded into rhs.
struct TridiagonalSystem {
    std::vector<double> alpha;  // sub-diagonal
    std::vector<double> beta;   // diagonal
    std::vector<double> gamma;  // super-diagonal
    std::vector<double> rhs;
};

struct LevelStats {
    int micro_iters = 0;
    double residual = 0.0;        // last micro-iteration change
    double resub_residual = 0.0;  // defect of the converged pair in the level system
    double boundary_slope = 0.0;  // (pi_1 - pi_0)/h at convergence
};

struct SolveReport {
    std::vector<int> micro_counts;
    std::vector<double> residuals;
    std::vector<double> resub_residuals;
    std::vector<double> parabolicity_samples;
    double min_parabolicity = 0.0;
    double min_boundary_slope = 0.0;
    double max_pi_overshoot = 0.0;   // largest excursion outside [-E, 0]
    double max_rho_decrease = 0.0;   // largest single-level drop of rho
    long transport_overflow_count = 0;
    long suspicious_rho_count = 0;   // boundary updates that fell below the strike
    double wall_seconds = 0.0;
};

struct SolveResult {
    BoundaryCurve boundary;
    std::vector<PortfolioState> snapshots;
    SolveReport report;
};

/// Exact solution of the convective sub-step: the previous profile shifted by
/// ln(rho_new/rho_prev) + (r - q) k and sampled back on the grid with linear
/// interpolation; -E where the foot of the characteristic leaves through x = 0,
/// far-field 0 (counted into *overflow) where it leaves through x = L.
std::vector<double> transport_step(const PortfolioState& prev, double rho_new,
                                   const MarketParams& market, const Grid& grid,
                                   long* overflow = nullptr);

/// Coefficients of the implicit diffusion step at time tau_j, with the local
/// volatilities taken from forward differences of pi_iter. rhs holds only the
/// folded Dirichlet contributions; the transported profile is added by the caller.
TridiagonalSystem assemble_diffusion(std::span<const double> pi_iter, double rho_iter,
                                     double tau_j, const Grid& grid, const MarketParams& market,
                                     const VolatilitySpec& spec);

/// Thomas forward elimination / back substitution.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

/// Boundary position from the discrete constraint
///   rho = rE/q + sigma^2(slope, rho_prev_iter, tau) * slope / (2q),
/// slope = (pi_1 - pi_0)/h. Sets *suspicious when the result falls below the strike.
double update_boundary(std::span<const double> pi_iter, double rho_prev_iter, double tau_j,
                       const Grid& grid, const MarketParams& market, const VolatilitySpec& spec,
                       bool* suspicious = nullptr);

/// One backward Euler level: successive substitution over the boundary update,
/// transport and diffusion solve until the pair (Pi, rho) stops moving.
std::pair<PortfolioState, LevelStats> time_step(const PortfolioState& prev, double tau_j,
                                                const MarketParams& market, const Grid& grid,
                                                const VolatilitySpec& spec,
                                                const SolverControls& controls);

/// Full march over m levels from the tau = 0 state.
SolveResult solve(const MarketParams& market, const VolatilitySpec& spec, const Grid& grid,
                  const SolverControls& controls = {});

}  // namespace exbound
