#pragma once

#include <span>
#include <vector>

#include "exbound/integral.hpp"
#include "exbound/landau.hpp"
#include "exbound/splitting.hpp"

namespace exbound {

/// Distances between two boundary curves over the first curve's tau nodes:
/// sup norm, the continuous L2 norm (trapezoid of the squared deviation over
/// tau) and the unscaled discrete root-sum-square over nodes.
struct DistanceReport {
    double l_inf = 0.0;
    double l2_continuous = 0.0;
    double l2_discrete = 0.0;
};

/// The deviation is sampled on a's nodes, with b evaluated there by
/// shape-preserving interpolation. Curves must share market parameters and
/// overlapping tau ranges.
DistanceReport curve_distance(const BoundaryCurve& a, const BoundaryCurve& b);

/// Experimental orders of convergence per consecutive (h, err) pair:
/// (ln err_i - ln err_{i-1}) / (ln h_i - ln h_{i-1}). hs strictly decreasing.
std::vector<double> eoc(std::span<const double> hs, std::span<const double> errs);

/// Log-log slopes of distances against a strictly increasing parameter.
std::vector<double> param_order(std::span<const double> params, std::span<const double> dists);

/// Least-squares slope of ln(dist) against ln(param) over the whole range.
double loglog_slope(std::span<const double> params, std::span<const double> dists);

struct ConvergenceRow {
    double h = 0.0;
    int n_space = 0;
    int m_time = 0;
    double cfl = 0.0;       // realized sigma_hat^2 k / h^2
    double rho_end = 0.0;
    DistanceReport dist;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::vector<double> eoc_linf;  // per consecutive pair, rows.size()-1 entries
    std::vector<double> eoc_l2;    // discrete variant, the tabulated one
    std::vector<BoundaryCurve> curves;
    BoundaryCurve reference;
};

/// Refinement study against the integral-equation reference: for each h the
/// time step is set from the CFL ratio sigma_hat^2 k/h^2 ~ cfl_ratio and the
/// splitting solver's boundary is compared with the reference curve.
ConvergenceReport convergence_study(const MarketParams& market, double sigma_hat,
                                    std::span<const double> h_list, double cfl_ratio,
                                    const SolverControls& controls, double x_len = 3.0,
                                    int reference_nodes = 800, int jobs = 0);

enum class SweepFamily { Rapm, BarlesSoner };

struct SweepRow {
    double param = 0.0;
    double rho_end = 0.0;
    DistanceReport dist;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<double> alpha_linf;  // per consecutive pair
    std::vector<double> alpha_l2;    // discrete variant
    std::vector<BoundaryCurve> curves;
    BoundaryCurve reference;  // constant-volatility run on the same grid
    std::vector<SolveReport> solver_reports;
    SolveReport reference_report;
};

/// Runs the splitting solver for each parameter value (risk premium R at fixed
/// cost for Rapm, risk aversion a for BarlesSoner) and measures distances to
/// the constant-volatility boundary on the same grid.
SweepReport parameter_sweep(const MarketParams& market, const Grid& grid, double sigma_hat,
                            SweepFamily family, double cost, std::span<const double> params,
                            const SolverControls& controls, int jobs = 0);

}  // namespace exbound
