#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "exbound/analysis.hpp"
#include "exbound/landau.hpp"
#include "exbound/splitting.hpp"

namespace exbound {

/// Shortest round-trip decimal representation (17 significant digits).
std::string format_double(double v);

// CSV emitters. All use '\n' endings and format_double for numeric fields,
// so identical inputs serialize byte-identically.

/// Header `tau,rho`, one row per time level.
void write_boundary_csv(std::ostream& os, const BoundaryCurve& curve);

/// Header `x,pi` for a single state.
void write_state_csv(std::ostream& os, const PortfolioState& state, const Grid& grid);

/// Header `tau,x,pi`, snapshots stacked in time order.
void write_snapshots_csv(std::ostream& os, std::span<const PortfolioState> snapshots,
                         const Grid& grid);

/// Header `h,err_linf,eoc_linf,err_l2,eoc_l2`; the eoc fields of the first row
/// are empty.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

/// Header `param,dist_linf,alpha_linf,dist_l2,alpha_l2`.
void write_sweep_csv(std::ostream& os, const SweepReport& report);

/// Header `level,tau,micro_iters,residual,resub_residual`, decimated to the
/// given stride (the last level is always included).
void write_report_csv(std::ostream& os, const SolveReport& report, double time_step, int stride);

}  // namespace exbound
