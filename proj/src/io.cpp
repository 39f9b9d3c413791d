#include "exbound/io.hpp"

#include <cstdio>
#include <ostream>

namespace exbound {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_boundary_csv(std::ostream& os, const BoundaryCurve& curve) {
    os << "tau,rho\n";
    for (std::size_t j = 0; j < curve.taus.size(); ++j)
        os << format_double(curve.taus[j]) << ',' << format_double(curve.rhos[j]) << '\n';
}

void write_state_csv(std::ostream& os, const PortfolioState& state, const Grid& grid) {
    os << "x,pi\n";
    for (std::size_t i = 0; i < state.pi.size(); ++i)
        os << format_double(grid.x(static_cast<int>(i))) << ',' << format_double(state.pi[i])
           << '\n';
}

void write_snapshots_csv(std::ostream& os, std::span<const PortfolioState> snapshots,
                         const Grid& grid) {
    os << "tau,x,pi\n";
    for (const auto& state : snapshots)
        for (std::size_t i = 0; i < state.pi.size(); ++i)
            os << format_double(state.tau) << ',' << format_double(grid.x(static_cast<int>(i)))
               << ',' << format_double(state.pi[i]) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "h,err_linf,eoc_linf,err_l2,eoc_l2\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        os << format_double(row.h) << ',' << format_double(row.dist.l_inf) << ',';
        if (i > 0) os << format_double(report.eoc_linf[i - 1]);
        os << ',' << format_double(row.dist.l2_discrete) << ',';
        if (i > 0) os << format_double(report.eoc_l2[i - 1]);
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
    os << "param,dist_linf,alpha_linf,dist_l2,alpha_l2\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        os << format_double(row.param) << ',' << format_double(row.dist.l_inf) << ',';
        if (i > 0) os << format_double(report.alpha_linf[i - 1]);
        os << ',' << format_double(row.dist.l2_discrete) << ',';
        if (i > 0) os << format_double(report.alpha_l2[i - 1]);
        os << '\n';
    }
}

void write_report_csv(std::ostream& os, const SolveReport& report, double time_step, int stride) {
    os << "level,tau,micro_iters,residual,resub_residual\n";
    if (stride < 1) stride = 1;
    const std::size_t m = report.micro_counts.size();
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t level = j + 1;
        if (level % stride != 0 && level != m) continue;
        os << level << ',' << format_double(level * time_step) << ',' << report.micro_counts[j]
           << ',' << format_double(report.residuals[j]) << ','
           << format_double(report.resub_residuals[j]) << '\n';
    }
}

}  // namespace exbound
