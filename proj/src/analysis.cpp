#include "exbound/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace exbound {

namespace {

// Runs tasks[i] for i in [0, count) on up to `jobs` threads; results land by
// index, so output order does not depend on scheduling.
void run_indexed(int count, int jobs, const std::function<void(int)>& task) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = cursor.fetch_add(1);
                if (i >= count) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

DistanceReport curve_distance(const BoundaryCurve& a, const BoundaryCurve& b) {
    if (!(a.market == b.market))
        throw std::invalid_argument("curve_distance: curves have different market parameters");
    if (a.taus.size() < 2 || b.taus.size() < 2)
        throw std::invalid_argument("curve_distance: curves too short");
    const double lo = std::max(a.taus.front(), b.taus.front());
    const double hi = std::min(a.taus.back(), b.taus.back());
    if (!(hi > lo)) throw std::invalid_argument("curve_distance: disjoint tau ranges");

    const SampledBoundary other(b);
    std::vector<double> taus, devs;
    taus.reserve(a.taus.size());
    devs.reserve(a.taus.size());
    for (std::size_t j = 0; j < a.taus.size(); ++j) {
        const double t = a.taus[j];
        if (t < lo || t > hi) continue;
        taus.push_back(t);
        devs.push_back(a.rhos[j] - other(t));
    }
    if (taus.size() < 2) throw std::invalid_argument("curve_distance: too few shared nodes");

    DistanceReport report;
    double sum_sq = 0.0, trapz = 0.0;
    for (std::size_t j = 0; j < devs.size(); ++j) {
        report.l_inf = std::max(report.l_inf, std::abs(devs[j]));
        sum_sq += devs[j] * devs[j];
        if (j > 0)
            trapz += 0.5 * (taus[j] - taus[j - 1]) *
                     (devs[j] * devs[j] + devs[j - 1] * devs[j - 1]);
    }
    report.l2_discrete = std::sqrt(sum_sq);
    report.l2_continuous = std::sqrt(trapz);
    return report;
}

std::vector<double> eoc(std::span<const double> hs, std::span<const double> errs) {
    if (hs.size() != errs.size() || hs.size() < 2)
        throw std::invalid_argument("eoc: need matching lists of length >= 2");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(errs[i] > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
        if (i > 0 && !(hs[i] < hs[i - 1]))
            throw std::invalid_argument("eoc: mesh sizes must decrease");
    }
    std::vector<double> out(hs.size() - 1);
    for (std::size_t i = 1; i < hs.size(); ++i)
        out[i - 1] = (std::log(errs[i]) - std::log(errs[i - 1])) /
                     (std::log(hs[i]) - std::log(hs[i - 1]));
    return out;
}

std::vector<double> param_order(std::span<const double> params, std::span<const double> dists) {
    if (params.size() != dists.size() || params.size() < 2)
        throw std::invalid_argument("param_order: need matching lists of length >= 2");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i] > 0.0) || !(dists[i] > 0.0))
            throw std::invalid_argument("param_order: values must be positive");
        if (i > 0 && !(params[i] > params[i - 1]))
            throw std::invalid_argument("param_order: parameters must increase");
    }
    std::vector<double> out(params.size() - 1);
    for (std::size_t i = 1; i < params.size(); ++i)
        out[i - 1] = (std::log(dists[i]) - std::log(dists[i - 1])) /
                     (std::log(params[i]) - std::log(params[i - 1]));
    return out;
}

double loglog_slope(std::span<const double> params, std::span<const double> dists) {
    if (params.size() != dists.size() || params.size() < 2)
        throw std::invalid_argument("loglog_slope: need matching lists of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double x = std::log(params[i]), y = std::log(dists[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_study(const MarketParams& market, double sigma_hat,
                                    std::span<const double> h_list, double cfl_ratio,
                                    const SolverControls& controls, double x_len,
                                    int reference_nodes, int jobs) {
    if (h_list.empty()) throw std::invalid_argument("convergence_study: empty h list");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw std::invalid_argument("convergence_study: h list must decrease");

    ConvergenceReport report{
        {}, {}, {}, {},
        solve_integral_equation(market, sigma_hat,
                                IntegralGrid::uniform(market.maturity, reference_nodes))};
    report.rows.resize(h_list.size());

    const auto spec = VolatilitySpec::constant(sigma_hat);
    std::vector<std::optional<BoundaryCurve>> staged(h_list.size());
    run_indexed(static_cast<int>(h_list.size()), jobs, [&](int i) {
        const double h = h_list[i];
        const int n = std::max(2, static_cast<int>(std::lround(x_len / h)));
        const double k_target = cfl_ratio * h * h / (sigma_hat * sigma_hat);
        const int m = std::max(1, static_cast<int>(std::lround(market.maturity / k_target)));
        const Grid grid(x_len, n, m);
        SolveResult run = solve(market, spec, grid, controls);
        ConvergenceRow row;
        row.h = grid.h();
        row.n_space = n;
        row.m_time = m;
        row.cfl = sigma_hat * sigma_hat * grid.time_step(market) / (grid.h() * grid.h());
        row.rho_end = run.boundary.rhos.back();
        row.dist = curve_distance(run.boundary, report.reference);
        report.rows[i] = row;
        staged[i] = std::move(run.boundary);
    });
    report.curves.reserve(h_list.size());
    for (auto& c : staged) report.curves.push_back(std::move(*c));

    std::vector<double> hs, e_inf, e_l2;
    for (const auto& row : report.rows) {
        hs.push_back(row.h);
        e_inf.push_back(row.dist.l_inf);
        e_l2.push_back(row.dist.l2_discrete);
    }
    if (hs.size() >= 2) {
        report.eoc_linf = eoc(hs, e_inf);
        report.eoc_l2 = eoc(hs, e_l2);
    }
    return report;
}

SweepReport parameter_sweep(const MarketParams& market, const Grid& grid, double sigma_hat,
                            SweepFamily family, double cost, std::span<const double> params,
                            const SolverControls& controls, int jobs) {
    if (params.empty()) throw std::invalid_argument("parameter_sweep: empty parameter list");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i] > 0.0))
            throw std::invalid_argument("parameter_sweep: parameters must be positive");
        if (i > 0 && !(params[i] > params[i - 1]))
            throw std::invalid_argument("parameter_sweep: parameters must increase");
    }

    // Shared psi table for the whole Barles-Soner family.
    std::shared_ptr<const PsiTable> psi;
    if (family == SweepFamily::BarlesSoner) psi = std::make_shared<const PsiTable>(build_psi_table());

    auto spec_for = [&](double value) {
        if (family == SweepFamily::Rapm)
            return VolatilitySpec::rapm(sigma_hat, rapm_mu(cost, value));
        return VolatilitySpec::barles_soner(sigma_hat, value, market.rate, psi);
    };

    // Slot 0 is the constant-volatility reference; it runs within the same pool.
    const int total = static_cast<int>(params.size()) + 1;
    std::vector<std::optional<SolveResult>> staged(total);
    run_indexed(total, jobs, [&](int idx) {
        const VolatilitySpec spec =
            idx == 0 ? VolatilitySpec::constant(sigma_hat) : spec_for(params[idx - 1]);
        staged[idx] = solve(market, spec, grid, controls);
    });

    SweepReport report{{},
                       {},
                       {},
                       {},
                       std::move(staged[0]->boundary),
                       {},
                       std::move(staged[0]->report)};
    report.rows.resize(params.size());
    report.curves.reserve(params.size());
    report.solver_reports.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& run = *staged[i + 1];
        report.rows[i].param = params[i];
        report.rows[i].rho_end = run.boundary.rhos.back();
        report.rows[i].dist = curve_distance(run.boundary, report.reference);
        report.curves.push_back(std::move(run.boundary));
        report.solver_reports.push_back(std::move(run.report));
    }

    std::vector<double> ps, d_inf, d_l2;
    for (const auto& row : report.rows) {
        ps.push_back(row.param);
        d_inf.push_back(row.dist.l_inf);
        d_l2.push_back(row.dist.l2_discrete);
    }
    if (ps.size() >= 2) {
        report.alpha_linf = param_order(ps, d_inf);
        report.alpha_l2 = param_order(ps, d_l2);
    }
    return report;
}

}  // namespace exbound
