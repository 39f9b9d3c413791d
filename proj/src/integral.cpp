#include "exbound/integral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "exbound/errors.hpp"

namespace exbound {

IntegralGrid IntegralGrid::uniform(double t_end, int m_nodes, int quad_nodes_per_panel) {
    if (!(t_end > 0.0) || m_nodes < 1)
        throw std::invalid_argument("IntegralGrid: invalid extent or node count");
    IntegralGrid g;
    g.quad_nodes_per_panel = quad_nodes_per_panel;
    g.taus.resize(m_nodes + 1);
    for (int j = 0; j <= m_nodes; ++j) g.taus[j] = t_end * j / m_nodes;
    return g;
}

IntegralGrid IntegralGrid::graded(double t_end, int m_nodes, double power,
                                  int quad_nodes_per_panel) {
    if (!(t_end > 0.0) || m_nodes < 1 || !(power >= 1.0))
        throw std::invalid_argument("IntegralGrid: invalid extent, node count or grading");
    IntegralGrid g;
    g.quad_nodes_per_panel = quad_nodes_per_panel;
    g.taus.resize(m_nodes + 1);
    for (int j = 0; j <= m_nodes; ++j)
        g.taus[j] = t_end * std::pow(static_cast<double>(j) / m_nodes, power);
    return g;
}

SampledBoundary::SampledBoundary(std::vector<double> taus, std::vector<double> rhos)
    : interp_(std::move(taus), std::move(rhos)) {}

SampledBoundary::SampledBoundary(const BoundaryCurve& curve)
    : interp_(curve.taus, curve.rhos) {}

double a_kernel(const SampledBoundary& rho, double tau, double s, const MarketParams& market,
                double sigma_hat) {
    if (!(s >= 0.0 && s <= tau))
        throw std::invalid_argument("a_kernel: need 0 <= s <= tau");
    const double drift = market.rate - market.dividend_yield - 0.5 * sigma_hat * sigma_hat;
    if (s == tau) return 0.0;
    return std::log(rho(tau)) - std::log(rho(s)) + drift * (tau - s);
}

namespace {

constexpr double kSingularCut = 1e-12;  // below this tau-s, use the analytic limit

// Right side evaluated with the endpoint value rho(tau) overridden by
// rho_at_tau; the sweep's scalar solves vary the endpoint while the sampled
// curve below stays frozen. Inside the cell adjacent to tau the divided
// difference of ln rho is the constant cell slope: the pointwise interpolant
// there would couple the endpoint with weight O(1/(tau-s)), which destabilizes
// the sweep as a grid-scale sawtooth, while the cell slope keeps the
// self-coupling integrable.
double rhs_with_endpoint(const SampledBoundary& rho_curve, double tau, double rho_at_tau,
                         const MarketParams& market, double sigma_hat, const IntegralGrid& grid) {
    const double rim = market.initial_boundary();  // rE/q
    const double drift = market.rate - market.dividend_yield - 0.5 * sigma_hat * sigma_hat;
    const double log_rq = std::log(market.rate / market.dividend_yield);
    const double log_end = std::log(rho_at_tau);

    const double a0 = log_end - std::log(rho_curve(0.0)) + drift * tau;
    const double boundary_term =
        sigma_hat / (market.rate * std::sqrt(2.0 * std::numbers::pi * tau)) *
        std::exp(-market.rate * tau -
                 (a0 + log_rq) * (a0 + log_rq) / (2.0 * sigma_hat * sigma_hat * tau));

    // Panels in u = sqrt(tau - s) bounded by the images of the tau nodes, so
    // each panel sees a single polynomial piece of the interpolant.
    std::vector<double> breaks;
    breaks.push_back(0.0);
    double prev_node = 0.0;
    for (auto it = grid.taus.rbegin(); it != grid.taus.rend(); ++it) {
        if (*it < tau) {
            prev_node = std::max(prev_node, *it);
            breaks.push_back(std::sqrt(tau - *it));
        }
    }
    if (breaks.back() < std::sqrt(tau)) breaks.push_back(std::sqrt(tau));

    const double near_gap = tau - prev_node;
    const double near_slope = (log_end - std::log(rho_curve(prev_node))) / near_gap;

    auto integrand = [&](double u) {
        const double dt = u * u;
        double ratio, rho_s;
        if (dt < near_gap) {
            ratio = near_slope + drift;
            rho_s = rho_at_tau * std::exp(-near_slope * dt);
        } else {
            rho_s = rho_curve(tau - dt);
            ratio = (log_end - std::log(rho_s)) / dt + drift;
        }
        double expo = 1.0;
        if (dt >= kSingularCut) {
            const double a = ratio * dt;
            expo = std::exp(-market.rate * dt - a * a / (2.0 * sigma_hat * sigma_hat * dt));
        }
        return (sigma_hat + (1.0 - rho_s / rim) * ratio / sigma_hat) * expo;
    };

    const GaussLegendre rule(grid.quad_nodes_per_panel);
    double integral = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
        integral += rule.integrate(integrand, breaks[p], breaks[p + 1]);
    integral *= 2.0 / std::sqrt(2.0 * std::numbers::pi);

    const double value = rim * (1.0 + boundary_term + integral);
    if (!std::isfinite(value))
        throw IntegrationError("integral_rhs: non-finite value at tau = " + std::to_string(tau));
    return value;
}

}  // namespace

double integral_rhs(const SampledBoundary& rho_curve, double tau, const MarketParams& market,
                    double sigma_hat, const IntegralGrid& grid) {
    if (!(tau > 0.0)) throw std::invalid_argument("integral_rhs: tau must be positive");
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("integral_rhs: sigma_hat must be positive");
    return rhs_with_endpoint(rho_curve, tau, rho_curve(tau), market, sigma_hat, grid);
}

BoundaryCurve solve_integral_equation(const MarketParams& market, double sigma_hat,
                                      const IntegralGrid& grid, double tol, int max_iter,
                                      double damping) {
    if (!(sigma_hat > 0.0))
        throw std::invalid_argument("solve_integral_equation: sigma_hat must be positive");
    if (grid.taus.size() < 2 || grid.taus.front() != 0.0)
        throw std::invalid_argument("solve_integral_equation: tau grid must start at 0");
    for (std::size_t j = 1; j < grid.taus.size(); ++j)
        if (!(grid.taus[j] > grid.taus[j - 1]))
            throw std::invalid_argument("solve_integral_equation: tau grid must increase");
    if (std::abs(grid.taus.back() - market.maturity) > 1e-12 * market.maturity)
        throw std::invalid_argument("solve_integral_equation: grid must end at the maturity");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("solve_integral_equation: damping must lie in (0, 1]");

    const std::size_t m = grid.taus.size();
    const double inner_tol = 0.01 * tol;
    std::vector<double> rhos(m, market.initial_boundary());
    std::vector<double> next(m);
    double delta = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const SampledBoundary sampled(grid.taus, rhos);

        // The endpoint value enters its own equation with a large negative
        // weight, so each node update solves the scalar self-consistency
        //   r = rhs(r; frozen earlier values)
        // by a safeguarded secant; sweeping the nodes stays embarrassingly
        // parallel. A plain update of the endpoint diverges at any practical
        // node count.
        auto update_node = [&](std::size_t j) {
            const double tau_j = grid.taus[j];
            auto g = [&](double r) {
                return r - rhs_with_endpoint(sampled, tau_j, r, market, sigma_hat, grid);
            };
            double r0 = rhos[j];
            double g0 = g(r0);
            double r1 = r0 - g0;  // plain step seeds the secant
            for (int inner = 0; inner < 60; ++inner) {
                const double g1 = g(r1);
                if (std::abs(g1) < inner_tol || g1 == g0) break;
                const double r2 = r1 - g1 * (r1 - r0) / (g1 - g0);
                r0 = r1;
                g0 = g1;
                r1 = r2;
            }
            next[j] = r1;
        };

        next[0] = market.initial_boundary();
        {
            std::atomic<std::size_t> cursor{1};
            const unsigned workers =
                std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                   static_cast<unsigned>(m));
            auto worker = [&] {
                for (;;) {
                    const std::size_t j = cursor.fetch_add(1);
                    if (j >= m) return;
                    update_node(j);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();
        }

        delta = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double blended = rhos[j] + damping * (next[j] - rhos[j]);
            delta = std::max(delta, std::abs(blended - rhos[j]));
            rhos[j] = blended;
        }
        if (delta < tol) {
            // Accept only once the fixed-point residual itself is below tol.
            const SampledBoundary converged(grid.taus, rhos);
            double residual = 0.0;
            for (std::size_t j = 1; j < m; ++j)
                residual = std::max(
                    residual, std::abs(integral_rhs(converged, grid.taus[j], market, sigma_hat,
                                                    grid) -
                                       rhos[j]));
            if (residual < tol)
                return BoundaryCurve{grid.taus, std::move(rhos), market, "constant"};
        }
    }
    throw NonconvergenceError("solve_integral_equation: Picard iteration stalled", delta);
}

}  // namespace exbound
