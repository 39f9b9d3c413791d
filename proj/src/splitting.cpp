#include "exbound/splitting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

struct StepWorkspace {
    explicit StepWorkspace(const Grid& grid)
        : exp_neg_x(grid.n_space + 1),
          pi_half(grid.n_space + 1),
          pi_next(grid.n_space + 1),
          alpha(grid.n_space - 1),
          beta(grid.n_space - 1),
          gamma(grid.n_space - 1),
          rhs(grid.n_space - 1),
          scratch(grid.n_space - 1) {
        for (int i = 0; i <= grid.n_space; ++i) exp_neg_x[i] = std::exp(-grid.x(i));
    }

    std::vector<double> exp_neg_x;
    std::vector<double> pi_half, pi_next;
    std::vector<double> alpha, beta, gamma, rhs, scratch;
};

void transport_core(std::span<const double> prev_pi, double shift, double h, double strike,
                    double x_len, std::span<double> out, long* overflow) {
    const int n = static_cast<int>(prev_pi.size()) - 1;
    for (int i = 0; i <= n; ++i) {
        const double xi = i * h - shift;
        if (xi <= 0.0) {
            out[i] = -strike;
        } else if (xi >= x_len) {
            out[i] = 0.0;
            if (xi > x_len && overflow) ++(*overflow);
        } else {
            const double u = xi / h;
            int idx = static_cast<int>(u);
            if (idx >= n) idx = n - 1;
            const double t = u - idx;
            out[i] = prev_pi[idx] * (1.0 - t) + prev_pi[idx + 1] * t;
        }
    }
}

double transport_shift(double rho_new, double rho_prev, const MarketParams& market, double k) {
    return std::log(rho_new) - std::log(rho_prev) + (market.rate - market.dividend_yield) * k;
}

template <class Sigma2>
void assemble_core(std::span<const double> pi_iter, double rho_iter, double k, double h, double r,
                   double strike, std::span<const double> exp_neg_x, const Sigma2& sigma2,
                   std::span<double> alpha, std::span<double> beta, std::span<double> gamma,
                   std::span<double> rhs) {
    const int n = static_cast<int>(pi_iter.size()) - 1;
    const double c_diff = k / (2.0 * h * h);
    const double c_conv = k / (4.0 * h);
    double sig_prev = sigma2((pi_iter[1] - pi_iter[0]) / h, rho_iter * exp_neg_x[0]);
    for (int i = 1; i <= n - 1; ++i) {
        const double sig_i = sigma2((pi_iter[i + 1] - pi_iter[i]) / h, rho_iter * exp_neg_x[i]);
        const double a = -c_diff * sig_prev + c_conv * sig_i;
        const double g = -c_diff * sig_i - c_conv * sig_i;
        alpha[i - 1] = a;
        gamma[i - 1] = g;
        beta[i - 1] = 1.0 + r * k - (a + g);
        rhs[i - 1] = 0.0;
        sig_prev = sig_i;
    }
    rhs[0] += alpha[0] * strike;  // row 1 picks up -alpha_1 * Pi_0 = -alpha_1 * (-E)
}

void thomas_core(std::span<const double> alpha, std::span<const double> beta,
                 std::span<const double> gamma, std::span<const double> rhs,
                 std::span<double> scratch, std::span<double> out) {
    const int n = static_cast<int>(beta.size());
    double den = beta[0];
    if (std::abs(den) < std::numeric_limits<double>::min())
        throw SingularSystemError(0, "thomas_solve: zero pivot at row 0");
    scratch[0] = gamma[0] / den;
    out[0] = rhs[0] / den;
    for (int i = 1; i < n; ++i) {
        den = beta[i] - alpha[i] * scratch[i - 1];
        if (std::abs(den) < std::numeric_limits<double>::min())
            throw SingularSystemError(i, "thomas_solve: zero pivot at row " + std::to_string(i));
        scratch[i] = gamma[i] / den;
        out[i] = (rhs[i] - alpha[i] * out[i - 1]) / den;
    }
    for (int i = n - 2; i >= 0; --i) out[i] -= scratch[i] * out[i + 1];
}

template <class Sigma2>
double boundary_core(double pi0, double pi1, double rho_prev, double h,
                     const MarketParams& market, const Sigma2& sigma2, bool* suspicious) {
    const double slope = (pi1 - pi0) / h;
    const double s2 = sigma2(slope, rho_prev);
    const double rho = market.initial_boundary() + s2 * slope / (2.0 * market.dividend_yield);
    if (suspicious) *suspicious = rho < market.strike;
    return rho;
}

// Volatility evaluator with the per-level constants resolved once.
struct SigmaAt {
    const VolatilitySpec& spec;
    double tau;
    double operator()(double p, double xi) const { return sigma_squared(spec, p, xi, tau); }
};

struct LevelCounters {
    long transport_overflow = 0;
    long suspicious_rho = 0;
};

LevelStats step_core(const PortfolioState& prev, double tau_j, const MarketParams& market,
                     const Grid& grid, const VolatilitySpec& spec, const SolverControls& controls,
                     StepWorkspace& ws, PortfolioState& next, LevelCounters& counters) {
    const int n = grid.n_space;
    const double h = grid.h();
    const double k = grid.time_step(market);
    const double omega = controls.relaxation;
    if (!(omega > 0.0 && omega <= 1.0))
        throw std::invalid_argument("SolverControls: relaxation must lie in (0, 1]");
    const SigmaAt sigma2{spec, tau_j};

    next.pi = prev.pi;  // Pi^{j,0}
    double rho_cur = prev.rho;
    std::vector<double>& pi_cur = next.pi;

    double diff = std::numeric_limits<double>::infinity();
    int micro = 0;
    while (micro < controls.max_micro) {
        ++micro;
        bool suspicious = false;
        const double rho_raw =
            boundary_core(pi_cur[0], pi_cur[1], rho_cur, h, market, sigma2, &suspicious);
        if (suspicious) ++counters.suspicious_rho;
        const double rho_new = omega * rho_raw + (1.0 - omega) * rho_cur;

        transport_core(prev.pi, transport_shift(rho_new, prev.rho, market, k), h, market.strike,
                       grid.x_len, ws.pi_half, &counters.transport_overflow);

        assemble_core(pi_cur, rho_new, k, h, market.rate, market.strike, ws.exp_neg_x, sigma2,
                      ws.alpha, ws.beta, ws.gamma, ws.rhs);
        for (int i = 1; i <= n - 1; ++i) ws.rhs[i - 1] += ws.pi_half[i];
        thomas_core(ws.alpha, ws.beta, ws.gamma, ws.rhs, ws.scratch,
                    std::span(ws.pi_next).subspan(1, n - 1));
        ws.pi_next[0] = -market.strike;
        ws.pi_next[n] = 0.0;

        diff = std::abs(rho_new - rho_cur);
        for (int i = 1; i <= n - 1; ++i) {
            const double relaxed = omega * ws.pi_next[i] + (1.0 - omega) * pi_cur[i];
            diff = std::max(diff, std::abs(relaxed - pi_cur[i]));
            pi_cur[i] = relaxed;
        }
        rho_cur = rho_new;
        if (diff < controls.micro_tol) break;
    }
    if (!(diff < controls.micro_tol))
        throw NonconvergenceError("time_step: micro-iterations did not reach tolerance at tau = " +
                                      std::to_string(tau_j),
                                  diff, prev.level + 1);

    // Defect of the converged pair in the level system: re-evaluate the boundary
    // map, the transport and the diffusion rows at (Pi*, rho*).
    const double rho_check = boundary_core(pi_cur[0], pi_cur[1], rho_cur, h, market, sigma2, nullptr);
    double resub = std::abs(rho_check - rho_cur);
    transport_core(prev.pi, transport_shift(rho_cur, prev.rho, market, k), h, market.strike,
                   grid.x_len, ws.pi_half, nullptr);
    assemble_core(pi_cur, rho_cur, k, h, market.rate, market.strike, ws.exp_neg_x, sigma2,
                  ws.alpha, ws.beta, ws.gamma, ws.rhs);
    for (int i = 1; i <= n - 1; ++i) {
        const double row = ws.alpha[i - 1] * pi_cur[i - 1] + ws.beta[i - 1] * pi_cur[i] +
                           ws.gamma[i - 1] * pi_cur[i + 1];
        resub = std::max(resub, std::abs(row - ws.pi_half[i]));
    }

    next.rho = rho_cur;
    next.level = prev.level + 1;
    next.tau = tau_j;
    return {micro, diff, resub, (pi_cur[1] - pi_cur[0]) / h};
}

}  // namespace

std::vector<double> transport_step(const PortfolioState& prev, double rho_new,
                                   const MarketParams& market, const Grid& grid, long* overflow) {
    if (!(rho_new > 0.0)) throw std::domain_error("transport_step: rho_new must be positive");
    std::vector<double> out(grid.n_space + 1);
    transport_core(prev.pi, transport_shift(rho_new, prev.rho, market, grid.time_step(market)),
                   grid.h(), market.strike, grid.x_len, out, overflow);
    return out;
}

TridiagonalSystem assemble_diffusion(std::span<const double> pi_iter, double rho_iter,
                                     double tau_j, const Grid& grid, const MarketParams& market,
                                     const VolatilitySpec& spec) {
    if (static_cast<int>(pi_iter.size()) != grid.n_space + 1)
        throw std::invalid_argument("assemble_diffusion: profile length mismatch");
    TridiagonalSystem sys;
    const int rows = grid.n_space - 1;
    sys.alpha.resize(rows);
    sys.beta.resize(rows);
    sys.gamma.resize(rows);
    sys.rhs.resize(rows);
    std::vector<double> exp_neg_x(grid.n_space + 1);
    for (int i = 0; i <= grid.n_space; ++i) exp_neg_x[i] = std::exp(-grid.x(i));
    assemble_core(pi_iter, rho_iter, grid.time_step(market), grid.h(), market.rate, market.strike,
                  exp_neg_x, SigmaAt{spec, tau_j}, sys.alpha, sys.beta, sys.gamma, sys.rhs);
    return sys;
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.beta.size();
    if (n == 0 || sys.alpha.size() != n || sys.gamma.size() != n || sys.rhs.size() != n)
        throw std::invalid_argument("thomas_solve: inconsistent system sizes");
    std::vector<double> out(n), scratch(n);
    thomas_core(sys.alpha, sys.beta, sys.gamma, sys.rhs, scratch, out);
    return out;
}

double update_boundary(std::span<const double> pi_iter, double rho_prev_iter, double tau_j,
                       const Grid& grid, const MarketParams& market, const VolatilitySpec& spec,
                       bool* suspicious) {
    if (pi_iter.size() < 2) throw std::invalid_argument("update_boundary: profile too short");
    if (std::abs(pi_iter[0] + market.strike) > 1e-9 * market.strike)
        throw std::invalid_argument("update_boundary: pi[0] must equal -strike");
    return boundary_core(pi_iter[0], pi_iter[1], rho_prev_iter, grid.h(), market,
                         SigmaAt{spec, tau_j}, suspicious);
}

std::pair<PortfolioState, LevelStats> time_step(const PortfolioState& prev, double tau_j,
                                                const MarketParams& market, const Grid& grid,
                                                const VolatilitySpec& spec,
                                                const SolverControls& controls) {
    StepWorkspace ws(grid);
    PortfolioState next;
    LevelCounters counters;
    LevelStats stats = step_core(prev, tau_j, market, grid, spec, controls, ws, next, counters);
    return {std::move(next), stats};
}

SolveResult solve(const MarketParams& market, const VolatilitySpec& spec, const Grid& grid,
                  const SolverControls& controls) {
    validate_grid(grid, market);
    const auto t_start = std::chrono::steady_clock::now();
    const int n = grid.n_space;
    const int m = grid.m_time;
    const double k = grid.time_step(market);
    const double strike = market.strike;

    SolveResult result{BoundaryCurve{{}, {}, market, std::string(spec.model_name())}, {}, {}};
    SolveReport& report = result.report;

    // Parabolicity probe over the attainable slope range before marching.
    report.min_parabolicity = std::numeric_limits<double>::infinity();
    const double p_hi = strike / grid.h();
    for (double xi : {market.initial_boundary() * std::exp(-grid.x_len), market.initial_boundary()})
        for (double tau : {0.0, 0.5 * market.maturity, market.maturity}) {
            double margin;
            try {
                margin = parabolicity_margin(spec, 0.0, p_hi, xi, tau, 65);
            } catch (const std::exception&) {
                margin = -std::numeric_limits<double>::infinity();
            }
            report.parabolicity_samples.push_back(margin);
            report.min_parabolicity = std::min(report.min_parabolicity, margin);
        }

    const int stride = controls.store_every > 0 ? controls.store_every : std::max(1, m / 100);

    PortfolioState state = initial_state(market, grid);
    PortfolioState next;
    next.pi.resize(n + 1);
    StepWorkspace ws(grid);
    LevelCounters counters;

    result.boundary.taus.reserve(m + 1);
    result.boundary.rhos.reserve(m + 1);
    result.boundary.taus.push_back(0.0);
    result.boundary.rhos.push_back(state.rho);
    result.snapshots.push_back(state);
    report.micro_counts.reserve(m);
    report.residuals.reserve(m);
    report.resub_residuals.reserve(m);
    report.min_boundary_slope = std::numeric_limits<double>::infinity();

    for (int j = 1; j <= m; ++j) {
        const double tau_j = j * k;
        LevelStats stats;
        try {
            stats = step_core(state, tau_j, market, grid, spec, controls, ws, next, counters);
        } catch (NonconvergenceError& e) {
            e.partial = std::make_shared<BoundaryCurve>(result.boundary);
            throw;
        }
        std::swap(state, next);

        report.micro_counts.push_back(stats.micro_iters);
        report.residuals.push_back(stats.residual);
        report.resub_residuals.push_back(stats.resub_residual);
        report.min_boundary_slope = std::min(report.min_boundary_slope, stats.boundary_slope);
        report.max_rho_decrease =
            std::max(report.max_rho_decrease, result.boundary.rhos.back() - state.rho);
        double overshoot = 0.0;
        for (double v : state.pi) overshoot = std::max(overshoot, std::max(v, -strike - v));
        report.max_pi_overshoot = std::max(report.max_pi_overshoot, overshoot);

        result.boundary.taus.push_back(tau_j);
        result.boundary.rhos.push_back(state.rho);
        if (j % stride == 0 || j == m) result.snapshots.push_back(state);
    }

    report.transport_overflow_count = counters.transport_overflow;
    report.suspicious_rho_count = counters.suspicious_rho;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

}  // namespace exbound
