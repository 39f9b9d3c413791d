#include "exbound/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

// dpsi/dt with t = ln x; the ODE is integrated in log-abscissa where the
// cube-root branch is mild.
double psi_ode_log_rhs(double t, double psi) {
    const double x = std::exp(t);
    const double den = 2.0 * std::sqrt(psi / x) - 1.0;
    if (!(den > 0.0))
        throw IntegrationError("psi ODE: denominator 2 sqrt(x psi) - x reached zero at x = " +
                               std::to_string(x));
    return (psi + 1.0) / den;
}

double rk4_step(double t, double psi, double dt) {
    const double k1 = psi_ode_log_rhs(t, psi);
    const double k2 = psi_ode_log_rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
    const double k3 = psi_ode_log_rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
    const double k4 = psi_ode_log_rhs(t + dt, psi + dt * k3);
    return psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advance from t0 to t1 with step-doubling error control.
double integrate_psi(double t0, double psi0, double t1, double tol) {
    double t = t0, psi = psi0;
    double dt = std::min(0.05, t1 - t0);
    while (t < t1) {
        dt = std::min(dt, t1 - t);
        const double full = rk4_step(t, psi, dt);
        const double half = rk4_step(t + 0.5 * dt, rk4_step(t, psi, 0.5 * dt), 0.5 * dt);
        const double err = std::abs(half - full) / 15.0;
        const double scale = tol * std::max(1.0, std::abs(half));
        if (err <= scale) {
            t += dt;
            psi = half + (half - full) / 15.0;
        }
        const double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        dt *= std::clamp(grow, 0.2, 5.0);
        if (dt < 1e-14) throw IntegrationError("psi ODE: step size underflow");
    }
    return psi;
}

}  // namespace

PsiTable build_psi_table(double eps, double x_max, int n_nodes, double tol) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("build_psi_table: eps must lie in (0, 1)");
    if (!(x_max > eps)) throw std::invalid_argument("build_psi_table: x_max must exceed eps");
    if (n_nodes < 2) throw std::invalid_argument("build_psi_table: need at least 2 nodes");
    if (!(tol > 0.0)) throw std::invalid_argument("build_psi_table: tol must be positive");

    // Seed coefficient: require the cube-root ansatz psi = c x^{1/3} to satisfy
    // the ODE at x = eps. The residual is increasing in c, so bisection applies.
    auto residual = [eps](double c) {
        const double psi = c * std::cbrt(eps);
        const double lhs = c / (3.0 * std::cbrt(eps * eps));
        const double den = 2.0 * std::sqrt(eps * psi) - eps;
        return lhs - (psi + 1.0) / den;
    };
    double lo = 1e-3, hi = 64.0;
    if (!(residual(lo) < 0.0) || !(residual(hi) > 0.0))
        throw IntegrationError("build_psi_table: seed coefficient not bracketed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    const double c = 0.5 * (lo + hi);

    PsiTable table;
    table.c_ = c;
    table.eps_ = eps;
    table.x_max_ = x_max;

    table.xs_.reserve(n_nodes + 1);
    table.psis_.reserve(n_nodes + 1);
    table.xs_.push_back(0.0);
    table.psis_.push_back(0.0);

    const double t0 = std::log(eps), t1 = std::log(x_max);
    const double dt_node = (t1 - t0) / (n_nodes - 1);
    std::vector<double> log_xs(n_nodes);
    std::vector<double> psis(n_nodes);
    double t = t0;
    double psi = c * std::cbrt(eps);
    log_xs[0] = t0;
    psis[0] = psi;
    for (int i = 1; i < n_nodes; ++i) {
        const double t_next = t0 + i * dt_node;
        psi = integrate_psi(t, psi, t_next, tol);
        t = t_next;
        log_xs[i] = t_next;
        psis[i] = psi;
    }
    for (int i = 0; i < n_nodes; ++i) {
        table.xs_.push_back(std::exp(log_xs[i]));
        table.psis_.push_back(psis[i]);
    }
    for (std::size_t i = 1; i < table.psis_.size(); ++i)
        if (!(table.psis_[i] > table.psis_[i - 1]))
            throw IntegrationError("build_psi_table: table not strictly increasing");

    table.log_interp_ = MonotoneCubic(std::move(log_xs), std::move(psis));
    table.end_slope_ = (table.psis_.back() + 1.0) /
                       (2.0 * std::sqrt(x_max * table.psis_.back()) - x_max);
    return table;
}

double PsiTable::operator()(double x) const {
    if (x < 0.0) throw std::domain_error("PsiTable: psi is defined for x >= 0");
    if (x == 0.0) return 0.0;
    if (x < eps_) return c_ * std::cbrt(x);
    if (x > x_max_) return psis_.back() + end_slope_ * (x - x_max_);
    return log_interp_(std::log(x));
}

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

}  // namespace

VolatilitySpec VolatilitySpec::constant(double sigma_hat) {
    require_positive(sigma_hat, "sigma_hat");
    return VolatilitySpec(ConstantVol{sigma_hat});
}

VolatilitySpec VolatilitySpec::leland(double sigma_hat, double le) {
    require_positive(sigma_hat, "sigma_hat");
    require_nonnegative(le, "le");
    return VolatilitySpec(LelandVol{sigma_hat, le});
}

VolatilitySpec VolatilitySpec::barles_soner(double sigma_hat, double a, double r) {
    static const auto shared_default =
        std::make_shared<const PsiTable>(build_psi_table());
    return barles_soner(sigma_hat, a, r, shared_default);
}

VolatilitySpec VolatilitySpec::barles_soner(double sigma_hat, double a, double r,
                                            std::shared_ptr<const PsiTable> psi) {
    require_positive(sigma_hat, "sigma_hat");
    require_nonnegative(a, "a");
    if (!psi) throw std::invalid_argument("barles_soner: psi table required");
    return VolatilitySpec(BarlesSonerVol{sigma_hat, a, r, std::move(psi)});
}

VolatilitySpec VolatilitySpec::frey_stremme(double sigma_hat, double rho_f, double lambda0) {
    require_positive(sigma_hat, "sigma_hat");
    require_nonnegative(rho_f, "rho_f");
    if (!(lambda0 >= 1.0)) throw std::invalid_argument("lambda0 must be >= 1");
    return VolatilitySpec(FreyStremmeVol{sigma_hat, rho_f, lambda0});
}

VolatilitySpec VolatilitySpec::rapm(double sigma_hat, double mu) {
    require_positive(sigma_hat, "sigma_hat");
    require_nonnegative(mu, "mu");
    return VolatilitySpec(RapmVol{sigma_hat, mu});
}

double VolatilitySpec::sigma_hat() const {
    return std::visit([](const auto& m) { return m.sigma_hat; }, model_);
}

std::string_view VolatilitySpec::model_name() const {
    struct Namer {
        std::string_view operator()(const ConstantVol&) const { return "constant"; }
        std::string_view operator()(const LelandVol&) const { return "leland"; }
        std::string_view operator()(const BarlesSonerVol&) const { return "barles-soner"; }
        std::string_view operator()(const FreyStremmeVol&) const { return "frey-stremme"; }
        std::string_view operator()(const RapmVol&) const { return "rapm"; }
    };
    return std::visit(Namer{}, model_);
}

namespace detail {

double sigma2_eval(const ConstantVol& m, double p, double, double) {
    (void)p;
    return m.sigma_hat * m.sigma_hat;
}

double sigma2_eval(const LelandVol& m, double p, double, double) {
    const double sgn = (p > 0.0) - (p < 0.0);
    return m.sigma_hat * m.sigma_hat * (1.0 + m.le * sgn);
}

double sigma2_eval(const BarlesSonerVol& m, double p, double, double tau) {
    const double arg = m.a * m.a * std::exp(m.r * tau) * p;
    if (arg < 0.0)
        throw std::domain_error("barles-soner: negative psi argument (p < 0)");
    return m.sigma_hat * m.sigma_hat * (1.0 + (*m.psi)(arg));
}

double sigma2_eval(const FreyStremmeVol& m, double p, double xi, double) {
    const double den = 1.0 - m.rho_f * m.lambda0 * p / xi;
    if (std::abs(den) < 1e-12)
        throw SingularVolatilityError("frey-stremme: 1 - rho lambda p/xi vanishes");
    return m.sigma_hat * m.sigma_hat / (den * den);
}

double sigma2_eval(const RapmVol& m, double p, double xi, double) {
    return m.sigma_hat * m.sigma_hat * (1.0 + m.mu * std::cbrt(p / xi));
}

}  // namespace detail

double sigma_squared(const VolatilitySpec& spec, double p, double xi, double tau) {
    if (!(xi > 0.0)) throw std::domain_error("sigma_squared: xi must be positive");
    if (!(tau >= 0.0)) throw std::domain_error("sigma_squared: tau must be nonnegative");
    return std::visit([&](const auto& m) { return detail::sigma2_eval(m, p, xi, tau); },
                      spec.model());
}

double rapm_mu(double cost, double risk_premium) {
    require_nonnegative(cost, "cost");
    require_nonnegative(risk_premium, "risk_premium");
    return 3.0 * std::cbrt(cost * cost * risk_premium / (2.0 * std::numbers::pi));
}

double leland_constant(double cost, double sigma_hat, double dt) {
    require_nonnegative(cost, "cost");
    require_positive(sigma_hat, "sigma_hat");
    require_positive(dt, "dt");
    return std::sqrt(2.0 / std::numbers::pi) * cost / (sigma_hat * std::sqrt(dt));
}

double parabolicity_margin(const VolatilitySpec& spec, double p_lo, double p_hi, double xi,
                           double tau, int samples) {
    if (!(p_hi >= p_lo)) throw std::invalid_argument("parabolicity_margin: empty p range");
    if (samples < 1) throw std::invalid_argument("parabolicity_margin: need >= 1 sample");
    double margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const double p =
            (samples == 1) ? p_lo : p_lo + (p_hi - p_lo) * s / static_cast<double>(samples - 1);
        const double step = 1e-6 * std::max(std::abs(p), 1.0);
        const double lo = std::max(p - step, p_lo);
        const double hi = std::min(p + step, p_hi);
        const double s2 = sigma_squared(spec, p, xi, tau);
        double dp = 0.0;
        if (hi > lo)
            dp = (sigma_squared(spec, hi, xi, tau) - sigma_squared(spec, lo, xi, tau)) / (hi - lo);
        margin = std::min(margin, s2 + p * dp);
    }
    return margin;
}

}  // namespace exbound
