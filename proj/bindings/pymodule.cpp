#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exbound/analysis.hpp"
#include "exbound/integral.hpp"
#include "exbound/landau.hpp"
#include "exbound/splitting.hpp"
#include "exbound/volatility.hpp"

namespace py = pybind11;
using namespace exbound;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Early exercise boundary solver for nonlinear Black-Scholes models";

    py::class_<MarketParams>(m, "MarketParams")
        .def(py::init<double, double, double, double>(), py::arg("strike"), py::arg("rate"),
             py::arg("dividend_yield"), py::arg("maturity"))
        .def_readonly("strike", &MarketParams::strike)
        .def_readonly("rate", &MarketParams::rate)
        .def_readonly("dividend_yield", &MarketParams::dividend_yield)
        .def_readonly("maturity", &MarketParams::maturity)
        .def("initial_boundary", &MarketParams::initial_boundary);

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, int, int>(), py::arg("x_len"), py::arg("n_space"),
             py::arg("m_time"))
        .def_readonly("x_len", &Grid::x_len)
        .def_readonly("n_space", &Grid::n_space)
        .def_readonly("m_time", &Grid::m_time)
        .def("h", &Grid::h);

    py::class_<SolverControls>(m, "SolverControls")
        .def(py::init<>())
        .def_readwrite("micro_tol", &SolverControls::micro_tol)
        .def_readwrite("max_micro", &SolverControls::max_micro)
        .def_readwrite("store_every", &SolverControls::store_every)
        .def_readwrite("relaxation", &SolverControls::relaxation);

    py::class_<PsiTable, std::shared_ptr<PsiTable>>(m, "PsiTable")
        .def("__call__", &PsiTable::operator())
        .def("origin_coefficient", &PsiTable::origin_coefficient)
        .def("x_max", &PsiTable::x_max);
    m.def("build_psi_table", &build_psi_table, py::arg("eps") = 1e-8, py::arg("x_max") = 1e6,
          py::arg("n_nodes") = 800, py::arg("tol") = 1e-10);

    py::class_<VolatilitySpec>(m, "VolatilitySpec")
        .def_static("constant", &VolatilitySpec::constant, py::arg("sigma_hat"))
        .def_static("leland", &VolatilitySpec::leland, py::arg("sigma_hat"), py::arg("le"))
        .def_static("barles_soner",
                    py::overload_cast<double, double, double>(&VolatilitySpec::barles_soner),
                    py::arg("sigma_hat"), py::arg("a"), py::arg("rate"))
        .def_static("frey_stremme", &VolatilitySpec::frey_stremme, py::arg("sigma_hat"),
                    py::arg("rho_f"), py::arg("lambda0"))
        .def_static("rapm", &VolatilitySpec::rapm, py::arg("sigma_hat"), py::arg("mu"))
        .def_property_readonly("sigma_hat", &VolatilitySpec::sigma_hat)
        .def_property_readonly("model_name",
                               [](const VolatilitySpec& s) { return std::string(s.model_name()); });

    m.def("sigma_squared", &sigma_squared, py::arg("spec"), py::arg("p"), py::arg("xi"),
          py::arg("tau"));
    m.def("rapm_mu", &rapm_mu, py::arg("cost"), py::arg("risk_premium"));
    m.def("leland_constant", &leland_constant, py::arg("cost"), py::arg("sigma_hat"),
          py::arg("dt"));
    m.def("parabolicity_margin", &parabolicity_margin, py::arg("spec"), py::arg("p_lo"),
          py::arg("p_hi"), py::arg("xi"), py::arg("tau"), py::arg("samples") = 129);

    py::class_<PortfolioState>(m, "PortfolioState")
        .def_readonly("pi", &PortfolioState::pi)
        .def_readonly("rho", &PortfolioState::rho)
        .def_readonly("level", &PortfolioState::level)
        .def_readonly("tau", &PortfolioState::tau);

    py::class_<BoundaryCurve>(m, "BoundaryCurve")
        .def_readonly("taus", &BoundaryCurve::taus)
        .def_readonly("rhos", &BoundaryCurve::rhos)
        .def_readonly("model", &BoundaryCurve::model)
        .def_readonly("market", &BoundaryCurve::market);

    m.def("initial_state", &initial_state, py::arg("market"), py::arg("grid"));
    m.def("to_asset_price", &to_asset_price, py::arg("x"), py::arg("rho"));
    m.def("reconstruct_price", &reconstruct_price, py::arg("state"), py::arg("grid"),
          py::arg("market"), py::arg("s_query"));

    py::class_<LevelStats>(m, "LevelStats")
        .def_readonly("micro_iters", &LevelStats::micro_iters)
        .def_readonly("residual", &LevelStats::residual)
        .def_readonly("resub_residual", &LevelStats::resub_residual)
        .def_readonly("boundary_slope", &LevelStats::boundary_slope);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("micro_counts", &SolveReport::micro_counts)
        .def_readonly("residuals", &SolveReport::residuals)
        .def_readonly("resub_residuals", &SolveReport::resub_residuals)
        .def_readonly("min_parabolicity", &SolveReport::min_parabolicity)
        .def_readonly("min_boundary_slope", &SolveReport::min_boundary_slope)
        .def_readonly("max_pi_overshoot", &SolveReport::max_pi_overshoot)
        .def_readonly("max_rho_decrease", &SolveReport::max_rho_decrease)
        .def_readonly("transport_overflow_count", &SolveReport::transport_overflow_count)
        .def_readonly("suspicious_rho_count", &SolveReport::suspicious_rho_count)
        .def_readonly("wall_seconds", &SolveReport::wall_seconds);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("boundary", &SolveResult::boundary)
        .def_readonly("snapshots", &SolveResult::snapshots)
        .def_readonly("report", &SolveResult::report);

    m.def("solve", &solve, py::arg("market"), py::arg("spec"), py::arg("grid"),
          py::arg("controls") = SolverControls{},
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "solve_integral_equation",
        [](const MarketParams& market, double sigma_hat, int m_taus, int quad_nodes_per_panel,
           double tol, int max_iter, double damping) {
            return solve_integral_equation(
                market, sigma_hat,
                IntegralGrid::uniform(market.maturity, m_taus, quad_nodes_per_panel), tol,
                max_iter, damping);
        },
        py::arg("market"), py::arg("sigma_hat"), py::arg("m_taus") = 200,
        py::arg("quad_nodes_per_panel") = 12, py::arg("tol") = 1e-9, py::arg("max_iter") = 400,
        py::arg("damping") = 1.0, py::call_guard<py::gil_scoped_release>());

    py::class_<DistanceReport>(m, "DistanceReport")
        .def_readonly("l_inf", &DistanceReport::l_inf)
        .def_readonly("l2_continuous", &DistanceReport::l2_continuous)
        .def_readonly("l2_discrete", &DistanceReport::l2_discrete);

    m.def("curve_distance", &curve_distance, py::arg("a"), py::arg("b"));
    m.def(
        "eoc",
        [](const std::vector<double>& hs, const std::vector<double>& errs) {
            return eoc(hs, errs);
        },
        py::arg("hs"), py::arg("errs"));
    m.def(
        "param_order",
        [](const std::vector<double>& params, const std::vector<double>& dists) {
            return param_order(params, dists);
        },
        py::arg("params"), py::arg("dists"));
    m.def(
        "loglog_slope",
        [](const std::vector<double>& params, const std::vector<double>& dists) {
            return loglog_slope(params, dists);
        },
        py::arg("params"), py::arg("dists"));
}
