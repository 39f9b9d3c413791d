#include "exbound/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "exbound/config.hpp"
#include "exbound/errors.hpp"
#include "exbound/io.hpp"

namespace exbound {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Timings {
    std::map<std::string, double> seconds;

    template <class F>
    auto timed(const std::string& name, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            seconds[name] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                                 .count();
        } else {
            auto result = f();
            seconds[name] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                                 .count();
            return result;
        }
    }
};

std::string timestamp_dir(const std::string& subcommand) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm_utc);
    return "out/" + subcommand + "-" + buf;
}

void write_file(const fs::path& dir, const std::string& name, const std::string& contents,
                json& index) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + (dir / name).string() + " for writing");
    os << contents;
    index[name.substr(0, name.find('.'))] = name;
}

template <class Writer>
std::string render_csv(Writer&& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

IntegralGrid benchmark_grid(const RunConfig& cfg) {
    if (cfg.benchmark.tau_grid == "graded")
        return IntegralGrid::graded(cfg.market.maturity, cfg.benchmark.m_taus, 2.0,
                                    cfg.benchmark.quad_nodes_per_panel);
    return IntegralGrid::uniform(cfg.market.maturity, cfg.benchmark.m_taus,
                                 cfg.benchmark.quad_nodes_per_panel);
}

int report_stride(const Grid& grid, const SolverControls& controls) {
    return controls.store_every > 0 ? controls.store_every : std::max(1, grid.m_time / 100);
}

void run_solve(const RunConfig& cfg, const fs::path& dir, Timings& timings, json& index, int) {
    SolveResult result =
        timings.timed("solve", [&] { return solve(cfg.market, cfg.model, cfg.grid, cfg.controls); });
    write_file(dir, "boundary.csv",
               render_csv([&](std::ostream& os) { write_boundary_csv(os, result.boundary); }),
               index);
    write_file(dir, "pi_snapshots.csv",
               render_csv([&](std::ostream& os) {
                   write_snapshots_csv(os, result.snapshots, cfg.grid);
               }),
               index);
    write_file(dir, "report.csv",
               render_csv([&](std::ostream& os) {
                   write_report_csv(os, result.report, cfg.grid.time_step(cfg.market),
                                    report_stride(cfg.grid, cfg.controls));
               }),
               index);
}

void run_benchmark(const RunConfig& cfg, const fs::path& dir, Timings& timings, json& index, int) {
    const double sigma_hat = cfg.model.sigma_hat();
    SolveResult fd = timings.timed("solve", [&] {
        return solve(cfg.market, VolatilitySpec::constant(sigma_hat), cfg.grid, cfg.controls);
    });
    BoundaryCurve ie = timings.timed("integral", [&] {
        return solve_integral_equation(cfg.market, sigma_hat, benchmark_grid(cfg),
                                       cfg.benchmark.tol, cfg.benchmark.max_iter,
                                       cfg.benchmark.damping);
    });
    const DistanceReport dist = curve_distance(fd.boundary, ie);
    double sup_rel = 0.0;
    {
        const SampledBoundary ref(ie);
        for (std::size_t j = 0; j < fd.boundary.taus.size(); ++j) {
            const double r = ref(fd.boundary.taus[j]);
            sup_rel = std::max(sup_rel, std::abs(fd.boundary.rhos[j] - r) / r);
        }
    }
    const double end_gap =
        std::abs(fd.boundary.rhos.back() - ie.rhos.back()) / ie.rhos.back();

    write_file(dir, "boundary_fd.csv",
               render_csv([&](std::ostream& os) { write_boundary_csv(os, fd.boundary); }), index);
    write_file(dir, "boundary_integral.csv",
               render_csv([&](std::ostream& os) { write_boundary_csv(os, ie); }), index);
    std::ostringstream os;
    os << "metric,value\n";
    os << "rho_end_fd," << format_double(fd.boundary.rhos.back()) << '\n';
    os << "rho_end_integral," << format_double(ie.rhos.back()) << '\n';
    os << "end_gap_relative," << format_double(end_gap) << '\n';
    os << "sup_relative_deviation," << format_double(sup_rel) << '\n';
    os << "dist_linf," << format_double(dist.l_inf) << '\n';
    os << "dist_l2," << format_double(dist.l2_discrete) << '\n';
    write_file(dir, "report.csv", os.str(), index);
}

void run_converge(const RunConfig& cfg, const fs::path& dir, Timings& timings, json& index,
                  int jobs) {
    ConvergenceReport report = timings.timed("converge", [&] {
        return convergence_study(cfg.market, cfg.model.sigma_hat(), cfg.converge.h_list,
                                 cfg.converge.cfl_ratio, cfg.controls, cfg.grid.x_len,
                                 cfg.converge.reference_nodes, jobs);
    });
    write_file(dir, "convergence.csv",
               render_csv([&](std::ostream& os) { write_convergence_csv(os, report); }), index);
    write_file(dir, "boundary_reference.csv",
               render_csv([&](std::ostream& os) { write_boundary_csv(os, report.reference); }),
               index);
    for (std::size_t i = 0; i < report.curves.size(); ++i) {
        std::ostringstream name;
        name << "boundary_h=" << format_double(report.rows[i].h) << ".csv";
        write_file(dir, name.str(),
                   render_csv([&](std::ostream& os) { write_boundary_csv(os, report.curves[i]); }),
                   index);
    }
}

void run_sweep(const RunConfig& cfg, const fs::path& dir, Timings& timings, json& index,
               int jobs) {
    const SweepFamily family = sweep_family_from_string(cfg.sweep.family);
    const auto& params =
        family == SweepFamily::Rapm ? cfg.sweep.r_list : cfg.sweep.a_list;
    SweepReport report = timings.timed("sweep", [&] {
        return parameter_sweep(cfg.market, cfg.grid, cfg.model.sigma_hat(), family, cfg.sweep.cost,
                               params, cfg.controls, jobs);
    });
    write_file(dir, "sweep.csv",
               render_csv([&](std::ostream& os) { write_sweep_csv(os, report); }), index);
    write_file(dir, "boundary_reference.csv",
               render_csv([&](std::ostream& os) { write_boundary_csv(os, report.reference); }),
               index);
    for (std::size_t i = 0; i < report.curves.size(); ++i) {
        std::ostringstream name;
        name << "boundary_param=" << format_double(report.rows[i].param) << ".csv";
        write_file(dir, name.str(),
                   render_csv([&](std::ostream& os) { write_boundary_csv(os, report.curves[i]); }),
                   index);
    }
}

void run_price(const RunConfig& cfg, const fs::path& dir, Timings& timings, json& index, int) {
    if (cfg.price.s_values.empty())
        throw std::invalid_argument("config: price.s_values: must not be empty for 'price'");
    SolveResult result =
        timings.timed("solve", [&] { return solve(cfg.market, cfg.model, cfg.grid, cfg.controls); });
    const PortfolioState& final_state = result.snapshots.back();
    std::ostringstream os;
    os << "s,value,exercised\n";
    for (double s : cfg.price.s_values) {
        const PriceQuote quote = quote_price(final_state, cfg.grid, cfg.market, s);
        os << format_double(s) << ',' << format_double(quote.value) << ','
           << (quote.exercised ? 1 : 0) << '\n';
    }
    write_file(dir, "prices.csv", os.str(), index);
    write_file(dir, "boundary.csv",
               render_csv([&](std::ostream& os2) { write_boundary_csv(os2, result.boundary); }),
               index);
}

}  // namespace

int run_cli(const std::vector<std::string>& argv) {
    CLI::App app{"Early exercise boundary solver for nonlinear Black-Scholes models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    int jobs = 0;

    struct Command {
        const char* name;
        const char* help;
        void (*fn)(const RunConfig&, const fs::path&, Timings&, json&, int);
    };
    const Command commands[] = {
        {"solve", "March the splitting solver and write the boundary curve", run_solve},
        {"benchmark", "Compare the splitting solver with the integral-equation reference",
         run_benchmark},
        {"converge", "Grid refinement study against the integral-equation reference",
         run_converge},
        {"sweep", "Parameter sweep of a nonlinear model against the constant-model boundary",
         run_sweep},
        {"price", "Solve, then reconstruct option prices at query points", run_price},
    };
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--override", overrides, "key.path=value config overrides");
        sub->add_option("--jobs", jobs, "parallel solver runs for converge/sweep");
    }

    std::vector<const char*> cargs;
    cargs.reserve(argv.size());
    for (const auto& a : argv) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    const Command* cmd = nullptr;
    for (const auto& c : commands)
        if (app.got_subcommand(c.name)) cmd = &c;

    try {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "error: cannot read config file '" << config_path << "'\n";
            return 2;
        }
        json doc;
        try {
            doc = json::parse(is);
        } catch (const json::parse_error& e) {
            std::cerr << "error: config parse: " << e.what() << '\n';
            return 2;
        }
        for (const auto& ov : overrides) apply_override(doc, ov);
        const RunConfig cfg = parse_config(doc);

        const fs::path dir = out_dir.empty() ? fs::path(timestamp_dir(cmd->name)) : fs::path(out_dir);
        fs::create_directories(dir);

        Timings timings;
        json index = json::object();
        const auto start = std::chrono::steady_clock::now();
        cmd->fn(cfg, dir, timings, index, jobs);
        timings.seconds["total"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        json manifest{{"config", to_json(cfg)},
                      {"timings", timings.seconds},
                      {"results_index", index},
                      {"version", kVersion}};
        std::ofstream ms(dir / "manifest.json", std::ios::binary);
        ms << manifest.dump(2) << '\n';
        std::cout << dir.string() << '\n';
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NonconvergenceError& e) {
        std::cerr << "error: " << e.what();
        if (e.level >= 0) std::cerr << " (level " << e.level << ")";
        std::cerr << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace exbound
