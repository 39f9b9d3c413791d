#include "exbound/config.hpp"

#include <stdexcept>

namespace exbound {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& path, const char* key,
                                    std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(path + "." + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

MarketParams parse_market(const json& doc) {
    const MarketParams defaults{10.0, 0.1, 0.05, 1.0};
    if (!doc.contains("market")) return defaults;
    const json& obj = doc.at("market");
    if (!obj.is_object()) fail("market", "expected an object");
    reject_unknown(obj, "market", {"strike", "rate", "dividend_yield", "maturity"});
    try {
        return MarketParams(get_number(obj, "market", "strike", defaults.strike),
                            get_number(obj, "market", "rate", defaults.rate),
                            get_number(obj, "market", "dividend_yield", defaults.dividend_yield),
                            get_number(obj, "market", "maturity", defaults.maturity));
    } catch (const std::invalid_argument& e) {
        fail("market", e.what());
    }
}

VolatilitySpec parse_model(const json& doc, const MarketParams& market) {
    if (!doc.contains("model")) return VolatilitySpec::constant(0.2);
    const json& obj = doc.at("model");
    if (!obj.is_object()) fail("model", "expected an object");
    const std::string type = get_string(obj, "model", "type", "constant");
    try {
        if (type == "constant") {
            reject_unknown(obj, "model", {"type", "sigma_hat"});
            return VolatilitySpec::constant(get_number(obj, "model", "sigma_hat", 0.2));
        }
        if (type == "leland") {
            reject_unknown(obj, "model", {"type", "sigma_hat", "le"});
            return VolatilitySpec::leland(get_number(obj, "model", "sigma_hat", 0.2),
                                          get_number(obj, "model", "le", 0.0));
        }
        if (type == "barles-soner") {
            reject_unknown(obj, "model", {"type", "sigma_hat", "a", "rate"});
            return VolatilitySpec::barles_soner(get_number(obj, "model", "sigma_hat", 0.2),
                                                get_number(obj, "model", "a", 0.0),
                                                get_number(obj, "model", "rate", market.rate));
        }
        if (type == "frey-stremme") {
            reject_unknown(obj, "model", {"type", "sigma_hat", "rho_f", "lambda0"});
            return VolatilitySpec::frey_stremme(get_number(obj, "model", "sigma_hat", 0.2),
                                                get_number(obj, "model", "rho_f", 0.0),
                                                get_number(obj, "model", "lambda0", 1.0));
        }
        if (type == "rapm") {
            reject_unknown(obj, "model", {"type", "sigma_hat", "mu"});
            return VolatilitySpec::rapm(get_number(obj, "model", "sigma_hat", 0.2),
                                        get_number(obj, "model", "mu", 0.0));
        }
    } catch (const std::invalid_argument& e) {
        fail("model", e.what());
    }
    fail("model.type", "unknown model '" + type + "'");
}

Grid parse_grid(const json& doc) {
    if (!doc.contains("grid")) return Grid(3.0, 750, 225000);
    const json& obj = doc.at("grid");
    if (!obj.is_object()) fail("grid", "expected an object");
    reject_unknown(obj, "grid", {"x_len", "n_space", "m_time"});
    try {
        return Grid(get_number(obj, "grid", "x_len", 3.0), get_int(obj, "grid", "n_space", 750),
                    get_int(obj, "grid", "m_time", 225000));
    } catch (const std::invalid_argument& e) {
        fail("grid", e.what());
    }
}

SolverControls parse_controls(const json& doc) {
    SolverControls controls;
    if (!doc.contains("controls")) return controls;
    const json& obj = doc.at("controls");
    if (!obj.is_object()) fail("controls", "expected an object");
    reject_unknown(obj, "controls", {"micro_tol", "max_micro", "store_every", "relaxation"});
    controls.micro_tol = get_number(obj, "controls", "micro_tol", controls.micro_tol);
    controls.max_micro = get_int(obj, "controls", "max_micro", controls.max_micro);
    controls.store_every = get_int(obj, "controls", "store_every", controls.store_every);
    controls.relaxation = get_number(obj, "controls", "relaxation", controls.relaxation);
    if (!(controls.micro_tol > 0.0)) fail("controls.micro_tol", "must be positive");
    if (controls.max_micro < 1) fail("controls.max_micro", "must be >= 1");
    if (controls.store_every < 0) fail("controls.store_every", "must be >= 0");
    if (!(controls.relaxation > 0.0 && controls.relaxation <= 1.0))
        fail("controls.relaxation", "must lie in (0, 1]");
    return controls;
}

BenchmarkConfig parse_benchmark(const json& doc) {
    BenchmarkConfig bench;
    if (!doc.contains("benchmark")) return bench;
    const json& obj = doc.at("benchmark");
    if (!obj.is_object()) fail("benchmark", "expected an object");
    reject_unknown(obj, "benchmark",
                   {"m_taus", "quad_nodes_per_panel", "tol", "max_iter", "damping", "tau_grid"});
    bench.m_taus = get_int(obj, "benchmark", "m_taus", bench.m_taus);
    bench.quad_nodes_per_panel =
        get_int(obj, "benchmark", "quad_nodes_per_panel", bench.quad_nodes_per_panel);
    bench.tol = get_number(obj, "benchmark", "tol", bench.tol);
    bench.max_iter = get_int(obj, "benchmark", "max_iter", bench.max_iter);
    bench.damping = get_number(obj, "benchmark", "damping", bench.damping);
    bench.tau_grid = get_string(obj, "benchmark", "tau_grid", bench.tau_grid);
    if (bench.m_taus < 1) fail("benchmark.m_taus", "must be >= 1");
    if (bench.quad_nodes_per_panel < 1) fail("benchmark.quad_nodes_per_panel", "must be >= 1");
    if (!(bench.tol > 0.0)) fail("benchmark.tol", "must be positive");
    if (bench.max_iter < 1) fail("benchmark.max_iter", "must be >= 1");
    if (!(bench.damping > 0.0 && bench.damping <= 1.0))
        fail("benchmark.damping", "must lie in (0, 1]");
    if (bench.tau_grid != "uniform" && bench.tau_grid != "graded")
        fail("benchmark.tau_grid", "expected 'uniform' or 'graded'");
    return bench;
}

ConvergeConfig parse_converge(const json& doc) {
    ConvergeConfig conv;
    if (!doc.contains("converge")) return conv;
    const json& obj = doc.at("converge");
    if (!obj.is_object()) fail("converge", "expected an object");
    reject_unknown(obj, "converge", {"h_list", "cfl_ratio", "reference_nodes"});
    conv.h_list = get_number_list(obj, "converge", "h_list", conv.h_list);
    conv.cfl_ratio = get_number(obj, "converge", "cfl_ratio", conv.cfl_ratio);
    conv.reference_nodes = get_int(obj, "converge", "reference_nodes", conv.reference_nodes);
    if (conv.h_list.empty()) fail("converge.h_list", "must not be empty");
    for (std::size_t i = 0; i < conv.h_list.size(); ++i) {
        if (!(conv.h_list[i] > 0.0)) fail("converge.h_list", "entries must be positive");
        if (i > 0 && !(conv.h_list[i] < conv.h_list[i - 1]))
            fail("converge.h_list", "entries must strictly decrease");
    }
    if (!(conv.cfl_ratio > 0.0)) fail("converge.cfl_ratio", "must be positive");
    if (conv.reference_nodes < 2) fail("converge.reference_nodes", "must be >= 2");
    return conv;
}

SweepConfig parse_sweep(const json& doc) {
    SweepConfig sweep;
    if (!doc.contains("sweep")) return sweep;
    const json& obj = doc.at("sweep");
    if (!obj.is_object()) fail("sweep", "expected an object");
    reject_unknown(obj, "sweep", {"family", "cost", "r_list", "a_list"});
    sweep.family = get_string(obj, "sweep", "family", sweep.family);
    sweep.cost = get_number(obj, "sweep", "cost", sweep.cost);
    sweep.r_list = get_number_list(obj, "sweep", "r_list", sweep.r_list);
    sweep.a_list = get_number_list(obj, "sweep", "a_list", sweep.a_list);
    if (sweep.family != "rapm" && sweep.family != "barles-soner")
        fail("sweep.family", "expected 'rapm' or 'barles-soner'");
    if (!(sweep.cost >= 0.0)) fail("sweep.cost", "must be nonnegative");
    for (const auto* list : {&sweep.r_list, &sweep.a_list}) {
        for (std::size_t i = 0; i < list->size(); ++i) {
            if (!((*list)[i] > 0.0)) fail("sweep", "parameter values must be positive");
            if (i > 0 && !((*list)[i] > (*list)[i - 1]))
                fail("sweep", "parameter values must strictly increase");
        }
    }
    return sweep;
}

PriceConfig parse_price(const json& doc) {
    PriceConfig price;
    if (!doc.contains("price")) return price;
    const json& obj = doc.at("price");
    if (!obj.is_object()) fail("price", "expected an object");
    reject_unknown(obj, "price", {"s_values"});
    price.s_values = get_number_list(obj, "price", "s_values", price.s_values);
    for (double s : price.s_values)
        if (!(s > 0.0)) fail("price.s_values", "entries must be positive");
    return price;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown(doc, "",
                   {"market", "model", "grid", "controls", "benchmark", "converge", "sweep",
                    "price"});
    const MarketParams market = parse_market(doc);
    RunConfig cfg{market,
                  parse_model(doc, market),
                  parse_grid(doc),
                  parse_controls(doc),
                  parse_benchmark(doc),
                  parse_converge(doc),
                  parse_sweep(doc),
                  parse_price(doc)};
    try {
        validate_grid(cfg.grid, cfg.market);
    } catch (const std::invalid_argument& e) {
        fail("grid", e.what());
    }
    return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
    json model{{"type", std::string(cfg.model.model_name())},
               {"sigma_hat", cfg.model.sigma_hat()}};
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LelandVol>) {
                model["le"] = m.le;
            } else if constexpr (std::is_same_v<T, BarlesSonerVol>) {
                model["a"] = m.a;
                model["rate"] = m.r;
            } else if constexpr (std::is_same_v<T, FreyStremmeVol>) {
                model["rho_f"] = m.rho_f;
                model["lambda0"] = m.lambda0;
            } else if constexpr (std::is_same_v<T, RapmVol>) {
                model["mu"] = m.mu;
            }
        },
        cfg.model.model());

    return json{
        {"market",
         {{"strike", cfg.market.strike},
          {"rate", cfg.market.rate},
          {"dividend_yield", cfg.market.dividend_yield},
          {"maturity", cfg.market.maturity}}},
        {"model", std::move(model)},
        {"grid",
         {{"x_len", cfg.grid.x_len}, {"n_space", cfg.grid.n_space}, {"m_time", cfg.grid.m_time}}},
        {"controls",
         {{"micro_tol", cfg.controls.micro_tol},
          {"max_micro", cfg.controls.max_micro},
          {"store_every", cfg.controls.store_every},
          {"relaxation", cfg.controls.relaxation}}},
        {"benchmark",
         {{"m_taus", cfg.benchmark.m_taus},
          {"quad_nodes_per_panel", cfg.benchmark.quad_nodes_per_panel},
          {"tol", cfg.benchmark.tol},
          {"max_iter", cfg.benchmark.max_iter},
          {"damping", cfg.benchmark.damping},
          {"tau_grid", cfg.benchmark.tau_grid}}},
        {"converge",
         {{"h_list", cfg.converge.h_list},
          {"cfl_ratio", cfg.converge.cfl_ratio},
          {"reference_nodes", cfg.converge.reference_nodes}}},
        {"sweep",
         {{"family", cfg.sweep.family},
          {"cost", cfg.sweep.cost},
          {"r_list", cfg.sweep.r_list},
          {"a_list", cfg.sweep.a_list}}},
        {"price", {{"s_values", cfg.price.s_values}}}};
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override: expected key.path=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // bare strings are taken verbatim
    }

    json* node = &doc;
    std::size_t begin = 0;
    for (;;) {
        const auto dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot - begin);
        if (key.empty()) throw std::invalid_argument("override: empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        node = &(*node)[key];
        begin = dot + 1;
    }
}

SweepFamily sweep_family_from_string(const std::string& name) {
    if (name == "rapm") return SweepFamily::Rapm;
    if (name == "barles-soner") return SweepFamily::BarlesSoner;
    throw std::invalid_argument("sweep family must be 'rapm' or 'barles-soner'");
}

}  // namespace exbound
