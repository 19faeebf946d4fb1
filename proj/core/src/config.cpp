#include "srwe/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace srwe {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
}

template <class T>
T get_or(const json& obj, const std::string& path, const std::string& key, T fallback) {
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + path + "." + key + "': " + e.what());
    }
}

Vector get_number_or_array(const json& obj, const std::string& path, const std::string& key,
                           Vector fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (v.is_number())
        return Vector{v.get<double>()};
    if (v.is_array()) {
        try {
            return v.get<Vector>();
        } catch (const json::exception& e) {
            throw ConfigError("bad value for '" + path + "." + key + "': " + e.what());
        }
    }
    throw ConfigError("'" + path + "." + key + "' must be a number or an array of numbers");
}

InitScheme init_from_string(const std::string& s) {
    if (s == "uniform")
        return InitScheme::kUniform;
    if (s == "zero")
        return InitScheme::kZero;
    throw ConfigError("solver.init must be \"uniform\" or \"zero\"");
}

std::string init_to_string(InitScheme s) {
    return s == InitScheme::kZero ? "zero" : "uniform";
}

SolverOptions parse_solver(const json& obj) {
    check_keys(obj, "solver",
               {"rho", "max_iter", "tol_fix", "tol_sub", "init", "subproblem_max_iter",
                "verify_tol"});
    SolverOptions opts;
    opts.rho = get_or(obj, "solver", "rho", opts.rho);
    opts.max_iter = get_or(obj, "solver", "max_iter", opts.max_iter);
    opts.tol_fix = get_or(obj, "solver", "tol_fix", opts.tol_fix);
    opts.tol_sub = get_or(obj, "solver", "tol_sub", opts.tol_sub);
    opts.subproblem_max_iter =
        get_or(obj, "solver", "subproblem_max_iter", opts.subproblem_max_iter);
    opts.verify_tol = get_or(obj, "solver", "verify_tol", opts.verify_tol);
    if (obj.contains("init"))
        opts.init = init_from_string(obj.at("init").get<std::string>());
    if (!(opts.rho > 0.0) || !(opts.tol_fix > 0.0) || !(opts.tol_sub > 0.0))
        throw ConfigError("solver: rho and tolerances must be positive");
    return opts;
}

std::pair<int, int> parse_window(const json& obj, const std::string& path, const std::string& key,
                                 std::pair<int, int> fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2)
        throw ConfigError("'" + path + "." + key + "' must be [start_hour, end_hour]");
    return {v[0].get<int>(), v[1].get<int>()};
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object())
        throw ConfigError(origin + ": configuration must be a JSON object");

    check_keys(root, "", {"seed", "output_dir", "game", "robustness", "solver", "perturbation",
                          "poa"});

    std::vector<std::string> missing;
    for (const char* req : {"seed", "game", "robustness"})
        if (!root.contains(req))
            missing.push_back(req);
    if (!missing.empty()) {
        std::ostringstream os;
        os << origin << ": missing required key(s):";
        for (const auto& m : missing)
            os << " '" << m << "'";
        throw ConfigError(os.str());
    }

    RunConfig cfg;
    cfg.seed = get_or<std::uint64_t>(root, "", "seed", 0);
    cfg.output_dir = get_or<std::string>(root, "", "output_dir", cfg.output_dir);

    const json& game = root.at("game");
    check_keys(game, "game",
               {"horizon", "players", "cap_kw", "window_start_hour", "window_end_hour",
                "budget_kwh", "capacity_kw", "base_demand_kw", "sigma_max"});
    cfg.game.horizon = get_or(game, "game", "horizon", cfg.game.horizon);
    cfg.game.players = get_or(game, "game", "players", cfg.game.players);
    cfg.game.cap_kw = get_or(game, "game", "cap_kw", cfg.game.cap_kw);
    cfg.game.window_start_wall =
        get_or(game, "game", "window_start_hour", cfg.game.window_start_wall);
    cfg.game.window_end_wall = get_or(game, "game", "window_end_hour", cfg.game.window_end_wall);
    cfg.game.budget_kwh = get_or(game, "game", "budget_kwh", cfg.game.budget_kwh);
    cfg.game.capacity_kw = get_number_or_array(game, "game", "capacity_kw", cfg.game.capacity_kw);
    cfg.game.sigma_max = get_or(game, "game", "sigma_max", cfg.game.sigma_max);
    if (game.contains("base_demand_kw")) {
        const json& d = game.at("base_demand_kw");
        if (d.is_string()) {
            if (d.get<std::string>() != "default")
                throw ConfigError("game.base_demand_kw: the only named profile is \"default\"");
            cfg.game.base_demand_kw.clear();
        } else {
            cfg.game.base_demand_kw = get_number_or_array(game, "game", "base_demand_kw", {});
        }
    }

    const json& rob = root.at("robustness");
    check_keys(rob, "robustness", {"epsilons", "p"});
    cfg.game.epsilons = get_or(rob, "robustness", "epsilons", cfg.game.epsilons);
    cfg.game.p = get_or(rob, "robustness", "p", cfg.game.p);
    if (cfg.game.p != 1 && cfg.game.p != 2)
        throw ConfigError("robustness.p must be 1 or 2");

    if (root.contains("solver")) {
        cfg.game.solver = parse_solver(root.at("solver"));
        cfg.poa.solver = cfg.game.solver;
    }

    if (root.contains("perturbation")) {
        const json& pert = root.at("perturbation");
        check_keys(pert, "perturbation",
                   {"magnitudes_kw", "duration_hours", "trials", "histogram_magnitude_kw",
                    "histogram_bin_width"});
        cfg.perturbation.magnitudes_kw =
            get_or(pert, "perturbation", "magnitudes_kw", cfg.perturbation.magnitudes_kw);
        cfg.perturbation.duration_hours =
            get_or(pert, "perturbation", "duration_hours", cfg.perturbation.duration_hours);
        cfg.perturbation.trials = get_or(pert, "perturbation", "trials", cfg.perturbation.trials);
        cfg.perturbation.histogram_magnitude_kw = get_or(
            pert, "perturbation", "histogram_magnitude_kw", cfg.perturbation.histogram_magnitude_kw);
        cfg.perturbation.histogram_bin_width = get_or(pert, "perturbation", "histogram_bin_width",
                                                      cfg.perturbation.histogram_bin_width);
    }
    cfg.perturbation.seed = cfg.seed;  // all randomness flows from the one seed

    if (root.contains("poa")) {
        const json& poa = root.at("poa");
        check_keys(poa, "poa",
                   {"epsilon_grid", "constant_price", "constant_window", "linear_slope",
                    "linear_window", "players", "cap_kw", "budget_kwh", "sigma_max"});
        cfg.poa.epsilon_grid = get_or(poa, "poa", "epsilon_grid", cfg.poa.epsilon_grid);
        cfg.poa.constant_price = get_or(poa, "poa", "constant_price", cfg.poa.constant_price);
        cfg.poa.linear_slope = get_or(poa, "poa", "linear_slope", cfg.poa.linear_slope);
        std::tie(cfg.poa.constant_start_wall, cfg.poa.constant_end_wall) = parse_window(
            poa, "poa", "constant_window", {cfg.poa.constant_start_wall, cfg.poa.constant_end_wall});
        std::tie(cfg.poa.linear_start_wall, cfg.poa.linear_end_wall) = parse_window(
            poa, "poa", "linear_window", {cfg.poa.linear_start_wall, cfg.poa.linear_end_wall});
        cfg.poa.players = get_or(poa, "poa", "players", cfg.poa.players);
        cfg.poa.cap_kw = get_or(poa, "poa", "cap_kw", cfg.poa.cap_kw);
        cfg.poa.budget_kwh = get_or(poa, "poa", "budget_kwh", cfg.poa.budget_kwh);
        cfg.poa.sigma_max = get_or(poa, "poa", "sigma_max", cfg.poa.sigma_max);
    }

    try {
        cfg.game.validate();
        cfg.perturbation.validate();
        cfg.poa.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

std::string write_config(const RunConfig& config) {
    json root;
    root["seed"] = config.seed;
    root["output_dir"] = config.output_dir;

    json game;
    game["horizon"] = config.game.horizon;
    game["players"] = config.game.players;
    game["cap_kw"] = config.game.cap_kw;
    game["window_start_hour"] = config.game.window_start_wall;
    game["window_end_hour"] = config.game.window_end_wall;
    game["budget_kwh"] = config.game.budget_kwh;
    if (config.game.capacity_kw.size() == 1)
        game["capacity_kw"] = config.game.capacity_kw.front();
    else
        game["capacity_kw"] = config.game.capacity_kw;
    if (config.game.base_demand_kw.empty())
        game["base_demand_kw"] = "default";
    else
        game["base_demand_kw"] = config.game.base_demand_kw;
    game["sigma_max"] = config.game.effective_sigma_max();
    root["game"] = std::move(game);

    json rob;
    rob["epsilons"] = config.game.epsilons;
    rob["p"] = config.game.p;
    root["robustness"] = std::move(rob);

    const SolverOptions& s = config.game.solver;
    json solver;
    solver["rho"] = s.rho;
    solver["max_iter"] = s.max_iter;
    solver["tol_fix"] = s.tol_fix;
    solver["tol_sub"] = s.tol_sub;
    solver["init"] = init_to_string(s.init);
    solver["subproblem_max_iter"] = s.subproblem_max_iter;
    solver["verify_tol"] = s.verify_tol;
    root["solver"] = std::move(solver);

    json pert;
    pert["magnitudes_kw"] = config.perturbation.magnitudes_kw;
    pert["duration_hours"] = config.perturbation.duration_hours;
    pert["trials"] = config.perturbation.trials;
    pert["histogram_magnitude_kw"] = config.perturbation.histogram_magnitude_kw;
    pert["histogram_bin_width"] = config.perturbation.histogram_bin_width;
    root["perturbation"] = std::move(pert);

    json poa;
    poa["epsilon_grid"] = config.poa.effective_grid();
    poa["constant_price"] = config.poa.constant_price;
    poa["constant_window"] = json::array({config.poa.constant_start_wall, config.poa.constant_end_wall});
    poa["linear_slope"] = config.poa.linear_slope;
    poa["linear_window"] = json::array({config.poa.linear_start_wall, config.poa.linear_end_wall});
    poa["players"] = config.poa.players;
    poa["cap_kw"] = config.poa.cap_kw;
    poa["budget_kwh"] = config.poa.budget_kwh;
    poa["sigma_max"] = config.poa.effective_sigma_max();
    root["poa"] = std::move(poa);

    return root.dump(2) + "\n";
}

}  // namespace srwe
