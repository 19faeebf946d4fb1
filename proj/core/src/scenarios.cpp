#include "srwe/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "srwe/util.hpp"

#ifndef SRWE_DATA_DIR_FALLBACK
#define SRWE_DATA_DIR_FALLBACK ""
#endif

namespace srwe {

namespace {

constexpr int kHoursPerDay = 24;

Vector broadcast(const Vector& v, int n, const char* what) {
    if (static_cast<int>(v.size()) == n)
        return v;
    if (v.size() == 1)
        return Vector(static_cast<std::size_t>(n), v.front());
    throw std::invalid_argument(std::string(what) + ": expected 1 or horizon-many values");
}

std::filesystem::path default_demand_path() {
    if (const char* env = std::getenv("SRWE_DATA_DIR"))
        return std::filesystem::path(env) / "default_demand.csv";
    return std::filesystem::path(SRWE_DATA_DIR_FALLBACK) / "default_demand.csv";
}

std::pair<StrategyProfile, SolveReport> solve_for(const GameInstance& game,
                                                  const RobustnessParams& params,
                                                  const SolverOptions& opts) {
    if (params.epsilon == 0.0)
        return solve_wardrop(game, opts);
    auto [profile, report] = solve_srwe(game, params, opts);
    return {profile.strategy(), report};
}

}  // namespace

int wall_to_index(int wall_hour) {
    return ((wall_hour - 12) % kHoursPerDay + kHoursPerDay) % kHoursPerDay;
}

int index_to_wall(int index) {
    return ((index + 12) % kHoursPerDay + kHoursPerDay) % kHoursPerDay;
}

bool wall_in_window(int wall_hour, int start, int end) {
    const int w = ((wall_hour % kHoursPerDay) + kHoursPerDay) % kHoursPerDay;
    if (start == end)
        return true;  // degenerate window covers the whole day
    if (start < end)
        return w >= start && w < end;
    return w >= start || w < end;
}

void EvChargingConfig::validate() const {
    if (horizon != kHoursPerDay)
        throw std::invalid_argument("EvChargingConfig: horizon must be 24 (wall-clock windows)");
    if (players < 1)
        throw std::invalid_argument("EvChargingConfig: players must be >= 1");
    if (cap_kw < 0.0)
        throw std::invalid_argument("EvChargingConfig: cap_kw must be >= 0");
    if (budget_kwh < 0.0)
        throw std::invalid_argument("EvChargingConfig: budget_kwh must be >= 0");
    int window_hours = 0;
    for (int w = 0; w < kHoursPerDay; ++w)
        if (wall_in_window(w, window_start_wall, window_end_wall))
            ++window_hours;
    if (budget_kwh > cap_kw * window_hours)
        throw std::invalid_argument("EvChargingConfig: budget exceeds what the window can deliver");
    for (double e : epsilons)
        if (e < 0.0)
            throw std::invalid_argument("EvChargingConfig: epsilons must be >= 0");
}

GameInstance build_ev_charging(const EvChargingConfig& cfg) {
    cfg.validate();
    const int n = cfg.horizon;
    const Vector kappa = broadcast(cfg.capacity_kw, n, "capacity_kw");
    const Vector demand = cfg.base_demand_kw.empty()
                              ? default_demand_profile()
                              : broadcast(cfg.base_demand_kw, n, "base_demand_kw");

    PlayerClass cls;
    cls.count = cfg.players;
    cls.cost = AffinePriceCost::from_pricing(kappa, demand);
    cls.space.budget = cfg.budget_kwh;
    cls.space.upper.assign(static_cast<std::size_t>(n), 0.0);
    for (int h = 0; h < n; ++h)
        if (wall_in_window(index_to_wall(h), cfg.window_start_wall, cfg.window_end_wall))
            cls.space.upper[static_cast<std::size_t>(h)] = cfg.cap_kw;

    GameInstance game;
    game.support = AggregateSpace{cfg.effective_sigma_max(), static_cast<std::size_t>(n)};
    game.classes.push_back(std::move(cls));
    return game;
}

RobustnessParams robustness_for(const EvChargingConfig& cfg, double epsilon) {
    RobustnessParams params;
    params.epsilon = epsilon;
    params.p = cfg.p;
    params.support = AggregateSpace{cfg.effective_sigma_max(), static_cast<std::size_t>(cfg.horizon)};
    return params;
}

Vector load_demand_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open demand profile: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty demand profile: " + path.string());
    Vector demand(kHoursPerDay, std::nan(""));
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string hour_field, value_field;
        if (!std::getline(row, hour_field, ',') || !std::getline(row, value_field))
            throw std::runtime_error("malformed demand profile row: " + line);
        const int hour = std::stoi(hour_field);
        if (hour < 0 || hour >= kHoursPerDay)
            throw std::runtime_error("demand profile hour out of range: " + hour_field);
        demand[static_cast<std::size_t>(hour)] = std::stod(value_field);
        ++rows;
    }
    if (rows != kHoursPerDay || !all_finite(demand))
        throw std::runtime_error("demand profile must define hours 0..23 exactly once");
    return demand;
}

Vector default_demand_profile() {
    return load_demand_profile(default_demand_path());
}

ValleyFillingResult run_valley_filling(const EvChargingConfig& cfg) {
    const GameInstance game = build_ev_charging(cfg);
    ValleyFillingResult out;
    out.base_demand = game.classes.front().cost.base_demand;
    for (double eps : cfg.epsilons) {
        auto [profile, report] = solve_for(game, robustness_for(cfg, eps), cfg.solver);
        if (!report.converged) {
            out.failed_epsilons.push_back(eps);
            continue;
        }
        out.epsilons.push_back(eps);
        out.ev_aggregate.push_back(std::move(profile.sigma));
        out.reports.push_back(std::move(report));
    }
    return out;
}

void PerturbationConfig::validate() const {
    if (duration_hours < 1)
        throw std::invalid_argument("PerturbationConfig: duration_hours must be >= 1");
    if (trials < 1)
        throw std::invalid_argument("PerturbationConfig: trials must be >= 1");
    if (histogram_bin_width <= 0.0)
        throw std::invalid_argument("PerturbationConfig: histogram_bin_width must be > 0");
    for (double m : magnitudes_kw)
        if (m < 0.0)
            throw std::invalid_argument("PerturbationConfig: magnitudes must be >= 0");
}

PerturbationStats run_perturbation(const EvChargingConfig& cfg, const EquilibriumSet& equilibria,
                                   const PerturbationConfig& pcfg) {
    pcfg.validate();
    if (equilibria.epsilons.size() != equilibria.profiles.size())
        throw std::invalid_argument("run_perturbation: epsilon/profile count mismatch");
    const GameInstance game = build_ev_charging(cfg);
    const std::size_t n_eps = equilibria.epsilons.size();
    const std::size_t n_mag = pcfg.magnitudes_kw.size();
    const std::size_t n_trials = static_cast<std::size_t>(pcfg.trials);

    // One start hour per trial, derived from the seed alone so every
    // (epsilon, magnitude) cell sees the same perturbation sequence.
    std::vector<int> start_hour(n_trials);
    for (std::size_t t = 0; t < n_trials; ++t)
        start_hour[t] = static_cast<int>(splitmix64(pcfg.seed + t) % kHoursPerDay);

    // realized[e][m][t * classes + c] = cost of one member of class c.
    const std::size_t n_classes = game.classes.size();
    std::vector<std::vector<Vector>> realized(
        n_eps, std::vector<Vector>(n_mag, Vector(n_trials * n_classes, 0.0)));

    parallel_for(n_trials, [&](std::size_t t) {
        for (std::size_t e = 0; e < n_eps; ++e) {
            const StrategyProfile& prof = equilibria.profiles[e];
            for (std::size_t m = 0; m < n_mag; ++m) {
                Vector sigma = prof.sigma;
                for (int d = 0; d < pcfg.duration_hours; ++d)
                    sigma[static_cast<std::size_t>((start_hour[t] + d) % kHoursPerDay)] +=
                        pcfg.magnitudes_kw[m];
                for (std::size_t c = 0; c < n_classes; ++c)
                    realized[e][m][t * n_classes + c] =
                        nominal_cost(prof.actions[c], sigma, game.classes[c].cost);
            }
        }
    });

    PerturbationStats stats;
    stats.epsilons = equilibria.epsilons;
    stats.magnitudes = pcfg.magnitudes_kw;
    stats.min_cost.assign(n_eps, std::vector<double>(n_mag, 0.0));
    stats.avg_cost.assign(n_eps, std::vector<double>(n_mag, 0.0));
    stats.max_cost.assign(n_eps, std::vector<double>(n_mag, 0.0));
    for (std::size_t e = 0; e < n_eps; ++e) {
        for (std::size_t m = 0; m < n_mag; ++m) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            double weighted_sum = 0.0;
            double weight = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                for (std::size_t c = 0; c < n_classes; ++c) {
                    const double v = realized[e][m][t * n_classes + c];
                    const double w = static_cast<double>(game.classes[c].count);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    weighted_sum += w * v;
                    weight += w;
                }
            }
            stats.min_cost[e][m] = lo;
            stats.avg_cost[e][m] = weighted_sum / weight;
            stats.max_cost[e][m] = hi;
        }
    }

    // Histogram at the requested magnitude, all epsilons on shared bins.
    const auto hist_mag = std::find(pcfg.magnitudes_kw.begin(), pcfg.magnitudes_kw.end(),
                                    pcfg.histogram_magnitude_kw);
    const std::size_t m_hist =
        hist_mag == pcfg.magnitudes_kw.end()
            ? 0
            : static_cast<std::size_t>(hist_mag - pcfg.magnitudes_kw.begin());
    if (n_eps > 0 && n_mag > 0) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t e = 0; e < n_eps; ++e)
            for (double v : realized[e][m_hist]) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        const double w = pcfg.histogram_bin_width;
        const long first = static_cast<long>(std::floor(lo / w));
        const long last = static_cast<long>(std::floor(hi / w));
        const std::size_t bins = static_cast<std::size_t>(last - first + 1);
        stats.bin_centers.resize(bins);
        for (std::size_t b = 0; b < bins; ++b)
            stats.bin_centers[b] = (static_cast<double>(first + static_cast<long>(b)) + 0.5) * w;
        stats.histogram_counts.assign(n_eps, Vector(bins, 0.0));
        for (std::size_t e = 0; e < n_eps; ++e) {
            for (std::size_t t = 0; t < n_trials; ++t) {
                for (std::size_t c = 0; c < n_classes; ++c) {
                    const double v = realized[e][m_hist][t * n_classes + c];
                    const long bin = static_cast<long>(std::floor(v / w)) - first;
                    stats.histogram_counts[e][static_cast<std::size_t>(bin)] +=
                        static_cast<double>(game.classes[c].count);
                }
            }
        }
    }
    return stats;
}

void PoaConfig::validate() const {
    if (horizon != kHoursPerDay)
        throw std::invalid_argument("PoaConfig: horizon must be 24 (wall-clock windows)");
    if (players < 1)
        throw std::invalid_argument("PoaConfig: players must be >= 1");
    if (constant_price < 0.0 || linear_slope < 0.0)
        throw std::invalid_argument("PoaConfig: prices must be >= 0");
    const auto grid = effective_grid();
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("PoaConfig: epsilon grid must be sorted");
    for (double e : grid)
        if (e < 0.0)
            throw std::invalid_argument("PoaConfig: epsilon grid must be nonnegative");
}

std::vector<double> PoaConfig::effective_grid() const {
    if (!epsilon_grid.empty())
        return epsilon_grid;
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i)
        grid.push_back(static_cast<double>(i) / 10.0);
    return grid;
}

GameInstance build_poa_game(const PoaConfig& cfg) {
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.horizon);
    Vector alpha(n, 0.0), beta(n, 0.0), caps(n, 0.0);
    for (int h = 0; h < cfg.horizon; ++h) {
        const int wall = index_to_wall(h);
        const auto k = static_cast<std::size_t>(h);
        if (wall_in_window(wall, cfg.constant_start_wall, cfg.constant_end_wall)) {
            beta[k] = cfg.constant_price;
            caps[k] = cfg.cap_kw;
        } else if (wall_in_window(wall, cfg.linear_start_wall, cfg.linear_end_wall)) {
            alpha[k] = cfg.linear_slope;
            caps[k] = cfg.cap_kw;
        }
    }
    PlayerClass cls;
    cls.count = cfg.players;
    cls.cost = AffinePriceCost::from_coefficients(std::move(alpha), std::move(beta));
    cls.space.upper = std::move(caps);
    cls.space.budget = cfg.budget_kwh;
    if (!cls.space.feasible())
        throw std::invalid_argument("PoaConfig: budget exceeds what the windows can deliver");

    GameInstance game;
    game.support = AggregateSpace{cfg.effective_sigma_max(), n};
    game.classes.push_back(std::move(cls));
    return game;
}

PoaSweepResult run_poa(const PoaConfig& cfg) {
    const GameInstance game = build_poa_game(cfg);
    PoaSweepResult out;
    for (double eps : cfg.effective_grid()) {
        RobustnessParams params;
        params.epsilon = eps;
        params.p = 2;
        params.support = game.support;
        const PoaResult r = price_of_anarchy(game, params, cfg.solver);
        if (!r.converged) {
            out.failed_epsilons.push_back(eps);
            continue;
        }
        out.epsilons.push_back(eps);
        out.poa.push_back(r.value);
        out.equilibrium_social_cost.push_back(r.equilibrium_social_cost);
        out.optimal_social_cost.push_back(r.optimal_social_cost);
    }
    return out;
}

}  // namespace srwe
