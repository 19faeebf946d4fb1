#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "srwe/equilibrium.hpp"
#include "srwe/game.hpp"
#include "srwe/robust.hpp"

namespace srwe {

/// Horizon indexing: hour 0 is noon, hour 12 is midnight. Windows are given
/// in wall-clock hours, half-open [start, end), wrapping past midnight.
int wall_to_index(int wall_hour);
int index_to_wall(int index);
bool wall_in_window(int wall_hour, int start, int end);

/// The charging case study: homogeneous EVs pick a 24-hour charging profile
/// under a per-hour cap on an availability window and a total-energy budget,
/// priced at (sigma_k + d_k) / kappa_k.
struct EvChargingConfig {
    int horizon = 24;
    int players = 100;
    double cap_kw = 2.0;
    int window_start_wall = 17;  // charging allowed from 5pm...
    int window_end_wall = 10;    // ...up to (not including) 10am
    double budget_kwh = 9.0;
    Vector capacity_kw{1.0};   // size 1 broadcasts to the horizon
    Vector base_demand_kw;     // empty selects the shipped default profile
    double sigma_max = -1.0;   // non-positive selects 2 * cap_kw
    std::vector<double> epsilons{0.0, 2.0, 4.0};
    int p = 2;
    SolverOptions solver;

    void validate() const;
    double effective_sigma_max() const { return sigma_max > 0.0 ? sigma_max : 2.0 * cap_kw; }
};

GameInstance build_ev_charging(const EvChargingConfig& cfg);
RobustnessParams robustness_for(const EvChargingConfig& cfg, double epsilon);

/// Shipped 24-hour non-EV demand profile, loaded from the data file (env
/// SRWE_DATA_DIR overrides the compiled-in location).
Vector default_demand_profile();
Vector load_demand_profile(const std::filesystem::path& path);

struct ValleyFillingResult {
    std::vector<double> epsilons;      // converged runs, in input order
    std::vector<Vector> ev_aggregate;  // per-hour sigma for each converged epsilon
    std::vector<SolveReport> reports;
    Vector base_demand;
    std::vector<double> failed_epsilons;
};

/// Solves the charging game for every configured robustness level (the
/// nominal game at epsilon = 0) and tabulates the per-hour EV aggregate.
/// Non-converged levels are dropped from the table and flagged.
ValleyFillingResult run_valley_filling(const EvChargingConfig& cfg);

struct PerturbationConfig {
    std::vector<double> magnitudes_kw{1.0, 2.0, 4.0};
    int duration_hours = 2;
    int trials = 200;
    std::uint64_t seed = 0;
    double histogram_magnitude_kw = 2.0;
    double histogram_bin_width = 1.0;

    void validate() const;
};

struct EquilibriumSet {
    std::vector<double> epsilons;
    std::vector<StrategyProfile> profiles;
};

struct PerturbationStats {
    std::vector<double> epsilons;
    std::vector<double> magnitudes;
    // Indexed [epsilon][magnitude]; statistics over trials x players.
    std::vector<std::vector<double>> min_cost;
    std::vector<std::vector<double>> avg_cost;
    std::vector<std::vector<double>> max_cost;
    // Histogram of individual realized costs at histogram_magnitude_kw,
    // shared bins across epsilons.
    Vector bin_centers;
    std::vector<Vector> histogram_counts;  // [epsilon][bin]
};

/// Post-hoc robustness study: equilibrium actions are held fixed while the
/// aggregate is bumped by each magnitude over `duration_hours` consecutive
/// hours (wrapping) starting at a seeded uniformly random hour per trial; the
/// realized nominal cost of every player is recorded. Trials share start
/// hours across epsilons and magnitudes so comparisons are paired.
PerturbationStats run_perturbation(const EvChargingConfig& cfg, const EquilibriumSet& equilibria,
                                   const PerturbationConfig& pcfg);

/// Two-window pricing benchmark: a constant price on the evening window, a
/// linear price on the morning window, no base demand, no charging elsewhere.
struct PoaConfig {
    std::vector<double> epsilon_grid;  // empty selects 0, 0.1, ..., 2.0
    double constant_price = 0.15;
    int constant_start_wall = 17;  // constant window [5pm, 2am)
    int constant_end_wall = 2;
    double linear_slope = 0.15;
    int linear_start_wall = 2;  // linear window [2am, 10am)
    int linear_end_wall = 10;
    int horizon = 24;
    int players = 100;
    double cap_kw = 2.0;
    double budget_kwh = 9.0;
    double sigma_max = -1.0;
    SolverOptions solver;

    void validate() const;
    std::vector<double> effective_grid() const;
    double effective_sigma_max() const { return sigma_max > 0.0 ? sigma_max : 2.0 * cap_kw; }
};

GameInstance build_poa_game(const PoaConfig& cfg);

struct PoaSweepResult {
    std::vector<double> epsilons;
    std::vector<double> poa;
    std::vector<double> equilibrium_social_cost;
    std::vector<double> optimal_social_cost;
    std::vector<double> failed_epsilons;
};

PoaSweepResult run_poa(const PoaConfig& cfg);

}  // namespace srwe
