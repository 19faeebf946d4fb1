#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "srwe/numeric.hpp"

namespace srwe {

/// Box-plus-budget action polytope {x : 0 <= x_k <= upper_k, sum_k x_k >= budget}.
/// Non-empty iff sum(upper) >= budget; always compact and convex.
struct ActionSpace {
    Vector upper;         // per-period caps, all >= 0
    double budget = 0.0;  // minimum total action

    std::size_t dimension() const { return upper.size(); }
    double cap_sum() const;
    bool feasible() const { return cap_sum() >= budget; }
    bool contains(const Vector& x, double tol = 1e-9) const;
};

/// Per-period affine price p_k(s) = alpha_k * s + beta_k, with the player cost
/// J(x, sigma) = sum_k x_k * p_k(sigma_k). Linear in x, linear (hence concave)
/// in sigma. base_demand and capacity are kept for social-cost evaluation and
/// reporting; when prices come from a capacity model, alpha_k = 1/capacity_k
/// and beta_k = base_demand_k / capacity_k.
struct AffinePriceCost {
    Vector alpha;
    Vector beta;
    Vector base_demand;
    Vector capacity;

    std::size_t dimension() const { return alpha.size(); }
    double price(std::size_t k, double sigma_k) const { return alpha[k] * sigma_k + beta[k]; }

    /// Builds prices p_k(s) = (s + base_demand_k) / capacity_k.
    static AffinePriceCost from_pricing(Vector capacity, Vector base_demand);
    /// Direct alpha/beta prices with zero base demand and unit capacity.
    static AffinePriceCost from_coefficients(Vector alpha, Vector beta);
};

/// A group of `count` identical players sharing one action space and cost.
struct PlayerClass {
    ActionSpace space;
    AffinePriceCost cost;
    int count = 1;
};

/// Box [0, sigma_max]^n believed to contain every reachable aggregate.
struct AggregateSpace {
    double sigma_max = 0.0;
    std::size_t dimension = 0;

    double diameter() const { return sigma_max * std::sqrt(static_cast<double>(dimension)); }
    bool contains(const Vector& sigma, double tol = 1e-9) const;
};

struct GameInstance {
    std::vector<PlayerClass> classes;
    AggregateSpace support;

    int total_players() const;
    std::size_t dimension() const;
};

/// One action vector per class plus the cached population aggregate.
/// Members of a class share the class action by construction.
struct StrategyProfile {
    std::vector<Vector> actions;
    Vector sigma;
};

/// Mean aggregate sigma_k = (1/N) sum_i x_k^i with class actions expanded by
/// multiplicity.
Vector aggregate(const std::vector<Vector>& class_actions, const GameInstance& game);

/// Builds a profile with a consistent cached aggregate. Throws if any class
/// action is infeasible for its space.
StrategyProfile make_profile(const GameInstance& game, std::vector<Vector> class_actions);

/// J(x, sigma) = sum_k x_k (alpha_k sigma_k + beta_k).
double nominal_cost(const Vector& x, const Vector& sigma, const AffinePriceCost& cost);

/// Euclidean projection onto {0 <= x <= upper, sum x >= budget}.
///
/// If the box clip of y already meets the budget it is the projection.
/// Otherwise the budget constraint is active and the projection is
/// x_k = clip(y_k + nu, 0, upper_k) for the unique shift nu > 0 that makes
/// the budget tight; nu is found by bisection to 1e-12.
Vector project_action(const ActionSpace& space, const Vector& y);

struct ValidationIssue {
    std::string check;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> failures;
    bool passed() const { return failures.empty(); }
    std::string summary() const;
};

/// Diagnostic pass over the standing assumptions: non-empty action polytopes,
/// positive capacities, finite nonnegative caps, and a support box wide enough
/// to contain every reachable aggregate (sigma_max >= max cap).
ValidationReport validate_game(const GameInstance& game);

}  // namespace srwe
