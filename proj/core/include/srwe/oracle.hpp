#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "srwe/game.hpp"
#include "srwe/robust.hpp"

namespace srwe {

/// Finitely supported distribution over the aggregate support box.
struct DiscreteDistribution {
    std::vector<Vector> atoms;
    Vector weights;

    void validate(const AggregateSpace& support) const;
};

/// W_p(mu, dirac(sigma)) = (sum_j w_j ||a_j - sigma||^p)^(1/p); the coupling
/// is forced when one marginal is a Dirac.
double wasserstein_to_dirac(const DiscreteDistribution& mu, const Vector& sigma, int p);

struct GridWorstCase {
    double value = 0.0;
    DiscreteDistribution mu;
    bool grid_too_coarse = false;
};

/// Brute-force worst-case expected cost over grid-supported distributions
/// with W_p(mu, dirac(sigma)) <= epsilon, n <= 2 only.
///
/// One moment constraint plus normalization means an optimal distribution
/// needs at most two atoms; atoms dominated in (distance^p, cost) by another
/// grid point can never appear in an optimal pair, so enumeration runs over
/// the non-dominated frontier. For each pair the weight comes from making the
/// constraint tight (clamped to [0, 1]) or from the feasible endpoints.
///
/// If no grid atom is feasible (radius below the distance to the nearest grid
/// point), the nominal value is returned with grid_too_coarse set.
GridWorstCase grid_two_point_worst_case(const Vector& x, const Vector& sigma,
                                        const RobustnessParams& params,
                                        const AffinePriceCost& cost, int grid_points_per_dim);

struct BestResponsePoint {
    Vector x;
    double value = 0.0;
};

/// Grids the action box (n <= 2), projects every grid point onto the budget
/// polytope, scores it with robust_cost, and returns the argmin. With
/// epsilon = 0 this grids the nominal cost.
BestResponsePoint brute_force_best_response(const PlayerClass& cls, const Vector& sigma,
                                            const RobustnessParams& params,
                                            int grid_points_per_dim);

struct FiniteDiffReport {
    double max_rel_error = 0.0;
    double h = 0.0;
};

/// Central finite differences of f at `point` against the provided analytic
/// gradient; h defaults to 1e-6 * (1 + ||point||). Relative error per
/// coordinate is |fd - g| / max(1, |g|).
FiniteDiffReport finite_difference_check(const std::function<double(const Vector&)>& f,
                                         const Vector& analytic_gradient, const Vector& point,
                                         double h = -1.0);

struct DanskinCheck {
    double max_rel_error = 0.0;
    bool skipped = false;  // the inner maximizer sits at a clip boundary (kink)
};

struct DualOracleBattery {
    int instances = 100;
    std::uint64_t seed = 7;
    int grid_points = 201;
};

struct DualOracleOutcome {
    int instances = 0;
    int failures = 0;
    double worst_abs_gap = 0.0;    // largest |dual - grid| seen
    double worst_duality_violation = 0.0;  // largest grid - dual (weak duality says <= 0)
    std::string first_failure;
};

/// Seeded random-instance sweep (n in {1, 2}, p = 2, signed prices) comparing
/// the dual evaluation against the grid oracle. An instance fails when
/// |dual - grid| exceeds max(1e-3, Lipschitz * grid cell diagonal), when the
/// grid value exceeds the dual by more than 1e-9, or when the returned
/// worst-case distribution is infeasible.
DualOracleOutcome run_dual_oracle_battery(const DualOracleBattery& battery);

/// Compares the envelope gradient of augmented_cost in (x, lambda) against
/// central finite differences. Points whose inner maximizer lies within
/// `kink_margin` of a support-box bound (or with lambda near 0) are skipped:
/// the envelope formula needs a locally unique, locally smooth maximizer.
DanskinCheck danskin_check(const Vector& x, double lambda, const Vector& sigma,
                           const RobustnessParams& params, const AffinePriceCost& cost,
                           double kink_margin = 1e-4);

}  // namespace srwe
