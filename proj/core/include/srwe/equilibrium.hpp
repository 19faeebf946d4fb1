#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "srwe/game.hpp"
#include "srwe/robust.hpp"

namespace srwe {

/// Per-class state of the augmented game: an action plus the boxed dual
/// multiplier (cap = M for the class at the current robustness level).
struct ClassState {
    Vector x;
    DualVariable dual;
};

struct AugmentedProfile {
    std::vector<ClassState> states;
    Vector sigma;

    StrategyProfile strategy() const;
};

enum class InitScheme {
    kUniform,  // budget spread evenly over hours with positive cap, then projected
    kZero,     // projection of the origin
    kGiven,    // caller-provided class actions
};

struct SolverOptions {
    double rho = 1.0;        // proximal step size
    int max_iter = 500;      // outer fixed-point iterations
    double tol_fix = 1e-6;   // sup-norm residual on (x, lambda) across one sweep
    double tol_sub = 1e-8;   // projected-gradient residual for each subproblem
    InitScheme init = InitScheme::kUniform;
    std::vector<Vector> initial_actions;  // used when init == kGiven
    int subproblem_max_iter = 20000;
    double verify_tol = 1e-4;  // relative best-response gap accepted by certification
};

struct SolveReport {
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    Vector class_gaps;   // filled by certification after a converged solve
    Vector class_costs;
    bool certified = false;
    double wall_time_s = 0.0;
    int subproblem_failures = 0;
    double worst_subproblem_residual = 0.0;
};

struct ProximalStepResult {
    Vector x;
    double lambda = 0.0;
    bool inner_converged = true;
    int inner_iterations = 0;
    double inner_residual = 0.0;
};

/// One proximal best response: argmin over X x [0, cap] of
///   augmented_cost((x, lambda), sigma_t) + ||(x, lambda) - (x_t, lambda_t)||^2 / (2 rho),
/// solved by projected gradient with backtracking on the envelope gradients
/// until the projected-gradient residual drops below opts.tol_sub. With
/// epsilon = 0 the lambda coordinate is dropped, the cost is nominal, and the
/// step has the closed form project(x_t - rho * (alpha .* sigma + beta)).
///
/// Failure to reach tol_sub within the iteration cap is reported in the
/// result, never silently swallowed.
ProximalStepResult proximal_step(const PlayerClass& cls, const Vector& x_t, double lambda_t,
                                 double lambda_cap, const Vector& sigma_t,
                                 const RobustnessParams& params, const SolverOptions& opts);

struct VerifyResult {
    Vector gaps;   // per class: cost at the profile minus best achievable cost
    Vector costs;  // per class: worst-case cost at the profile
    bool certified = false;
};

/// Best-response gaps under the Wardrop convention: the aggregate stays fixed
/// while one class deviates. gap_c = robust_cost(x_c, sigma) - min over x' of
/// robust_cost(x', sigma). The inner minimization runs jointly over (x',
/// lambda) with multiple deterministic starts (uniform, projected zero, the
/// current action, and the greedy response to nominal prices); with
/// epsilon = 0 it reduces to an exact greedy solve of the linear program.
/// Certification accepts gap_c <= tol * (1 + |cost_c|). A failed inner solve
/// reports the gap as +infinity.
VerifyResult verify_equilibrium(const StrategyProfile& profile, const GameInstance& game,
                                const RobustnessParams& params, double tol);

/// Synchronous proximal best-response iteration on the augmented game: every
/// class steps against the shared aggregate, then the aggregate is recomputed.
/// Stops when the sup-norm change of all (x, lambda) blocks falls below
/// tol_fix, or at max_iter with converged = false. Converged profiles are
/// certified via verify_equilibrium and carry their gaps in the report.
/// epsilon = 0 delegates to solve_wardrop (the augmented game needs
/// epsilon > 0).
std::pair<AugmentedProfile, SolveReport> solve_srwe(const GameInstance& game,
                                                    const RobustnessParams& params,
                                                    const SolverOptions& opts);

/// Nominal-cost version of the same scheme (no dual coordinate).
std::pair<StrategyProfile, SolveReport> solve_wardrop(const GameInstance& game,
                                                      const SolverOptions& opts);

/// Social cost sum_k p_k(sigma_k) (sigma_k + d_k) with prices and base demand
/// read from the first class (all classes are assumed to share pricing).
double social_cost(const Vector& sigma, const GameInstance& game);

struct SocialOptimum {
    Vector sigma;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Minimizes social_cost over the reachable aggregates
/// { (1/N) sum_i x^i : x^i feasible } by projected gradient on per-class
/// actions; convex whenever prices are affine nondecreasing.
SocialOptimum solve_social_optimum(const GameInstance& game);

struct PoaResult {
    double value = 0.0;
    double equilibrium_social_cost = 0.0;
    double optimal_social_cost = 0.0;
    bool converged = false;  // both the equilibrium solve and the optimum converged
    SolveReport report;
};

/// social_cost at the (strategically robust) equilibrium divided by the
/// optimal social cost. Non-convergence of either solve is propagated through
/// the converged flag.
PoaResult price_of_anarchy(const GameInstance& game, const RobustnessParams& params,
                           const SolverOptions& opts);

/// Exact minimizer of a nonneg-price linear cost over the box-budget polytope:
/// caps out negative-price hours, then fills the cheapest hours (lowest index
/// on ties) until the budget is met.
Vector greedy_linear_response(const ActionSpace& space, const Vector& prices);

}  // namespace srwe
