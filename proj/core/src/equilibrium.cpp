#include "srwe/equilibrium.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace srwe {

namespace {

struct PgPoint {
    Vector x;
    double lambda = 0.0;
};

struct PgProblem {
    const PlayerClass* cls = nullptr;
    const RobustnessParams* params = nullptr;
    const Vector* sigma = nullptr;
    double lambda_cap = 0.0;
    // Optional proximal anchor; rho <= 0 disables the proximal term.
    PgPoint anchor;
    double rho = 0.0;

    double value(const PgPoint& z) const {
        double v = augmented_cost(z.x, z.lambda, *sigma, *params, cls->cost);
        if (rho > 0.0) {
            const double dl = z.lambda - anchor.lambda;
            v += (sq_distance2(z.x, anchor.x) + dl * dl) / (2.0 * rho);
        }
        return v;
    }

    PgPoint gradient(const PgPoint& z) const {
        const AugmentedGradient g =
            augmented_cost_gradient(z.x, z.lambda, *sigma, *params, cls->cost);
        PgPoint out{g.dx, g.dlambda};
        if (rho > 0.0) {
            for (std::size_t k = 0; k < out.x.size(); ++k)
                out.x[k] += (z.x[k] - anchor.x[k]) / rho;
            out.lambda += (z.lambda - anchor.lambda) / rho;
        }
        return out;
    }

    PgPoint project(const PgPoint& z) const {
        return {project_action(cls->space, z.x), clip(z.lambda, 0.0, lambda_cap)};
    }
};

PgPoint step(const PgPoint& z, const PgPoint& g, double s) {
    PgPoint out;
    out.x.resize(z.x.size());
    for (std::size_t k = 0; k < z.x.size(); ++k)
        out.x[k] = z.x[k] - s * g.x[k];
    out.lambda = z.lambda - s * g.lambda;
    return out;
}

double pg_distance_sq(const PgPoint& a, const PgPoint& b) {
    const double dl = a.lambda - b.lambda;
    return sq_distance2(a.x, b.x) + dl * dl;
}

double pg_sup_distance(const PgPoint& a, const PgPoint& b) {
    return std::max(sup_distance(a.x, b.x), std::abs(a.lambda - b.lambda));
}

double pg_inner(const PgPoint& a, const PgPoint& b) {
    return dot(a.x, b.x) + a.lambda * b.lambda;
}

struct PgOutcome {
    PgPoint z;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Projected gradient with backtracking on the convex objective of PgProblem.
/// The residual is the sup-norm of the unit-step natural map z - P(z - grad).
PgOutcome minimize_augmented(const PgProblem& prob, PgPoint z0, double tol, int max_iter) {
    PgOutcome out;
    PgPoint z = prob.project(std::move(z0));
    double fz = prob.value(z);
    PgPoint gz = prob.gradient(z);
    double s = 1.0;

    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it;
        out.residual = pg_sup_distance(z, prob.project(step(z, gz, 1.0)));
        if (out.residual <= tol) {
            out.converged = true;
            break;
        }
        // Backtracking: accept z+ once the prox-gradient decrease condition
        // f(z+) <= f(z) + <g, z+ - z> + ||z+ - z||^2 / (2s) holds.
        bool moved = false;
        while (s > 1e-18) {
            PgPoint zn = prob.project(step(z, gz, s));
            const double fn = prob.value(zn);
            const double lin = pg_inner(gz, zn) - pg_inner(gz, z);
            const double quad = pg_distance_sq(zn, z) / (2.0 * s);
            if (fn <= fz + lin + quad + 1e-12 * (1.0 + std::abs(fz))) {
                z = std::move(zn);
                fz = fn;
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if (!moved)
            break;  // step size exhausted; residual reported as is
        gz = prob.gradient(z);
        s = std::min(s * 1.5, 1e12);
    }
    out.z = std::move(z);
    return out;
}

Vector uniform_spread(const ActionSpace& space) {
    const std::size_t n = space.dimension();
    int open = 0;
    for (double u : space.upper)
        if (u > 0.0)
            ++open;
    Vector x(n, 0.0);
    if (open > 0) {
        const double share = space.budget / static_cast<double>(open);
        for (std::size_t k = 0; k < n; ++k)
            if (space.upper[k] > 0.0)
                x[k] = share;
    }
    return project_action(space, x);
}

Vector initial_action(const PlayerClass& cls, const SolverOptions& opts, std::size_t class_index) {
    switch (opts.init) {
        case InitScheme::kUniform:
            return uniform_spread(cls.space);
        case InitScheme::kZero:
            return project_action(cls.space, Vector(cls.space.dimension(), 0.0));
        case InitScheme::kGiven:
            if (class_index >= opts.initial_actions.size())
                throw std::invalid_argument("solver: missing initial action for class");
            return project_action(cls.space, opts.initial_actions[class_index]);
    }
    throw std::logic_error("solver: unknown init scheme");
}

Vector nominal_prices(const AffinePriceCost& cost, const Vector& sigma) {
    Vector c(sigma.size());
    for (std::size_t k = 0; k < sigma.size(); ++k)
        c[k] = cost.alpha[k] * sigma[k] + cost.beta[k];
    return c;
}

void require_valid(const GameInstance& game) {
    const ValidationReport v = validate_game(game);
    if (!v.passed())
        throw std::invalid_argument("solver: invalid game: " + v.summary());
}

}  // namespace

StrategyProfile AugmentedProfile::strategy() const {
    StrategyProfile p;
    p.actions.reserve(states.size());
    for (const auto& s : states)
        p.actions.push_back(s.x);
    p.sigma = sigma;
    return p;
}

Vector greedy_linear_response(const ActionSpace& space, const Vector& prices) {
    const std::size_t n = space.dimension();
    if (prices.size() != n)
        throw std::invalid_argument("greedy_linear_response: dimension mismatch");
    Vector x(n, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (prices[k] < 0.0) {
            x[k] = space.upper[k];
            total += x[k];
        }
    }
    if (total < space.budget) {
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < n; ++k)
            if (prices[k] >= 0.0)
                order.push_back(k);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return prices[a] < prices[b]; });
        double deficit = space.budget - total;
        for (std::size_t k : order) {
            if (deficit <= 0.0)
                break;
            const double add = std::min(space.upper[k], deficit);
            x[k] = add;
            deficit -= add;
        }
    }
    return x;
}

ProximalStepResult proximal_step(const PlayerClass& cls, const Vector& x_t, double lambda_t,
                                 double lambda_cap, const Vector& sigma_t,
                                 const RobustnessParams& params, const SolverOptions& opts) {
    if (!(opts.rho > 0.0))
        throw std::invalid_argument("proximal_step: rho must be positive");
    ProximalStepResult result;
    if (params.epsilon == 0.0) {
        // Nominal game: prox of a linear cost is a single projected step.
        const Vector c = nominal_prices(cls.cost, sigma_t);
        Vector y(x_t.size());
        for (std::size_t k = 0; k < y.size(); ++k)
            y[k] = x_t[k] - opts.rho * c[k];
        result.x = project_action(cls.space, y);
        result.lambda = 0.0;
        return result;
    }

    PgProblem prob;
    prob.cls = &cls;
    prob.params = &params;
    prob.sigma = &sigma_t;
    prob.lambda_cap = lambda_cap;
    prob.anchor = {x_t, lambda_t};
    prob.rho = opts.rho;
    PgOutcome pg =
        minimize_augmented(prob, {x_t, lambda_t}, opts.tol_sub, opts.subproblem_max_iter);
    result.x = std::move(pg.z.x);
    result.lambda = pg.z.lambda;
    result.inner_converged = pg.converged;
    result.inner_iterations = pg.iterations;
    result.inner_residual = pg.residual;
    return result;
}

VerifyResult verify_equilibrium(const StrategyProfile& profile, const GameInstance& game,
                                const RobustnessParams& params, double tol) {
    params.validate();
    const Vector& sigma = profile.sigma;
    VerifyResult result;
    result.certified = true;

    for (std::size_t c = 0; c < game.classes.size(); ++c) {
        const PlayerClass& cls = game.classes[c];
        const double at_profile = robust_cost(profile.actions[c], sigma, params, cls.cost).value;
        double best = std::numeric_limits<double>::infinity();

        if (params.epsilon == 0.0) {
            const Vector x_star = greedy_linear_response(cls.space, nominal_prices(cls.cost, sigma));
            best = nominal_cost(x_star, sigma, cls.cost);
        } else {
            const double cap = big_m(cls, params);
            const std::vector<Vector> starts = {
                uniform_spread(cls.space),
                project_action(cls.space, Vector(cls.space.dimension(), 0.0)),
                profile.actions[c],
                greedy_linear_response(cls.space, nominal_prices(cls.cost, sigma)),
            };
            bool any_solved = false;
            for (const Vector& x0 : starts) {
                const double lam0 =
                    clip(robust_cost(x0, sigma, params, cls.cost).lambda_star, 0.0, cap);
                PgProblem prob;
                prob.cls = &cls;
                prob.params = &params;
                prob.sigma = &sigma;
                prob.lambda_cap = cap;
                PgOutcome pg = minimize_augmented(prob, {x0, lam0}, 1e-7, 50000);
                if (!pg.converged)
                    continue;
                any_solved = true;
                best = std::min(best, robust_cost(pg.z.x, sigma, params, cls.cost).value);
            }
            if (!any_solved)
                best = -std::numeric_limits<double>::infinity();  // gap reported as +inf
        }

        const double gap = at_profile - best;
        result.gaps.push_back(gap);
        result.costs.push_back(at_profile);
        if (!(gap <= tol * (1.0 + std::abs(at_profile))))
            result.certified = false;
    }
    return result;
}

std::pair<AugmentedProfile, SolveReport> solve_srwe(const GameInstance& game,
                                                    const RobustnessParams& params,
                                                    const SolverOptions& opts) {
    require_valid(game);
    params.validate();

    if (params.epsilon == 0.0) {
        auto [profile, report] = solve_wardrop(game, opts);
        AugmentedProfile aug;
        for (std::size_t c = 0; c < profile.actions.size(); ++c)
            aug.states.push_back({std::move(profile.actions[c]), DualVariable::checked(0.0, 0.0)});
        aug.sigma = std::move(profile.sigma);
        return {std::move(aug), report};
    }

    const auto t_start = std::chrono::steady_clock::now();
    const std::size_t n_classes = game.classes.size();
    std::vector<double> caps(n_classes);
    std::vector<Vector> x(n_classes);
    std::vector<double> lambda(n_classes);

    for (std::size_t c = 0; c < n_classes; ++c)
        x[c] = initial_action(game.classes[c], opts, c);
    Vector sigma = aggregate(x, game);
    for (std::size_t c = 0; c < n_classes; ++c) {
        caps[c] = big_m(game.classes[c], params);
        // Start lambda at the dual optimum for the initial point: the
        // proximal updates move lambda by O(rho * |grad|) per sweep, and for
        // small epsilon the optimal multiplier scales like 1/epsilon, far
        // beyond what a bounded number of sweeps can reach from a fixed seed
        // value.
        lambda[c] = clip(robust_cost(x[c], sigma, params, game.classes[c].cost).lambda_star, 0.0,
                         caps[c]);
    }

    SolveReport report;
    bool last_sweep_inner_ok = true;
    for (int t = 1; t <= opts.max_iter; ++t) {
        sigma = aggregate(x, game);
        double residual = 0.0;
        last_sweep_inner_ok = true;
        for (std::size_t c = 0; c < n_classes; ++c) {
            ProximalStepResult stepr =
                proximal_step(game.classes[c], x[c], lambda[c], caps[c], sigma, params, opts);
            if (!stepr.inner_converged) {
                ++report.subproblem_failures;
                last_sweep_inner_ok = false;
            }
            report.worst_subproblem_residual =
                std::max(report.worst_subproblem_residual, stepr.inner_residual);
            residual = std::max(residual, sup_distance(stepr.x, x[c]));
            residual = std::max(residual, std::abs(stepr.lambda - lambda[c]));
            x[c] = std::move(stepr.x);
            lambda[c] = stepr.lambda;
        }
        report.iterations = t;
        report.residual = residual;
        if (residual <= opts.tol_fix)
            break;
    }
    report.converged = report.residual <= opts.tol_fix && last_sweep_inner_ok;

    AugmentedProfile profile;
    profile.sigma = aggregate(x, game);
    for (std::size_t c = 0; c < n_classes; ++c)
        profile.states.push_back({std::move(x[c]), DualVariable::checked(lambda[c], caps[c])});

    if (report.converged) {
        const VerifyResult v =
            verify_equilibrium(profile.strategy(), game, params, opts.verify_tol);
        report.class_gaps = v.gaps;
        report.class_costs = v.costs;
        report.certified = v.certified;
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(profile), std::move(report)};
}

std::pair<StrategyProfile, SolveReport> solve_wardrop(const GameInstance& game,
                                                      const SolverOptions& opts) {
    require_valid(game);
    const auto t_start = std::chrono::steady_clock::now();
    RobustnessParams nominal;
    nominal.epsilon = 0.0;
    nominal.support = game.support;

    const std::size_t n_classes = game.classes.size();
    std::vector<Vector> x(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c)
        x[c] = initial_action(game.classes[c], opts, c);

    SolveReport report;
    for (int t = 1; t <= opts.max_iter; ++t) {
        const Vector sigma = aggregate(x, game);
        double residual = 0.0;
        for (std::size_t c = 0; c < n_classes; ++c) {
            ProximalStepResult stepr =
                proximal_step(game.classes[c], x[c], 0.0, 0.0, sigma, nominal, opts);
            residual = std::max(residual, sup_distance(stepr.x, x[c]));
            x[c] = std::move(stepr.x);
        }
        report.iterations = t;
        report.residual = residual;
        if (residual <= opts.tol_fix)
            break;
    }
    report.converged = report.residual <= opts.tol_fix;

    StrategyProfile profile;
    profile.sigma = aggregate(x, game);
    profile.actions = std::move(x);

    if (report.converged) {
        const VerifyResult v = verify_equilibrium(profile, game, nominal, opts.verify_tol);
        report.class_gaps = v.gaps;
        report.class_costs = v.costs;
        report.certified = v.certified;
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(profile), std::move(report)};
}

double social_cost(const Vector& sigma, const GameInstance& game) {
    if (game.classes.empty())
        throw std::invalid_argument("social_cost: game has no classes");
    const AffinePriceCost& cost = game.classes.front().cost;
    if (sigma.size() != cost.dimension())
        throw std::invalid_argument("social_cost: dimension mismatch");
    double v = 0.0;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const double load = sigma[k] + cost.base_demand[k];
        v += (cost.alpha[k] * sigma[k] + cost.beta[k]) * load;
    }
    return v;
}

SocialOptimum solve_social_optimum(const GameInstance& game) {
    require_valid(game);
    const AffinePriceCost& cost = game.classes.front().cost;
    const std::size_t n = game.dimension();
    const double total = static_cast<double>(game.total_players());

    std::vector<Vector> x(game.classes.size());
    for (std::size_t c = 0; c < x.size(); ++c)
        x[c] = uniform_spread(game.classes[c].space);

    auto grad_sigma = [&](const Vector& sigma) {
        Vector g(n);
        for (std::size_t k = 0; k < n; ++k)
            g[k] = 2.0 * cost.alpha[k] * sigma[k] + cost.beta[k] +
                   cost.alpha[k] * cost.base_demand[k];
        return g;
    };

    SocialOptimum out;
    double s = 1.0;
    constexpr int kMaxIter = 100000;
    constexpr double kTol = 1e-8;
    for (int it = 0; it < kMaxIter; ++it) {
        out.iterations = it;
        const Vector sigma = aggregate(x, game);
        const double f = social_cost(sigma, game);
        const Vector gs = grad_sigma(sigma);

        auto take = [&](double step_size) {
            std::vector<Vector> xn(x.size());
            for (std::size_t c = 0; c < x.size(); ++c) {
                const double w = static_cast<double>(game.classes[c].count) / total;
                Vector y(n);
                for (std::size_t k = 0; k < n; ++k)
                    y[k] = x[c][k] - step_size * w * gs[k];
                xn[c] = project_action(game.classes[c].space, y);
            }
            return xn;
        };

        // Unit-step natural residual across all class blocks.
        const std::vector<Vector> probe = take(1.0);
        double residual = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c)
            residual = std::max(residual, sup_distance(probe[c], x[c]));
        if (residual <= kTol) {
            out.converged = true;
            break;
        }

        bool moved = false;
        while (s > 1e-18) {
            std::vector<Vector> xn = take(s);
            const Vector sn = aggregate(xn, game);
            const double fn = social_cost(sn, game);
            double lin = 0.0, quad = 0.0;
            for (std::size_t c = 0; c < x.size(); ++c) {
                const double w = static_cast<double>(game.classes[c].count) / total;
                for (std::size_t k = 0; k < n; ++k) {
                    const double d = xn[c][k] - x[c][k];
                    lin += w * gs[k] * d;
                    quad += d * d;
                }
            }
            if (fn <= f + lin + quad / (2.0 * s) + 1e-12 * (1.0 + std::abs(f))) {
                x = std::move(xn);
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if (!moved)
            break;
        s = std::min(s * 1.5, 1e12);
    }
    out.sigma = aggregate(x, game);
    out.value = social_cost(out.sigma, game);
    return out;
}

PoaResult price_of_anarchy(const GameInstance& game, const RobustnessParams& params,
                           const SolverOptions& opts) {
    PoaResult out;
    Vector sigma_eq;
    if (params.epsilon == 0.0) {
        auto [profile, report] = solve_wardrop(game, opts);
        sigma_eq = std::move(profile.sigma);
        out.report = std::move(report);
    } else {
        auto [profile, report] = solve_srwe(game, params, opts);
        sigma_eq = std::move(profile.sigma);
        out.report = std::move(report);
    }
    const SocialOptimum opt = solve_social_optimum(game);
    out.equilibrium_social_cost = social_cost(sigma_eq, game);
    out.optimal_social_cost = opt.value;
    out.converged = out.report.converged && opt.converged;
    if (opt.value == 0.0)
        out.value = out.equilibrium_social_cost == 0.0
                        ? 1.0
                        : std::numeric_limits<double>::infinity();
    else
        out.value = out.equilibrium_social_cost / opt.value;
    return out;
}

}  // namespace srwe
