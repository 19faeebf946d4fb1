#include "srwe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "srwe/util.hpp"

namespace srwe {

namespace {

double dist_pow(const Vector& a, const Vector& b, int p) {
    const double d = std::sqrt(sq_distance2(a, b));
    return p == 1 ? d : d * d;
}

void check_small_dimension(std::size_t n, const char* op) {
    if (n < 1 || n > 2)
        throw std::invalid_argument(std::string(op) + ": exhaustive oracle supports n in {1, 2}");
}

std::vector<Vector> support_grid(const AggregateSpace& support, std::size_t n, int g) {
    if (g < 2)
        throw std::invalid_argument("support grid needs at least 2 points per dimension");
    Vector axis(g);
    for (int i = 0; i < g; ++i)
        axis[i] = support.sigma_max * static_cast<double>(i) / static_cast<double>(g - 1);
    std::vector<Vector> pts;
    if (n == 1) {
        pts.reserve(g);
        for (double a : axis)
            pts.push_back({a});
    } else {
        pts.reserve(static_cast<std::size_t>(g) * g);
        for (double a : axis)
            for (double b : axis)
                pts.push_back({a, b});
    }
    return pts;
}

}  // namespace

void DiscreteDistribution::validate(const AggregateSpace& support) const {
    if (atoms.size() != weights.size())
        throw std::invalid_argument("DiscreteDistribution: atom/weight count mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (weights[j] < 0.0)
            throw std::invalid_argument("DiscreteDistribution: negative weight");
        if (!support.contains(atoms[j], 1e-9))
            throw std::invalid_argument("DiscreteDistribution: atom outside the support box");
        total += weights[j];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DiscreteDistribution: weights must sum to 1");
}

double wasserstein_to_dirac(const DiscreteDistribution& mu, const Vector& sigma, int p) {
    if (p != 1 && p != 2)
        throw std::invalid_argument("wasserstein_to_dirac: order p must be 1 or 2");
    double s = 0.0;
    for (std::size_t j = 0; j < mu.atoms.size(); ++j)
        s += mu.weights[j] * dist_pow(mu.atoms[j], sigma, p);
    return p == 1 ? s : std::sqrt(s);
}

GridWorstCase grid_two_point_worst_case(const Vector& x, const Vector& sigma,
                                        const RobustnessParams& params,
                                        const AffinePriceCost& cost, int grid_points_per_dim) {
    params.validate();
    const std::size_t n = x.size();
    check_small_dimension(n, "grid_two_point_worst_case");
    const std::vector<Vector> grid = support_grid(params.support, n, grid_points_per_dim);
    const double budget = std::pow(params.epsilon, params.p);

    struct Atom {
        double c;  // transport cost ||a - sigma||^p
        double j;  // cost value J(x, a)
        std::size_t idx;
    };
    std::vector<Atom> atoms;
    atoms.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        atoms.push_back({dist_pow(grid[i], sigma, params.p), nominal_cost(x, grid[i], cost), i});

    GridWorstCase out;
    const bool any_feasible =
        std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.c <= budget; });
    if (!any_feasible) {
        // Radius below the grid resolution around sigma: report the nominal
        // value and flag the coarseness.
        out.grid_too_coarse = true;
        out.value = nominal_cost(x, sigma, cost);
        const auto nearest =
            std::min_element(atoms.begin(), atoms.end(),
                             [](const Atom& a, const Atom& b) { return a.c < b.c; });
        out.mu.atoms = {grid[nearest->idx]};
        out.mu.weights = {1.0};
        return out;
    }

    // Non-dominated frontier: keep atoms whose cost value strictly exceeds
    // that of every atom with smaller transport cost. A dominated atom can be
    // swapped out of any pair without losing feasibility or value.
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        return a.c != b.c ? a.c < b.c : a.j > b.j;
    });
    std::vector<Atom> frontier;
    double best_j = -std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms) {
        if (a.j > best_j) {
            frontier.push_back(a);
            best_j = a.j;
        }
    }

    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    double best_w = 1.0;
    auto consider = [&](const Atom& a, const Atom& b, double w) {
        if (w < 0.0 || w > 1.0)
            return;
        if (w * a.c + (1.0 - w) * b.c > budget + 1e-12)
            return;
        const double v = w * a.j + (1.0 - w) * b.j;
        if (v > best_value) {
            best_value = v;
            best_a = a.idx;
            best_b = b.idx;
            best_w = w;
        }
    };
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        for (std::size_t l = i; l < frontier.size(); ++l) {
            const Atom& a = frontier[i];
            const Atom& b = frontier[l];
            consider(a, b, 1.0);
            consider(a, b, 0.0);
            if (a.c != b.c) {
                // Weight on `a` that makes the transport constraint tight.
                const double w = (b.c - budget) / (b.c - a.c);
                consider(a, b, clip(w, 0.0, 1.0));
            }
        }
    }

    out.value = best_value;
    if (best_w >= 1.0 - 1e-15) {
        out.mu.atoms = {grid[best_a]};
        out.mu.weights = {1.0};
    } else if (best_w <= 1e-15) {
        out.mu.atoms = {grid[best_b]};
        out.mu.weights = {1.0};
    } else {
        out.mu.atoms = {grid[best_a], grid[best_b]};
        out.mu.weights = {best_w, 1.0 - best_w};
    }
    return out;
}

BestResponsePoint brute_force_best_response(const PlayerClass& cls, const Vector& sigma,
                                            const RobustnessParams& params,
                                            int grid_points_per_dim) {
    const std::size_t n = cls.space.dimension();
    check_small_dimension(n, "brute_force_best_response");
    if (grid_points_per_dim < 2)
        throw std::invalid_argument("brute_force_best_response: need at least 2 grid points");

    auto axis = [&](std::size_t k) {
        Vector a(grid_points_per_dim);
        for (int i = 0; i < grid_points_per_dim; ++i)
            a[i] = cls.space.upper[k] * static_cast<double>(i) /
                   static_cast<double>(grid_points_per_dim - 1);
        return a;
    };

    BestResponsePoint best;
    best.value = std::numeric_limits<double>::infinity();
    auto score = [&](const Vector& raw) {
        const Vector x = project_action(cls.space, raw);
        const double v = robust_cost(x, sigma, params, cls.cost).value;
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
    };
    if (n == 1) {
        for (double a : axis(0))
            score({a});
    } else {
        const Vector a0 = axis(0), a1 = axis(1);
        for (double a : a0)
            for (double b : a1)
                score({a, b});
    }
    return best;
}

FiniteDiffReport finite_difference_check(const std::function<double(const Vector&)>& f,
                                         const Vector& analytic_gradient, const Vector& point,
                                         double h) {
    if (analytic_gradient.size() != point.size())
        throw std::invalid_argument("finite_difference_check: gradient/point dimension mismatch");
    FiniteDiffReport report;
    report.h = h > 0.0 ? h : 1e-6 * (1.0 + norm2(point));
    Vector probe = point;
    for (std::size_t k = 0; k < point.size(); ++k) {
        probe[k] = point[k] + report.h;
        const double fp = f(probe);
        probe[k] = point[k] - report.h;
        const double fm = f(probe);
        probe[k] = point[k];
        const double fd = (fp - fm) / (2.0 * report.h);
        const double rel =
            std::abs(fd - analytic_gradient[k]) / std::max(1.0, std::abs(analytic_gradient[k]));
        report.max_rel_error = std::max(report.max_rel_error, rel);
    }
    return report;
}

DualOracleOutcome run_dual_oracle_battery(const DualOracleBattery& battery) {
    std::uint64_t state = battery.seed;
    auto uniform = [&]() {
        state = splitmix64(state);
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };

    DualOracleOutcome out;
    for (int i = 0; i < battery.instances; ++i) {
        const std::size_t n = uniform() < 0.5 ? 1 : 2;
        const double sigma_max = 0.5 + 1.5 * uniform();
        Vector alpha(n), beta(n), x(n), sigma(n);
        for (std::size_t k = 0; k < n; ++k) {
            alpha[k] = -2.0 + 4.0 * uniform();
            beta[k] = -1.0 + 2.0 * uniform();
            x[k] = 2.0 * uniform();
            sigma[k] = sigma_max * uniform();
        }
        const double root_n = std::sqrt(static_cast<double>(n));
        const double epsilon = 0.01 + uniform() * 1.2 * sigma_max * root_n;

        RobustnessParams params;
        params.epsilon = epsilon;
        params.p = 2;
        params.support = AggregateSpace{sigma_max, n};
        const AffinePriceCost cost = AffinePriceCost::from_coefficients(alpha, beta);

        const double dual = robust_cost(x, sigma, params, cost).value;
        const GridWorstCase grid =
            grid_two_point_worst_case(x, sigma, params, cost, battery.grid_points);

        Vector ax(n);
        for (std::size_t k = 0; k < n; ++k)
            ax[k] = alpha[k] * x[k];
        const double spacing = sigma_max / static_cast<double>(battery.grid_points - 1);
        const double tol = std::max(1e-3, norm2(ax) * spacing * root_n);

        std::string why;
        if (std::abs(dual - grid.value) > tol)
            why = "dual/grid gap " + std::to_string(std::abs(dual - grid.value)) +
                  " exceeds tol " + std::to_string(tol);
        else if (grid.value > dual + 1e-9)
            why = "weak duality violated";
        else if (!grid.grid_too_coarse &&
                 wasserstein_to_dirac(grid.mu, sigma, params.p) > epsilon + 1e-9)
            why = "oracle distribution infeasible";

        out.instances += 1;
        out.worst_abs_gap = std::max(out.worst_abs_gap, std::abs(dual - grid.value));
        out.worst_duality_violation = std::max(out.worst_duality_violation, grid.value - dual);
        if (!why.empty()) {
            ++out.failures;
            if (out.first_failure.empty())
                out.first_failure = "instance " + std::to_string(i) + ": " + why;
        }
    }
    return out;
}

DanskinCheck danskin_check(const Vector& x, double lambda, const Vector& sigma,
                           const RobustnessParams& params, const AffinePriceCost& cost,
                           double kink_margin) {
    DanskinCheck out;
    if (lambda <= kink_margin) {
        out.skipped = true;
        return out;
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double unconstrained = sigma[k] + cost.alpha[k] * x[k] / (2.0 * lambda);
        if (std::abs(unconstrained) <= kink_margin ||
            std::abs(unconstrained - params.support.sigma_max) <= kink_margin) {
            out.skipped = true;
            return out;
        }
    }

    const std::size_t n = x.size();
    Vector point = x;
    point.push_back(lambda);
    auto f = [&](const Vector& z) {
        const Vector zx(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
        return augmented_cost(zx, z[n], sigma, params, cost);
    };
    const AugmentedGradient g = augmented_cost_gradient(x, lambda, sigma, params, cost);
    Vector grad = g.dx;
    grad.push_back(g.dlambda);
    out.max_rel_error = finite_difference_check(f, grad, point).max_rel_error;
    return out;
}

}  // namespace srwe
