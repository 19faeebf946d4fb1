#include "srwe/game.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace srwe {

namespace {
constexpr double kBisectionTol = 1e-12;
}

double ActionSpace::cap_sum() const {
    return std::accumulate(upper.begin(), upper.end(), 0.0);
}

bool ActionSpace::contains(const Vector& x, double tol) const {
    if (x.size() != upper.size())
        return false;
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] < -tol || x[k] > upper[k] + tol)
            return false;
        sum += x[k];
    }
    return sum >= budget - tol;
}

AffinePriceCost AffinePriceCost::from_pricing(Vector capacity, Vector base_demand) {
    if (capacity.size() != base_demand.size())
        throw std::invalid_argument("from_pricing: capacity/base_demand dimension mismatch");
    AffinePriceCost c;
    c.alpha.resize(capacity.size());
    c.beta.resize(capacity.size());
    for (std::size_t k = 0; k < capacity.size(); ++k) {
        if (capacity[k] <= 0.0)
            throw std::invalid_argument("from_pricing: capacity must be positive");
        c.alpha[k] = 1.0 / capacity[k];
        c.beta[k] = base_demand[k] / capacity[k];
    }
    c.base_demand = std::move(base_demand);
    c.capacity = std::move(capacity);
    return c;
}

AffinePriceCost AffinePriceCost::from_coefficients(Vector alpha, Vector beta) {
    if (alpha.size() != beta.size())
        throw std::invalid_argument("from_coefficients: alpha/beta dimension mismatch");
    AffinePriceCost c;
    c.base_demand.assign(alpha.size(), 0.0);
    c.capacity.assign(alpha.size(), 1.0);
    c.alpha = std::move(alpha);
    c.beta = std::move(beta);
    return c;
}

bool AggregateSpace::contains(const Vector& sigma, double tol) const {
    if (sigma.size() != dimension)
        return false;
    for (double s : sigma)
        if (s < -tol || s > sigma_max + tol)
            return false;
    return true;
}

int GameInstance::total_players() const {
    int n = 0;
    for (const auto& c : classes)
        n += c.count;
    return n;
}

std::size_t GameInstance::dimension() const {
    return classes.empty() ? 0 : classes.front().space.dimension();
}

Vector aggregate(const std::vector<Vector>& class_actions, const GameInstance& game) {
    if (class_actions.size() != game.classes.size())
        throw std::invalid_argument("aggregate: one action per class required");
    const std::size_t n = game.dimension();
    const double total = static_cast<double>(game.total_players());
    Vector sigma(n, 0.0);
    for (std::size_t c = 0; c < class_actions.size(); ++c) {
        if (class_actions[c].size() != n)
            throw std::invalid_argument("aggregate: action dimension mismatch");
        const double w = static_cast<double>(game.classes[c].count) / total;
        for (std::size_t k = 0; k < n; ++k)
            sigma[k] += w * class_actions[c][k];
    }
    return sigma;
}

StrategyProfile make_profile(const GameInstance& game, std::vector<Vector> class_actions) {
    for (std::size_t c = 0; c < class_actions.size(); ++c) {
        if (!game.classes[c].space.contains(class_actions[c], 1e-8))
            throw std::invalid_argument("make_profile: infeasible class action");
    }
    StrategyProfile p;
    p.sigma = aggregate(class_actions, game);
    p.actions = std::move(class_actions);
    return p;
}

double nominal_cost(const Vector& x, const Vector& sigma, const AffinePriceCost& cost) {
    if (x.size() != sigma.size() || x.size() != cost.alpha.size())
        throw std::invalid_argument("nominal_cost: dimension mismatch");
    double v = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        v += x[k] * (cost.alpha[k] * sigma[k] + cost.beta[k]);
    return v;
}

Vector project_action(const ActionSpace& space, const Vector& y) {
    const std::size_t n = space.dimension();
    if (y.size() != n)
        throw std::invalid_argument("project_action: dimension mismatch");
    if (!all_finite(y))
        throw std::invalid_argument("project_action: input must be finite");
    if (!space.feasible())
        throw std::invalid_argument("project_action: empty action polytope (sum of caps < budget)");

    Vector x(n);
    auto clip_shifted = [&](double nu) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = clip(y[k] + nu, 0.0, space.upper[k]);
            sum += x[k];
        }
        return sum;
    };

    // Inactive budget: the box clip is the projection.
    if (clip_shifted(0.0) >= space.budget)
        return x;

    // Active budget: sum_k clip(y_k + nu, 0, upper_k) is nondecreasing in nu,
    // reaches budget before nu_hi (where the clip saturates every cap).
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        hi = std::max(hi, space.upper[k] - y[k]);
    while (hi - lo > kBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        if (clip_shifted(mid) < space.budget)
            lo = mid;
        else
            hi = mid;
    }
    clip_shifted(hi);
    return x;
}

std::string ValidationReport::summary() const {
    if (failures.empty())
        return "ok";
    std::ostringstream os;
    for (const auto& f : failures)
        os << f.check << ": " << f.message << "\n";
    return os.str();
}

ValidationReport validate_game(const GameInstance& game) {
    ValidationReport report;
    auto fail = [&](std::string check, std::string message) {
        report.failures.push_back({std::move(check), std::move(message)});
    };

    if (game.classes.empty())
        fail("classes", "game has no player classes");

    const std::size_t n = game.dimension();
    double max_cap = 0.0;
    for (std::size_t c = 0; c < game.classes.size(); ++c) {
        const auto& cls = game.classes[c];
        const std::string tag = "class " + std::to_string(c);
        if (cls.count < 1)
            fail("multiplicity", tag + ": count must be >= 1");
        if (cls.space.dimension() != n || cls.cost.dimension() != n)
            fail("dimension", tag + ": action/cost dimension mismatch");
        for (double u : cls.space.upper) {
            if (!(u >= 0.0) || !std::isfinite(u)) {
                fail("caps", tag + ": caps must be finite and nonnegative");
                break;
            }
        }
        if (cls.space.budget < 0.0)
            fail("budget", tag + ": budget must be nonnegative");
        if (!cls.space.feasible())
            fail("non-empty", tag + ": sum of caps below budget, action set empty");
        for (double kap : cls.cost.capacity) {
            if (!(kap > 0.0)) {
                fail("capacity", tag + ": capacities must be positive");
                break;
            }
        }
        for (double u : cls.space.upper)
            max_cap = std::max(max_cap, u);
    }
    if (game.support.dimension != n)
        fail("support", "aggregate support dimension mismatch");
    if (game.support.sigma_max < max_cap)
        fail("support", "sigma_max below the largest cap; reachable aggregates escape the box");
    return report;
}

}  // namespace srwe
