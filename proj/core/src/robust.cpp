#include "srwe/robust.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srwe {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double pow_p(double v, int p) {
    return p == 1 ? v : v * v;
}

void check_p2(const RobustnessParams& params, const char* op) {
    if (params.p != 2)
        throw std::invalid_argument(std::string(op) + ": closed-form path requires p = 2");
}

/// Bound on the dual multiplier for a fixed action x: the same argument that
/// caps the class-level multiplier applies with U = max |J(x, .)| over the
/// support box, so lambda* <= 2 U / eps^p.
double lambda_cap_for_action(const Vector& x, const RobustnessParams& params,
                             const AffinePriceCost& cost) {
    double u = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double hi = std::abs(cost.alpha[k] * params.support.sigma_max + cost.beta[k]);
        const double lo = std::abs(cost.beta[k]);
        u += std::abs(x[k]) * std::max(hi, lo);
    }
    return 2.0 * u / pow_p(params.epsilon, params.p);
}

/// Golden-section minimization of a convex function over [0, hi] to absolute
/// tolerance tol on the argument. Returns the best sampled point.
template <class F>
std::pair<double, double> golden_min(F&& g, double hi, double tol) {
    double a = 0.0, b = hi;
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double g1 = g(x1), g2 = g(x2);
    while (b - a > tol) {
        if (g1 <= g2) {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - kGoldenRatio * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + kGoldenRatio * (b - a);
            g2 = g(x2);
        }
    }
    double best_x = g1 <= g2 ? x1 : x2;
    double best_g = std::min(g1, g2);
    // The minimum may sit exactly on the boundary; sample both ends.
    for (double cand : {0.0, hi}) {
        const double gc = g(cand);
        if (gc < best_g) {
            best_g = gc;
            best_x = cand;
        }
    }
    return {best_x, best_g};
}

}  // namespace

void RobustnessParams::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("RobustnessParams: epsilon must be finite and >= 0");
    if (p != 1 && p != 2)
        throw std::invalid_argument("RobustnessParams: order p must be 1 or 2");
    if (!(support.sigma_max >= 0.0))
        throw std::invalid_argument("RobustnessParams: sigma_max must be >= 0");
}

DualVariable DualVariable::checked(double lambda, double cap) {
    if (!(cap >= 0.0))
        throw std::invalid_argument("DualVariable: cap must be >= 0");
    if (lambda < 0.0 || lambda > cap)
        throw std::invalid_argument("DualVariable: lambda outside [0, cap]");
    return {lambda, cap};
}

double psi_p(const Vector& w, int p) {
    if (p == 2)
        return sq_norm2(w) / 4.0;
    if (p == 1)
        return norm2(w) <= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    throw std::invalid_argument("psi_p: order p must be 1 or 2");
}

InnerMaxResult inner_max_affine(const Vector& x, const Vector& sigma, double lambda,
                                const AffinePriceCost& cost, const AggregateSpace& support) {
    const std::size_t n = x.size();
    if (sigma.size() != n || cost.alpha.size() != n)
        throw std::invalid_argument("inner_max_affine: dimension mismatch");
    if (lambda < 0.0)
        throw std::invalid_argument("inner_max_affine: lambda must be >= 0");

    InnerMaxResult r;
    r.sigma_hat.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double g = cost.alpha[k] * x[k];  // slope of the inner objective
        double s_hat;
        if (lambda > 0.0) {
            s_hat = clip(sigma[k] + g / (2.0 * lambda), 0.0, support.sigma_max);
        } else if (g > 0.0) {
            s_hat = support.sigma_max;
        } else if (g < 0.0) {
            s_hat = 0.0;
        } else {
            s_hat = sigma[k];  // any point maximizes; the center keeps eps -> 0 continuity
        }
        r.sigma_hat[k] = s_hat;
        const double d = s_hat - sigma[k];
        r.value += x[k] * (cost.alpha[k] * s_hat + cost.beta[k]) - lambda * d * d;
    }
    return r;
}

double augmented_cost(const Vector& x, double lambda, const Vector& sigma,
                      const RobustnessParams& params, const AffinePriceCost& cost) {
    if (!(params.epsilon > 0.0))
        throw std::invalid_argument("augmented_cost: requires epsilon > 0 (branch to nominal_cost)");
    check_p2(params, "augmented_cost");
    const InnerMaxResult inner = inner_max_affine(x, sigma, lambda, cost, params.support);
    return inner.value + lambda * pow_p(params.epsilon, params.p);
}

AugmentedGradient augmented_cost_gradient(const Vector& x, double lambda, const Vector& sigma,
                                          const RobustnessParams& params,
                                          const AffinePriceCost& cost) {
    check_p2(params, "augmented_cost_gradient");
    const InnerMaxResult inner = inner_max_affine(x, sigma, lambda, cost, params.support);
    AugmentedGradient g;
    g.dx.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        g.dx[k] = cost.alpha[k] * inner.sigma_hat[k] + cost.beta[k];
    g.dlambda = pow_p(params.epsilon, params.p) - sq_distance2(sigma, inner.sigma_hat);
    return g;
}

WorstCaseResult robust_cost(const Vector& x, const Vector& sigma, const RobustnessParams& params,
                            const AffinePriceCost& cost) {
    params.validate();
    if (sigma.size() != x.size())
        throw std::invalid_argument("robust_cost: dimension mismatch");

    WorstCaseResult result;
    Vector s = sigma;
    for (double& v : s) {
        const double c = clip(v, 0.0, params.support.sigma_max);
        if (c != v) {
            result.sigma_clipped = true;
            v = c;
        }
    }

    if (params.epsilon == 0.0) {
        result.value = nominal_cost(x, s, cost);
        result.lambda_star = 0.0;
        result.sigma_hat_star = s;
        return result;
    }
    check_p2(params, "robust_cost");

    const double cap = lambda_cap_for_action(x, params, cost);
    if (cap <= 0.0) {
        // |J(x, .)| == 0 over the box: the worst case is the nominal cost.
        result.value = nominal_cost(x, s, cost);
        result.lambda_star = 0.0;
        result.sigma_hat_star = s;
        return result;
    }

    const double eps_p = pow_p(params.epsilon, params.p);
    auto g = [&](double lam) {
        return inner_max_affine(x, s, lam, cost, params.support).value + lam * eps_p;
    };
    const double tol = 1e-9 * (1.0 + cap);
    const auto [lam_star, value] = golden_min(g, cap, tol);

    result.value = value;
    result.lambda_star = lam_star;
    result.sigma_hat_star = inner_max_affine(x, s, lam_star, cost, params.support).sigma_hat;
    return result;
}

double big_m(const PlayerClass& cls, const RobustnessParams& params) {
    if (!(params.epsilon > 0.0))
        throw std::invalid_argument("big_m: requires epsilon > 0");
    double u = 0.0;
    for (std::size_t k = 0; k < cls.space.upper.size(); ++k) {
        const double hi = std::abs(cls.cost.alpha[k] * params.support.sigma_max + cls.cost.beta[k]);
        const double lo = std::abs(cls.cost.beta[k]);
        u += cls.space.upper[k] * std::max(hi, lo);
    }
    return 2.0 * u / pow_p(params.epsilon, params.p);
}

double example1_objective(const Vector& x, double lambda, const Vector& sigma,
                          const Vector& tau_l, const Vector& tau_u,
                          const RobustnessParams& params, const AffinePriceCost& cost) {
    const std::size_t n = x.size();
    if (sigma.size() != n || tau_l.size() != n || tau_u.size() != n)
        throw std::invalid_argument("example1_objective: dimension mismatch");
    if (!(lambda > 0.0))
        throw std::invalid_argument("example1_objective: requires lambda > 0");
    check_p2(params, "example1_objective");

    double value = lambda * params.epsilon * params.epsilon;
    double sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        value += x[k] * (cost.alpha[k] * sigma[k] + cost.beta[k]) +
                 sigma[k] * (tau_l[k] - tau_u[k]) + params.support.sigma_max * tau_u[k];
        const double w = tau_l[k] - tau_u[k] + cost.alpha[k] * x[k];
        sq += w * w;
    }
    return value + sq / (4.0 * lambda);
}

Example1Duals example1_solve_duals(const Vector& x, double lambda, const Vector& sigma,
                                   const RobustnessParams& params, const AffinePriceCost& cost) {
    const std::size_t n = x.size();
    if (!(lambda > 0.0))
        throw std::invalid_argument("example1_solve_duals: requires lambda > 0");
    check_p2(params, "example1_solve_duals");

    Example1Duals duals;
    duals.tau_l.assign(n, 0.0);
    duals.tau_u.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double g = cost.alpha[k] * x[k];
        const double unconstrained = sigma[k] + g / (2.0 * lambda);
        if (unconstrained > params.support.sigma_max) {
            duals.tau_u[k] = g - 2.0 * lambda * (params.support.sigma_max - sigma[k]);
        } else if (unconstrained < 0.0) {
            duals.tau_l[k] = -(g + 2.0 * lambda * sigma[k]);
        }
    }
    duals.value = example1_objective(x, lambda, sigma, duals.tau_l, duals.tau_u, params, cost);
    return duals;
}

}  // namespace srwe
