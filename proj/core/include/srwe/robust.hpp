#pragma once

#include <cstddef>

#include "srwe/game.hpp"
#include "srwe/numeric.hpp"

namespace srwe {

/// Robustness level and ambiguity geometry: all distributions on the support
/// box whose type-p Wasserstein distance (Euclidean ground norm) from the
/// Dirac at the nominal aggregate is at most epsilon.
///
/// The closed-form evaluation path (inner_max_affine, augmented_cost,
/// robust_cost) supports p = 2; p = 1 is available in psi_p and in the
/// brute-force oracles.
struct RobustnessParams {
    double epsilon = 0.0;
    int p = 2;
    AggregateSpace support;

    void validate() const;
};

/// Dual multiplier of the Wasserstein constraint, boxed to [0, cap].
struct DualVariable {
    double lambda = 0.0;
    double cap = 0.0;

    static DualVariable checked(double lambda, double cap);
};

struct WorstCaseResult {
    double value = 0.0;
    double lambda_star = 0.0;
    Vector sigma_hat_star;     // inner maximizer at lambda_star, inside the support box
    bool sigma_clipped = false;  // input aggregate fell outside the support box
};

/// Conjugate penalty of the norm power: ||w||^2 / 4 for p = 2, and for p = 1
/// the indicator of the unit ball (0 inside, +inf outside). Throws for other p.
double psi_p(const Vector& w, int p);

struct InnerMaxResult {
    double value = 0.0;
    Vector sigma_hat;
};

/// max over sigma_hat in [0, sigma_max]^n of J(x, sigma_hat) - lambda * ||sigma_hat - sigma||^2.
///
/// Separable per coordinate. For lambda > 0 the maximizer is
/// clip(sigma_k + alpha_k x_k / (2 lambda), 0, sigma_max); for lambda = 0 the
/// objective is linear and the maximizer sits at a box corner, with the
/// center tie-break sigma_hat_k = sigma_k whenever alpha_k x_k = 0.
InnerMaxResult inner_max_affine(const Vector& x, const Vector& sigma, double lambda,
                                const AffinePriceCost& cost, const AggregateSpace& support);

/// Augmented-game cost inner_max_affine(x, sigma, lambda) + lambda * epsilon^p.
/// Requires epsilon > 0; the epsilon = 0 game is the nominal one and callers
/// must branch there.
double augmented_cost(const Vector& x, double lambda, const Vector& sigma,
                      const RobustnessParams& params, const AffinePriceCost& cost);

struct AugmentedGradient {
    Vector dx;
    double dlambda = 0.0;
};

/// Envelope gradient of augmented_cost at (x, lambda), evaluated through the
/// inner maximizer: d/dx_k = alpha_k * sigma_hat_k + beta_k and
/// d/dlambda = epsilon^p - ||sigma - sigma_hat||^p. Exact wherever the inner
/// maximizer is unique (always for lambda > 0).
AugmentedGradient augmented_cost_gradient(const Vector& x, double lambda, const Vector& sigma,
                                          const RobustnessParams& params,
                                          const AffinePriceCost& cost);

/// Worst-case expected cost over the ambiguity set, via the one-dimensional
/// dual min over lambda in [0, M]. The dual objective is convex in lambda
/// (pointwise max of affine functions plus a linear term), so a golden-section
/// search suffices; its derivative can jump at clip boundaries, which the
/// bracketing search never touches.
///
/// epsilon = 0 returns the nominal cost with lambda* = 0. Aggregates outside
/// the support box are clipped and flagged in the result.
WorstCaseResult robust_cost(const Vector& x, const Vector& sigma, const RobustnessParams& params,
                            const AffinePriceCost& cost);

/// Upper bound M = 2 * U / epsilon^p on the dual multiplier for a whole
/// class, with U >= max |J| over the action box and the support box:
/// U = sum_k cap_k * max(|alpha_k sigma_max + beta_k|, |beta_k|). Any
/// over-approximation is safe because the dual optimizer satisfies
/// lambda* <= M. Requires epsilon > 0.
double big_m(const PlayerClass& cls, const RobustnessParams& params);

/// Epigraph objective of the affine-price dual program with box multipliers
/// tau_l, tau_u >= 0:
///   lambda eps^2 + sum_k [ x_k (alpha_k sigma_k + beta_k)
///                          + sigma_k (tau_l_k - tau_u_k) + sigma_max tau_u_k ]
///   + ||tau_l - tau_u + alpha .* x||^2 / (4 lambda).
/// Requires lambda > 0.
double example1_objective(const Vector& x, double lambda, const Vector& sigma,
                          const Vector& tau_l, const Vector& tau_u,
                          const RobustnessParams& params, const AffinePriceCost& cost);

struct Example1Duals {
    Vector tau_l;
    Vector tau_u;
    double value = 0.0;
};

/// Closed-form minimizer of example1_objective over tau_l, tau_u >= 0,
/// obtained per coordinate from the active bound of the inner maximizer:
/// interior coordinates take tau = 0; an upper clip takes
/// tau_u_k = alpha_k x_k - 2 lambda (sigma_max - sigma_k), a lower clip
/// tau_l_k = -(alpha_k x_k + 2 lambda sigma_k). The returned value equals
/// augmented_cost (strong duality of the box-constrained inner problem).
Example1Duals example1_solve_duals(const Vector& x, double lambda, const Vector& sigma,
                                   const RobustnessParams& params, const AffinePriceCost& cost);

}  // namespace srwe
