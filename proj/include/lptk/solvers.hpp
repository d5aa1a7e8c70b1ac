#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lptk/dual_terms.hpp"
#include "lptk/losses.hpp"

namespace lptk {

struct SolverConfig {
    double gamma = 1.0;
    Exponents exps = Exponents::from_q(4.0);
    double delta = 0.9;
    double theta = 0.5;
    double lambda_bar = 1.0;
    int max_iter = 10000;
    /// Stop once F(w(α)) + Λ(α) <= tol (1 + |F(w(α))|).
    double tol = 1e-8;
    /// Assert the per-iteration geometric decay inequality (square loss).
    bool check_certificate = false;
    /// Λ* for the certificate; when empty a tight pilot solve supplies it.
    std::optional<double> reference_optimum;
    int max_backtracks = 60;
    /// Keep every iterate α_m in DualState::iterates.
    bool record_iterates = false;

    /// δ = 0.9, θ = 0.5, λ̄ = 0.99 γ / (2(1 - δ)).
    static SolverConfig least_squares(double gamma, Exponents exps);
    /// δ = 0.5, θ = 0.5, λ̄ = 1.
    static SolverConfig proximal(double gamma, Exponents exps);
};

struct IterationRecord {
    int iter = 0;
    /// Step accepted at this iterate (0 for the last one).
    double lambda = 0.0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double gap = 0.0;
    int backtracks = 0;
    std::int64_t wall_ns = 0;
};

struct DualState {
    Vector alpha;
    double lambda_last = 0.0;
    double lambda_min = 0.0;
    double objective = 0.0;
    double primal_value = 0.0;
    double gap = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    int linesearch_backtracks = 0;
    bool converged = false;
    std::vector<IterationRecord> trace;
    std::vector<Vector> iterates;
};

/// Dual gradient descent with backtracking for the square loss:
///
///   α_{m+1} = (1 - λ_m/γ) α_m - λ_m (ω_m - y),  ω_m = ∇Q(α_m),
///
/// with λ_m = λ̄ θ^j for the least j such that
/// Λ(α_m) - Λ(α_m - λ_m ∇Λ(α_m)) >= λ_m (1 - δ) ‖∇Λ(α_m)‖².
/// Requires λ̄ in (0, γ / (2(1 - δ))).
DualState solve_dual_least_squares(const DualTerm& term, const Vector& y,
                                   const SolverConfig& cfg,
                                   const std::optional<Vector>& alpha0 = std::nullopt);

/// Proximal dual gradient with the quadratic-upper-bound linesearch, for any
/// catalog loss: α_{m+1} = prox_{λ_m φ2}(α_m - λ_m ∇φ1(α_m)).
DualState solve_dual_prox_grad(const DualTerm& term, const Vector& y, const LossSpec& loss,
                               const SolverConfig& cfg,
                               const std::optional<Vector>& alpha0 = std::nullopt);

} // namespace lptk
