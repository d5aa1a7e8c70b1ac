#pragma once

#include <vector>

#include "lptk/kernels.hpp"
#include "lptk/losses.hpp"
#include "lptk/solvers.hpp"

namespace lptk {

/// F(w) = γ Σ L(y_i, <Φ(x_i), w>) + (1/p) ‖w‖_p^p
double primal_objective(const FeatureOperator& phi, const Vector& w, const Vector& y,
                        const LossSpec& loss, double gamma, const Exponents& exps);

/// Λ(α) = (1/q) ‖Φ_n^* α‖_q^q + γ Σ L*(y_i, -α_i/γ)
double dual_objective(const FeatureOperator& phi, const Vector& alpha, const Vector& y,
                      const LossSpec& loss, double gamma, const Exponents& exps);

double duality_gap(const FeatureOperator& phi, const Vector& w, const Vector& alpha,
                   const Vector& y, const LossSpec& loss, double gamma, const Exponents& exps);

/// Largest per-sample violation of -α_i/γ ∈ ∂L(y_i, t_i) plus ‖w - J_q(Φ_n^* α)‖_p.
///
/// At kinks the sample term is measured on whichever side is better
/// conditioned: the distance of s_i = -α_i/γ to ∂L(y_i, t_i), or of t_i to
/// ∂L*(y_i, s_i). Both vanish exactly when the inclusion holds.
double kkt_residual(const FeatureOperator& phi, const Vector& w, const Vector& alpha,
                    const Vector& y, const LossSpec& loss, double gamma, const Exponents& exps);

/// w = J_q(Φ_n^* α)
Vector recover_primal(const FeatureOperator& phi, const Vector& alpha, double q);

struct ErrorBoundRow {
    int iter = 0;
    double primal_error = 0.0;
    double suboptimality = 0.0;
    /// (Λ(α_0) - Λ*) Π_{j<m} (1 - (2/γ) λ_j (1 - δ))
    double envelope = 0.0;
    /// [(2^p q)(Λ(α_m) + γ‖ξ‖_1)]^{(2-p)/p} ‖w_m - w̄‖_p² / (Λ(α_m) - Λ*)
    double constant = 0.0;
};

struct ErrorBoundReport {
    std::vector<ErrorBoundRow> rows;
    /// Smallest constant over iterates whose suboptimality is resolvable.
    double c_hat = 0.0;
    /// False when no iterate was resolvable (e.g. zero data).
    bool informative = false;
    bool within_envelope = true;
};

/// Needs a run recorded with record_iterates; w̄ and Λ* come from a tight solve.
ErrorBoundReport error_bound_diagnostic(const FeatureOperator& phi, const Vector& y,
                                        const LossSpec& loss, const DualState& state,
                                        const SolverConfig& cfg, double optimum,
                                        const Vector& w_bar);

} // namespace lptk
