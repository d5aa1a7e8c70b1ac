#pragma once

#include <optional>
#include <vector>

#include "lptk/core_math.hpp"
#include "lptk/kernels.hpp"

namespace lptk {

/// Primal baselines for the square loss:
///   F(w) = (γ/2) ‖Φ_n w - y‖² + (1/p) ‖w‖_p^p
struct PrimalConfig {
    double gamma = 1.0;
    Exponents exps = Exponents::from_q(4.0);
    int max_iter = 5000;
    /// Stop when (F(w_m) - F*) / |F*| <= tol, or, without a reference, when
    /// the relative objective change falls below tol.
    double tol = 1e-8;
    std::optional<double> reference_optimum;
    /// Armijo constant c in F(w) - F(w - t g) >= c t ‖g‖².
    double armijo = 1e-4;
    double theta = 0.5;
    double min_step = 1e-16;
    /// FISTA: keep the best of the prox point and the previous iterate.
    bool monotone = true;
    int power_iterations = 50;
    /// Multiplier on the power-method estimate of the Lipschitz constant.
    double lipschitz_margin = 1.02;
};

struct PrimalResult {
    Vector w;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Gradient descent only: the accepted step fell below min_step.
    bool stagnated = false;
    double lipschitz = 0.0;
    /// F(w_m) for m = 0..iterations
    std::vector<double> objectives;
};

double square_primal_objective(const FeatureOperator& phi, const Vector& w, const Vector& y,
                               double gamma, const Exponents& exps);

PrimalResult primal_gd_linesearch(const FeatureOperator& phi, const Vector& y,
                                  const PrimalConfig& cfg);

PrimalResult primal_fista(const FeatureOperator& phi, const Vector& y, const PrimalConfig& cfg);

/// Largest eigenvalue of Φ_n Φ_n^* by power iteration.
double gram_spectral_norm(const FeatureOperator& phi, int iterations);

/// Minimizer of (γ/2) ‖Φ_n w - y‖² + (1/2) ‖w‖²: w = Φ_n^* α with
/// (Φ_n Φ_n^* + I/γ) α = y.
Vector ridge_closed_form(const FeatureOperator& phi, const Vector& y, double gamma);
/// The α of the same system.
Vector ridge_dual(const FeatureOperator& phi, const Vector& y, double gamma);

} // namespace lptk
