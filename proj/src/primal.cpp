#include "lptk/primal.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "lptk/error.hpp"
#include "lptk/losses.hpp"

namespace lptk {

namespace {

void check_inputs(const FeatureOperator& phi, const Vector& y, const PrimalConfig& cfg) {
    if (y.size() != phi.samples()) throw InvalidArgument("label count does not match samples");
    if (!(cfg.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (cfg.max_iter < 0) throw InvalidArgument("max_iter must be non-negative");
    if (!(cfg.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
    if (!(cfg.armijo > 0.0 && cfg.armijo < 1.0)) throw InvalidArgument("armijo must lie in (0, 1)");
}

// objective from the residual Φw - y so that trial points reuse matvecs
double objective_from(const Vector& residual, const Vector& w, double gamma, double p) {
    return 0.5 * gamma * residual.squaredNorm() + power_sum(w, p) / p;
}

bool reached(const PrimalConfig& cfg, double current, double previous) {
    if (cfg.reference_optimum) {
        const double ref = *cfg.reference_optimum;
        return (current - ref) <= cfg.tol * std::max(std::abs(ref), 1e-300);
    }
    return std::abs(previous - current) <= cfg.tol * std::max(std::abs(current), 1e-300);
}

} // namespace

double square_primal_objective(const FeatureOperator& phi, const Vector& w, const Vector& y,
                               double gamma, const Exponents& exps) {
    return objective_from(phi.apply(w) - y, w, gamma, exps.p());
}

PrimalResult primal_gd_linesearch(const FeatureOperator& phi, const Vector& y,
                                  const PrimalConfig& cfg) {
    check_inputs(phi, y, cfg);
    const double p = cfg.exps.p();
    const double gamma = cfg.gamma;

    PrimalResult out;
    Vector w = Vector::Zero(phi.features());
    Vector residual = -y;
    double objective = objective_from(residual, w, gamma, p);
    out.objectives.push_back(objective);
    double step = 1.0;
    double previous = kInfinity;

    for (int m = 0; m < cfg.max_iter; ++m) {
        if (reached(cfg, objective, previous)) {
            out.converged = true;
            break;
        }
        const Vector grad = gamma * phi.adjoint(residual) + duality_map(w, p);
        const double gnorm2 = grad.squaredNorm();
        if (gnorm2 == 0.0) {
            out.converged = true;
            break;
        }
        const Vector phi_grad = phi.apply(grad);

        step = std::min(step / cfg.theta, 1e300);
        Vector trial;
        double trial_objective = kInfinity;
        for (;;) {
            trial = w - step * grad;
            trial_objective = objective_from(residual - step * phi_grad, trial, gamma, p);
            if (objective - trial_objective >= cfg.armijo * step * gnorm2) break;
            step *= cfg.theta;
            if (step < cfg.min_step) break;
        }
        if (step < cfg.min_step) {
            out.stagnated = true;
            break;
        }
        w = std::move(trial);
        residual -= step * phi_grad;
        previous = objective;
        objective = trial_objective;
        out.objectives.push_back(objective);
        out.iterations = m + 1;
    }
    if (!out.converged && !out.stagnated && reached(cfg, objective, previous)) {
        out.converged = true;
    }
    out.w = std::move(w);
    out.objective = objective;
    return out;
}

double gram_spectral_norm(const FeatureOperator& phi, int iterations) {
    const Eigen::Index n = phi.samples();
    if (n == 0) return 0.0;
    // fixed start so the estimate is reproducible
    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double estimate = 0.0;
    for (int it = 0; it < std::max(iterations, 1); ++it) {
        const Vector u = phi.apply(phi.adjoint(v));
        const double norm = u.norm();
        if (norm == 0.0) return 0.0;
        estimate = v.dot(u);
        v = u / norm;
    }
    return std::max(estimate, phi.apply(phi.adjoint(v)).norm());
}

PrimalResult primal_fista(const FeatureOperator& phi, const Vector& y, const PrimalConfig& cfg) {
    check_inputs(phi, y, cfg);
    const double p = cfg.exps.p();
    const double gamma = cfg.gamma;

    PrimalResult out;
    out.lipschitz = cfg.lipschitz_margin * gamma * gram_spectral_norm(phi, cfg.power_iterations);
    const double inv_l = out.lipschitz > 0.0 ? 1.0 / out.lipschitz : 1.0;

    Vector w = Vector::Zero(phi.features());
    Vector phi_w = Vector::Zero(y.size());
    Vector v = w;
    Vector phi_v = phi_w;
    double t = 1.0;
    double objective = objective_from(phi_w - y, w, gamma, p);
    out.objectives.push_back(objective);
    double previous = kInfinity;

    for (int m = 0; m < cfg.max_iter; ++m) {
        if (reached(cfg, objective, previous)) {
            out.converged = true;
            break;
        }
        const Vector grad = gamma * phi.adjoint(phi_v - y);
        Vector z = prox_power_vec(v - inv_l * grad, inv_l, p);
        Vector phi_z = phi.apply(z);
        const double z_objective = objective_from(phi_z - y, z, gamma, p);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));

        previous = objective;
        if (cfg.monotone) {
            Vector w_next = z_objective <= objective ? z : w;
            Vector phi_w_next = z_objective <= objective ? phi_z : phi_w;
            const double a = t / t_next;
            const double b = (t - 1.0) / t_next;
            v = w_next + a * (z - w_next) + b * (w_next - w);
            phi_v = phi_w_next + a * (phi_z - phi_w_next) + b * (phi_w_next - phi_w);
            w = std::move(w_next);
            phi_w = std::move(phi_w_next);
            objective = std::min(objective, z_objective);
        } else {
            const double b = (t - 1.0) / t_next;
            v = z + b * (z - w);
            phi_v = phi_z + b * (phi_z - phi_w);
            w = std::move(z);
            phi_w = std::move(phi_z);
            objective = z_objective;
        }
        t = t_next;
        out.objectives.push_back(objective);
        out.iterations = m + 1;
    }
    if (!out.converged && reached(cfg, objective, previous)) out.converged = true;
    out.w = std::move(w);
    out.objective = objective;
    return out;
}

Vector ridge_dual(const FeatureOperator& phi, const Vector& y, double gamma) {
    if (y.size() != phi.samples()) throw InvalidArgument("label count does not match samples");
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    const Matrix& rows = phi.matrix();
    Matrix system = rows * rows.transpose();
    system.diagonal().array() += 1.0 / gamma;
    const Eigen::LLT<Matrix> llt(system);
    if (llt.info() != Eigen::Success) throw SolverError("ridge system is not positive definite");
    return llt.solve(y);
}

Vector ridge_closed_form(const FeatureOperator& phi, const Vector& y, double gamma) {
    return phi.adjoint(ridge_dual(phi, y, gamma));
}

} // namespace lptk
