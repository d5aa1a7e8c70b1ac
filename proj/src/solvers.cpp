#include "lptk/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "lptk/error.hpp"

namespace lptk {

namespace {

constexpr double kCertificateSlack = 1e-8;

class Stopwatch {
public:
    std::int64_t elapsed_ns() const {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void check_common(const DualTerm& term, const Vector& y, const SolverConfig& cfg) {
    if (!(cfg.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
    if (!(cfg.lambda_bar > 0.0)) throw InvalidArgument("lambda_bar must be positive");
    if (cfg.max_iter < 0) throw InvalidArgument("max_iter must be non-negative");
    if (!(cfg.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (y.size() != term.samples()) throw InvalidArgument("label count does not match samples");
    if (std::abs(term.q() - cfg.exps.q()) > 1e-12) {
        throw InvalidArgument("dual term exponent q=" + std::to_string(term.q()) +
                              " does not match configured q=" + std::to_string(cfg.exps.q()));
    }
}

Vector starting_point(const std::optional<Vector>& alpha0, const Vector& fallback) {
    if (!alpha0) return fallback;
    if (alpha0->size() != fallback.size()) throw InvalidArgument("alpha0 has wrong length");
    if (!alpha0->allFinite()) throw InvalidArgument("alpha0 is not finite");
    return *alpha0;
}

double reference_for_certificate(const DualTerm& term, const Vector& y, const SolverConfig& cfg,
                                 const std::optional<Vector>& alpha0) {
    if (cfg.reference_optimum) return *cfg.reference_optimum;
    SolverConfig pilot = cfg;
    pilot.check_certificate = false;
    pilot.record_iterates = false;
    pilot.tol = 1e-12;
    pilot.max_iter = std::max(cfg.max_iter, 100000);
    return solve_dual_least_squares(term, y, pilot, alpha0).objective;
}

void finish(DualState& state, const IterationRecord& last) {
    state.objective = last.objective;
    state.gap = last.gap;
    state.grad_norm = last.grad_norm;
}

} // namespace

SolverConfig SolverConfig::least_squares(double gamma, Exponents exps) {
    SolverConfig cfg;
    cfg.gamma = gamma;
    cfg.exps = exps;
    cfg.delta = 0.9;
    cfg.theta = 0.5;
    cfg.lambda_bar = 0.99 * gamma / (2.0 * (1.0 - cfg.delta));
    return cfg;
}

SolverConfig SolverConfig::proximal(double gamma, Exponents exps) {
    SolverConfig cfg;
    cfg.gamma = gamma;
    cfg.exps = exps;
    cfg.delta = 0.5;
    cfg.theta = 0.5;
    cfg.lambda_bar = 1.0;
    return cfg;
}

DualState solve_dual_least_squares(const DualTerm& term, const Vector& y, const SolverConfig& cfg,
                                   const std::optional<Vector>& alpha0) {
    check_common(term, y, cfg);
    const double gamma = cfg.gamma;
    const double q = cfg.exps.q();
    if (!(cfg.lambda_bar < gamma / (2.0 * (1.0 - cfg.delta)))) {
        throw InvalidArgument("lambda_bar must lie in (0, gamma / (2 (1 - delta)))");
    }
    const double optimum = cfg.check_certificate
                               ? reference_for_certificate(term, y, cfg, alpha0)
                               : 0.0;

    auto lambda_of = [&](const Vector& a, double qv) {
        return qv + a.squaredNorm() / (2.0 * gamma) - y.dot(a);
    };

    Stopwatch clock;
    DualState state;
    Vector alpha = starting_point(alpha0, Vector::Zero(y.size()));
    Vector omega;
    double qv = term.value_gradient(alpha, omega);
    double objective = lambda_of(alpha, qv);
    if (!std::isfinite(objective)) throw DivergenceError("dual objective is not finite at alpha_0");

    state.lambda_min = kInfinity;
    for (int m = 0;; ++m) {
        if (cfg.record_iterates) state.iterates.push_back(alpha);
        const Vector grad = omega - y + alpha / gamma;
        const double gnorm2 = grad.squaredNorm();
        // primal value of w(α) = J_q(Φ*α): its predictions are ω, ‖w‖_p^p = q Q
        const double primal = 0.5 * gamma * (y - omega).squaredNorm() + (q - 1.0) * qv;

        IterationRecord rec;
        rec.iter = m;
        rec.objective = objective;
        rec.grad_norm = std::sqrt(gnorm2);
        // primal + objective collapses to γ/2 ‖∇Λ‖² for the square loss
        rec.gap = 0.5 * gamma * gnorm2;
        state.primal_value = primal;

        if (rec.gap <= cfg.tol * (1.0 + std::abs(primal)) || gnorm2 == 0.0) {
            state.converged = true;
        }
        if (state.converged || m >= cfg.max_iter) {
            rec.wall_ns = clock.elapsed_ns();
            state.trace.push_back(rec);
            finish(state, rec);
            break;
        }

        double lambda = cfg.lambda_bar;
        int backtracks = 0;
        Vector trial;
        double trial_q = 0.0;
        double trial_objective = 0.0;
        for (;;) {
            trial = alpha - lambda * grad;
            const double remainder = term.bregman(alpha, qv, omega, trial, trial_q);
            trial_objective = lambda_of(trial, trial_q);
            const Vector step = trial - alpha;
            // Λ(trial) - Λ(α) = remainder + <∇Λ, step> + ‖step‖²/(2γ)
            const double decrease =
                -(remainder + grad.dot(step) + step.squaredNorm() / (2.0 * gamma));
            if (std::isfinite(trial_objective) &&
                decrease >= lambda * (1.0 - cfg.delta) * gnorm2) {
                break;
            }
            lambda *= cfg.theta;
            if (++backtracks > cfg.max_backtracks) {
                throw StagnationError("linesearch exhausted " + std::to_string(cfg.max_backtracks) +
                                      " backtracks at iteration " + std::to_string(m));
            }
        }

        if (cfg.check_certificate) {
            const double factor = 1.0 - (2.0 / gamma) * lambda * (1.0 - cfg.delta);
            if (trial_objective - optimum > factor * (objective - optimum) + kCertificateSlack) {
                throw CertificateError("geometric decay certificate violated at iteration " +
                                       std::to_string(m));
            }
        }

        rec.lambda = lambda;
        rec.backtracks = backtracks;
        rec.wall_ns = clock.elapsed_ns();
        state.trace.push_back(rec);
        state.lambda_last = lambda;
        state.lambda_min = std::min(state.lambda_min, lambda);
        state.linesearch_backtracks += backtracks;
        state.iterations = m + 1;

        alpha = std::move(trial);
        qv = term.value_gradient(alpha, omega);
        objective = lambda_of(alpha, qv);
        if (!std::isfinite(objective)) throw DivergenceError("dual objective became non-finite");
    }
    if (state.iterations == 0) state.lambda_min = 0.0;
    state.alpha = std::move(alpha);
    return state;
}

DualState solve_dual_prox_grad(const DualTerm& term, const Vector& y, const LossSpec& loss,
                               const SolverConfig& cfg, const std::optional<Vector>& alpha0) {
    check_common(term, y, cfg);
    const DualSplit split(loss, y, cfg.gamma);
    const double q = cfg.exps.q();
    const bool certify = cfg.check_certificate && loss.kind == LossKind::square;
    double optimum = 0.0;
    if (certify) {
        SolverConfig ls = cfg;
        optimum = reference_for_certificate(term, y, ls, alpha0);
    }

    Stopwatch clock;
    DualState state;
    Vector alpha = starting_point(alpha0, split.initial_point());
    if (!std::isfinite(split.nonsmooth_value(alpha))) {
        alpha = split.prox(alpha, 1.0);
    }

    Vector omega;
    double qv = term.value_gradient(alpha, omega);
    double phi1 = qv + split.smooth_value(alpha);
    double phi2 = split.nonsmooth_value(alpha);
    if (!std::isfinite(phi1 + phi2)) throw DivergenceError("dual objective is not finite at alpha_0");

    state.lambda_min = kInfinity;
    for (int m = 0;; ++m) {
        if (cfg.record_iterates) state.iterates.push_back(alpha);
        const Vector grad = omega + split.smooth_gradient(alpha);
        const double objective = phi1 + phi2;
        const double primal = split.loss_sum(omega) + (q - 1.0) * qv;

        IterationRecord rec;
        rec.iter = m;
        rec.objective = objective;
        // norm of the unit-step prox-gradient map; ‖∇Λ‖ when φ2 = 0
        rec.grad_norm = (alpha - split.prox(alpha - grad, 1.0)).norm();
        rec.gap = split.gap_sum(omega, alpha);
        state.primal_value = primal;

        if (rec.gap <= cfg.tol * (1.0 + std::abs(primal)) || rec.grad_norm == 0.0) {
            state.converged = true;
        }
        if (state.converged || m >= cfg.max_iter) {
            rec.wall_ns = clock.elapsed_ns();
            state.trace.push_back(rec);
            finish(state, rec);
            break;
        }

        double lambda = cfg.lambda_bar;
        int backtracks = 0;
        Vector trial;
        double trial_phi1 = 0.0;
        for (;;) {
            trial = split.prox(alpha - lambda * grad, lambda);
            const Vector step = trial - alpha;
            double trial_q = 0.0;
            const double remainder = term.bregman(alpha, qv, omega, trial, trial_q) +
                                     split.smooth_remainder(step);
            trial_phi1 = trial_q + split.smooth_value(trial);
            if (std::isfinite(trial_phi1) && std::isfinite(remainder) &&
                remainder <= (cfg.delta / lambda) * step.squaredNorm()) {
                break;
            }
            lambda *= cfg.theta;
            if (++backtracks > cfg.max_backtracks) {
                throw StagnationError("linesearch exhausted " + std::to_string(cfg.max_backtracks) +
                                      " backtracks at iteration " + std::to_string(m));
            }
        }

        if (certify) {
            const double factor = 1.0 - (2.0 / cfg.gamma) * lambda * (1.0 - cfg.delta);
            const double next = trial_phi1 + split.nonsmooth_value(trial);
            if (next - optimum > factor * (objective - optimum) + kCertificateSlack) {
                throw CertificateError("geometric decay certificate violated at iteration " +
                                       std::to_string(m));
            }
        }

        rec.lambda = lambda;
        rec.backtracks = backtracks;
        rec.wall_ns = clock.elapsed_ns();
        state.trace.push_back(rec);
        state.lambda_last = lambda;
        state.lambda_min = std::min(state.lambda_min, lambda);
        state.linesearch_backtracks += backtracks;
        state.iterations = m + 1;

        alpha = std::move(trial);
        qv = term.value_gradient(alpha, omega);
        phi1 = qv + split.smooth_value(alpha);
        phi2 = split.nonsmooth_value(alpha);
        if (!std::isfinite(phi1 + phi2)) throw DivergenceError("dual objective became non-finite");
    }
    if (state.iterations == 0) state.lambda_min = 0.0;
    state.alpha = std::move(alpha);
    return state;
}

} // namespace lptk
