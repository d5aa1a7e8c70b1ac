#include "lptk/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lptk/error.hpp"

namespace lptk {

namespace {

void check_shapes(const FeatureOperator& phi, const Vector* w, const Vector* alpha,
                  const Vector& y) {
    if (y.size() != phi.samples()) throw InvalidArgument("label count does not match samples");
    if (w && w->size() != phi.features()) throw InvalidArgument("w has wrong length");
    if (alpha && alpha->size() != phi.samples()) throw InvalidArgument("alpha has wrong length");
}

} // namespace

double primal_objective(const FeatureOperator& phi, const Vector& w, const Vector& y,
                        const LossSpec& loss, double gamma, const Exponents& exps) {
    check_shapes(phi, &w, nullptr, y);
    const Vector t = phi.apply(w);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) sum += loss_value(loss, y[i], t[i]);
    return gamma * sum + power_sum(w, exps.p()) / exps.p();
}

double dual_objective(const FeatureOperator& phi, const Vector& alpha, const Vector& y,
                      const LossSpec& loss, double gamma, const Exponents& exps) {
    check_shapes(phi, nullptr, &alpha, y);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        sum += conjugate_value(loss, y[i], -alpha[i] / gamma);
    }
    return feature_dual_value(phi, alpha, exps.q()) + gamma * sum;
}

double duality_gap(const FeatureOperator& phi, const Vector& w, const Vector& alpha,
                   const Vector& y, const LossSpec& loss, double gamma, const Exponents& exps) {
    check_shapes(phi, &w, &alpha, y);
    // Fenchel-Young slack of the loss terms plus that of the regularizer; the
    // cross terms γ Σ s_i t_i and -<w, Φ*α> cancel exactly
    const Vector t = phi.apply(w);
    double loss_part = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        loss_part += fenchel_young_gap(loss, y[i], t[i], -alpha[i] / gamma);
    }
    const Vector u = phi.adjoint(alpha);
    const double reg_part = power_sum(w, exps.p()) / exps.p() + power_sum(u, exps.q()) / exps.q() -
                            w.dot(u);
    return gamma * loss_part + std::max(reg_part, 0.0);
}

double kkt_residual(const FeatureOperator& phi, const Vector& w, const Vector& alpha,
                    const Vector& y, const LossSpec& loss, double gamma, const Exponents& exps) {
    check_shapes(phi, &w, &alpha, y);
    const Vector t = phi.apply(w);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double s = -alpha[i] / gamma;
        const double d1 = loss_subdifferential(loss, y[i], t[i]).distance(s);
        const Interval back = conjugate_subdifferential(loss, y[i], s);
        const double d2 = back.empty() ? kInfinity : back.distance(t[i]);
        worst = std::max(worst, std::min(d1, d2));
    }
    const Vector w_alpha = recover_primal(phi, alpha, exps.q());
    return worst + lp_norm(w - w_alpha, exps.p());
}

Vector recover_primal(const FeatureOperator& phi, const Vector& alpha, double q) {
    if (alpha.size() != phi.samples()) throw InvalidArgument("alpha has wrong length");
    return duality_map(phi.adjoint(alpha), q);
}

ErrorBoundReport error_bound_diagnostic(const FeatureOperator& phi, const Vector& y,
                                        const LossSpec& loss, const DualState& state,
                                        const SolverConfig& cfg, double optimum,
                                        const Vector& w_bar) {
    const double gamma = cfg.gamma;
    const double p = cfg.exps.p();
    const double q = cfg.exps.q();
    const double xi_l1 = xi_vector(loss, y).lpNorm<1>();
    const double resolvable = 1e-9 * (1.0 + std::abs(optimum));

    ErrorBoundReport report;
    double envelope = 0.0;
    for (std::size_t m = 0; m < state.iterates.size(); ++m) {
        const Vector& alpha = state.iterates[m];
        const double value = dual_objective(phi, alpha, y, loss, gamma, cfg.exps);
        ErrorBoundRow row;
        row.iter = static_cast<int>(m);
        row.primal_error = lp_norm(recover_primal(phi, alpha, q) - w_bar, p);
        row.suboptimality = std::max(value - optimum, 0.0);
        if (m == 0) {
            envelope = row.suboptimality;
        } else if (m - 1 < state.trace.size()) {
            envelope *= 1.0 - (2.0 / gamma) * state.trace[m - 1].lambda * (1.0 - cfg.delta);
        }
        row.envelope = envelope;
        if (row.suboptimality > envelope + 1e-8 * static_cast<double>(m + 1)) {
            report.within_envelope = false;
        }
        // largest C consistent with the growth bound at this iterate
        if (row.suboptimality > resolvable && row.primal_error > 0.0) {
            const double scale =
                std::pow(std::pow(2.0, p) * q * (value + gamma * xi_l1), (2.0 - p) / p);
            row.constant = scale * row.suboptimality / (row.primal_error * row.primal_error);
            report.c_hat = report.informative ? std::min(report.c_hat, row.constant)
                                              : row.constant;
            report.informative = true;
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace lptk
