#pragma once

#include <limits>
#include <string_view>

#include "lptk/core_math.hpp"

namespace lptk {

enum class LossKind { square, eps_insensitive, huber, logistic, hinge };

/// Convex loss L(y, t). Distance-based losses (square, eps_insensitive,
/// huber) are L(y,t) = ψ(y - t) with real labels; margin-based losses
/// (logistic, hinge) are L(y,t) = ψ(yt) with labels in {-1, +1}.
struct LossSpec {
    LossKind kind = LossKind::square;
    double eps = 0.1;
    double rho = 1.0;

    static LossSpec square() { return {LossKind::square}; }
    static LossSpec eps_insensitive(double eps = 0.1) { return {LossKind::eps_insensitive, eps}; }
    static LossSpec huber(double rho = 1.0) { return {LossKind::huber, 0.1, rho}; }
    static LossSpec logistic() { return {LossKind::logistic}; }
    static LossSpec hinge() { return {LossKind::hinge}; }

    bool margin_based() const noexcept {
        return kind == LossKind::logistic || kind == LossKind::hinge;
    }
    void validate() const;
};

const char* loss_name(LossKind kind) noexcept;
/// Accepts square | hinge | logistic | eps_insensitive | huber.
LossKind parse_loss(std::string_view name);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Throws InvalidArgument when y is outside the loss's label space.
void check_label(const LossSpec& loss, double y);
void check_labels(const LossSpec& loss, const Vector& y);

double loss_value(const LossSpec& loss, double y, double t);

/// Fenchel conjugate L*(y, s) of L(y, .); +inf outside the domain.
/// Distance-based: y s + ψ*(-s). Margin-based: ψ*(y s).
double conjugate_value(const LossSpec& loss, double y, double s);

/// L(y, t) + L*(y, s) - s t, evaluated so that small values keep their
/// relative accuracy (no subtraction of the separate terms where avoidable).
double fenchel_young_gap(const LossSpec& loss, double y, double t, double s);

/// Closed interval [lo, hi], possibly unbounded; lo > hi encodes the empty set.
struct Interval {
    double lo;
    double hi;

    bool empty() const noexcept { return lo > hi; }
    double distance(double x) const noexcept;
};

/// ∂L(y, .) at t.
Interval loss_subdifferential(const LossSpec& loss, double y, double t);
/// ∂L*(y, .) at s (empty outside the domain and where the derivative blows up).
Interval conjugate_subdifferential(const LossSpec& loss, double y, double s);

/// ξ = inf_s L*(y, s).
double conjugate_infimum(const LossSpec& loss, double y);
Vector xi_vector(const LossSpec& loss, const Vector& y);

/// Proximity operator of λ φ2 for the dual split below; separable.
Vector phi2_prox(const LossSpec& loss, const Vector& y, const Vector& v, double lambda,
                 double gamma);

/// Loss-dependent part of the dual objective, γ Σ L*(y_i, -α_i/γ), split as
/// smooth + nonsmooth:
///
///   square     smooth ‖α‖²/(2γ) - <y,α>            nonsmooth 0
///   eps        smooth -<y,α>                       nonsmooth ε‖α‖₁ + ι_{γ[-1,1]^n}
///   huber      smooth ‖α‖²/(2γ) - <y,α>            nonsmooth ι_{ργ[-1,1]^n}
///   logistic   smooth 0                            nonsmooth γ Σ ψ*(-y_i α_i/γ)
///   hinge      smooth -<y,α>                       nonsmooth ι{y_i α_i ∈ [0,γ]}
///
/// The full dual is Λ = (1/q)‖Φ_n^* α‖_q^q + smooth + nonsmooth. The logistic
/// entropy goes through its prox, which never leaves the box y_i α_i ∈ [0, γ];
/// a plain gradient step stalls once some y_i α_i is pushed close to 0.
class DualSplit {
public:
    DualSplit(LossSpec loss, Vector y, double gamma);

    const LossSpec& loss() const noexcept { return loss_; }
    const Vector& labels() const noexcept { return y_; }
    double gamma() const noexcept { return gamma_; }

    double smooth_value(const Vector& alpha) const;
    /// smooth(α + step) - smooth(α) - <∇smooth(α), step>; independent of α
    /// since the smooth part is at most quadratic.
    double smooth_remainder(const Vector& step) const;
    Vector smooth_gradient(const Vector& alpha) const;
    double nonsmooth_value(const Vector& alpha) const;
    Vector prox(const Vector& v, double lambda) const;
    bool nonsmooth_is_zero() const noexcept;

    /// Strong convexity modulus of the split (0 when none).
    double mu() const noexcept;
    Vector xi() const { return xi_vector(loss_, y_); }

    /// α_0: the domain center y γ/2 for logistic, 0 otherwise.
    Vector initial_point() const;

    /// γ Σ L*(y_i, -α_i/γ) straight from conjugate_value.
    double conjugate_sum(const Vector& alpha) const;
    /// γ Σ L(y_i, t_i)
    double loss_sum(const Vector& t) const;
    /// γ Σ fenchel_young_gap(y_i, t_i, -α_i/γ): the duality gap of the pair
    /// (J_q(Φ*α), α) when t = Φ_n J_q(Φ*α).
    double gap_sum(const Vector& t, const Vector& alpha) const;

private:
    LossSpec loss_;
    Vector y_;
    double gamma_;
};

} // namespace lptk
