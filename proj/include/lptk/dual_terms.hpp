#pragma once

#include <cstdint>

#include "lptk/kernels.hpp"

namespace lptk {

/// The data-dependent dual term Q(α) = (1/q)‖Φ_n^* α‖_q^q.
///
/// Its gradient Φ_n J_q(Φ_n^* α) is also the vector of predictions
/// (<Φ(x_i), w(α)>)_i of the primal point w(α) = J_q(Φ_n^* α), which is what
/// lets solvers evaluate the duality gap without materializing w.
class DualTerm {
public:
    virtual ~DualTerm() = default;

    virtual Eigen::Index samples() const = 0;
    virtual double q() const = 0;
    virtual double value(const Vector& alpha) const = 0;
    virtual double value_gradient(const Vector& alpha, Vector& gradient) const = 0;

    /// Q(to) - Q(from) - <∇Q(from), to - from>, given Q(from) and ∇Q(from);
    /// stores Q(to) in to_value. Linesearch tests compare this remainder
    /// against thresholds of order ‖to - from‖², so implementations avoid
    /// subtracting values of order ‖to - from‖.
    virtual double bregman(const Vector& from, double from_value, const Vector& from_gradient,
                           const Vector& to, double& to_value) const;
};

/// Q evaluated through the matricized order-4 Gram tensor (q = 4 only).
/// Counts the multiplications spent by gradient evaluations.
class GramDualTerm final : public DualTerm {
public:
    explicit GramDualTerm(const GramTensor& gram);

    Eigen::Index samples() const override { return gram_.n(); }
    double q() const override { return 4.0; }
    double value(const Vector& alpha) const override;
    double value_gradient(const Vector& alpha, Vector& gradient) const override;
    double bregman(const Vector& from, double from_value, const Vector& from_gradient,
                   const Vector& to, double& to_value) const override;

    std::uint64_t gradient_evaluations() const noexcept { return gradient_evals_; }
    std::uint64_t gradient_multiplies() const noexcept { return gradient_mults_; }

private:
    const GramTensor& gram_;
    mutable std::uint64_t gradient_evals_ = 0;
    mutable std::uint64_t gradient_mults_ = 0;
};

/// Q evaluated through an explicit feature operator; any real q >= 2.
class FeatureDualTerm final : public DualTerm {
public:
    FeatureDualTerm(const FeatureOperator& phi, double q);

    Eigen::Index samples() const override { return phi_.samples(); }
    double q() const override { return q_; }
    double value(const Vector& alpha) const override;
    double value_gradient(const Vector& alpha, Vector& gradient) const override;
    double bregman(const Vector& from, double from_value, const Vector& from_gradient,
                   const Vector& to, double& to_value) const override;

    const FeatureOperator& features() const noexcept { return phi_; }

private:
    const FeatureOperator& phi_;
    double q_;
    // Φ_n^* α from the last value_gradient call
    mutable Vector cached_alpha_;
    mutable Vector cached_u_;
};

} // namespace lptk
