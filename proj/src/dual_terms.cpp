#include "lptk/dual_terms.hpp"

#include <cmath>
#include <limits>

#include "lptk/error.hpp"

namespace lptk {

double DualTerm::bregman(const Vector& from, double from_value, const Vector& from_gradient,
                         const Vector& to, double& to_value) const {
    to_value = value(to);
    return to_value - from_value - from_gradient.dot(to - from);
}

GramDualTerm::GramDualTerm(const GramTensor& gram) : gram_(gram) {
    if (gram_.kernel().arity != 4) throw UnsupportedArity("Gram dual term needs arity 4");
}

double GramDualTerm::value(const Vector& alpha) const {
    return quartic_terms(gram_, alpha).value;
}

double GramDualTerm::value_gradient(const Vector& alpha, Vector& gradient) const {
    auto terms = quartic_terms(gram_, alpha);
    ++gradient_evals_;
    gradient_mults_ += terms.multiplies;
    gradient = std::move(terms.gradient);
    return terms.value;
}

double GramDualTerm::bregman(const Vector& from, double from_value, const Vector& from_gradient,
                             const Vector& to, double& to_value) const {
    // Q(α + s) - Q(α) - <∇Q(α), s> = (3/2) K[α,α,s,s] + K[α,s,s,s] + (1/4) K[s,s,s,s]
    const Vector s = to - from;
    const Matrix v = quartic_contraction(gram_, s);
    const Vector vs = v * s;
    const double remainder = 1.5 * from.dot(v * from) + from.dot(vs) + 0.25 * s.dot(vs);
    to_value = from_value + from_gradient.dot(s) + remainder;
    return remainder;
}

FeatureDualTerm::FeatureDualTerm(const FeatureOperator& phi, double q) : phi_(phi), q_(q) {
    if (!(q >= 2.0)) throw InvalidArgument("feature dual term needs q >= 2");
}

double FeatureDualTerm::value(const Vector& alpha) const {
    const Vector u = phi_.adjoint(alpha);
    if (!u.allFinite()) return std::numeric_limits<double>::infinity();
    return power_sum(u, q_) / q_;
}

double FeatureDualTerm::value_gradient(const Vector& alpha, Vector& gradient) const {
    cached_alpha_ = alpha;
    cached_u_ = phi_.adjoint(alpha);
    gradient = phi_.apply(duality_map(cached_u_, q_));
    return power_sum(cached_u_, q_) / q_;
}

namespace {

// |u+δ|^q/q - |u|^q/q - J_q(u) δ for one coordinate
double power_remainder(double u, double delta, double q) {
    const double a = std::abs(u);
    if (a == 0.0) return std::pow(std::abs(delta), q) / q;
    const double r = std::copysign(1.0, u) * delta / a;
    if (std::abs(r) < 0.25) {
        // |u|^q/q Σ_{k>=2} binom(q, k) r^k
        double coeff = q * (q - 1.0) / 2.0;
        double power = r * r;
        double sum = 0.0;
        for (int k = 2; k < 200; ++k) {
            const double term = coeff * power;
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
            coeff *= (q - k) / (k + 1.0);
            power *= r;
        }
        return std::pow(a, q) / q * sum;
    }
    return (std::pow(std::abs(u + delta), q) - std::pow(a, q)) / q - signed_power(u, q - 1.0) * delta;
}

} // namespace

double FeatureDualTerm::bregman(const Vector& from, double, const Vector&, const Vector& to,
                                double& to_value) const {
    const Vector u = (cached_alpha_.size() == from.size() && cached_alpha_ == from)
                         ? cached_u_
                         : phi_.adjoint(from);
    // Φ_n^* (to - from) is small and accurate; Φ_n^* to on its own would carry
    // rounding of the size of Φ_n^* from
    const Vector delta = phi_.adjoint(to - from);
    const Vector v = u + delta;
    if (!v.allFinite()) {
        to_value = std::numeric_limits<double>::infinity();
        return to_value;
    }
    to_value = power_sum(v, q_) / q_;
    double remainder = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        if (delta[j] != 0.0) remainder += power_remainder(u[j], delta[j], q_);
    }
    return remainder;
}

} // namespace lptk
