#pragma once

#include <Eigen/Core>

namespace lptk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Conjugate exponent pair 1/p + 1/q = 1 with p in (1, 2].
///
/// Built once and passed around; nothing downstream re-derives q from p.
/// `q_even` is set when q is an even integer >= 4, in which case q is
/// snapped to that integer exactly.
class Exponents {
public:
    static Exponents from_p(double p);
    static Exponents from_q(double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    bool q_even() const noexcept { return q_even_; }

private:
    static Exponents make(double p, double q, bool q_even);
    Exponents(double p, double q, bool q_even) : p_(p), q_(q), q_even_(q_even) {}

    double p_;
    double q_;
    bool q_even_;
};

/// sign(x)|x|^e with an exact zero short-circuit; integer e uses repeated
/// multiplication so even powers are exact.
double signed_power(double x, double e) noexcept;

/// Componentwise J_r(u) = sign(u)|u|^{r-1}, the gradient of (1/r)||u||_r^r.
/// Throws InvalidArgument on r < 1 or non-finite input.
Vector duality_map(const Vector& u, double r);

/// sum_k |w_k|^r
double power_sum(const Vector& w, double r);

/// (sum_k |w_k|^r)^{1/r}
double lp_norm(const Vector& w, double r);

/// Proximity operator of lambda * (1/r)|.|^r at x, i.e. the unique t with
/// t + lambda sign(t)|t|^{r-1} = x. Requires lambda > 0 and r in (1, 2].
double prox_power(double x, double lambda, double r);

/// Separable prox of lambda * (1/r)||.||_r^r.
Vector prox_power_vec(const Vector& x, double lambda, double r);

} // namespace lptk
