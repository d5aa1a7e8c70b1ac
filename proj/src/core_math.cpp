#include "lptk/core_math.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lptk/error.hpp"

namespace lptk {

namespace {

constexpr double kExponentTol = 1e-12;

bool near_even_integer(double q, double& snapped) {
    const double r = std::round(q);
    if (std::abs(q - r) > kExponentTol) return false;
    if (r < 4.0 || std::fmod(r, 2.0) != 0.0) return false;
    snapped = r;
    return true;
}

} // namespace

Exponents Exponents::make(double p, double q, bool even) {
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > kExponentTol) {
        throw InvalidArgument("exponents are not conjugate: p=" + std::to_string(p) +
                              " q=" + std::to_string(q));
    }
    return {p, q, even};
}

Exponents Exponents::from_p(double p) {
    if (!std::isfinite(p) || p <= 1.0 || p > 2.0) {
        throw InvalidArgument("p must lie in (1, 2], got " + std::to_string(p));
    }
    if (p == 2.0) return make(2.0, 2.0, false);
    double q = p / (p - 1.0);
    double snapped = 0.0;
    if (near_even_integer(q, snapped)) {
        return make(snapped / (snapped - 1.0), snapped, true);
    }
    return make(p, q, false);
}

Exponents Exponents::from_q(double q) {
    if (!std::isfinite(q) || q < 2.0) {
        throw InvalidArgument("q must be >= 2, got " + std::to_string(q));
    }
    double snapped = 0.0;
    const bool even = near_even_integer(q, snapped);
    if (even) q = snapped;
    if (q == 2.0) return make(2.0, 2.0, false);
    return make(q / (q - 1.0), q, even);
}

double signed_power(double x, double e) noexcept {
    if (x == 0.0) return 0.0;
    const double a = std::abs(x);
    double mag;
    if (e == std::floor(e) && e >= 0.0 && e <= 64.0) {
        // exact for small integer exponents
        mag = 1.0;
        double base = a;
        auto k = static_cast<unsigned>(e);
        while (k) {
            if (k & 1u) mag *= base;
            base *= base;
            k >>= 1u;
        }
    } else {
        mag = std::exp(e * std::log(a));
    }
    return x < 0.0 ? -mag : mag;
}

Vector duality_map(const Vector& u, double r) {
    if (!(r >= 1.0)) throw InvalidArgument("duality map exponent must be >= 1");
    if (!u.allFinite()) throw InvalidArgument("duality map input is not finite");
    const double e = r - 1.0;
    Vector v(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) v[k] = signed_power(u[k], e);
    return v;
}

double power_sum(const Vector& w, double r) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        s += std::abs(signed_power(w[k], r));
    }
    return s;
}

double lp_norm(const Vector& w, double r) {
    if (!(r >= 1.0)) throw InvalidArgument("norm exponent must be >= 1");
    if (!w.allFinite()) throw InvalidArgument("norm input is not finite");
    const double m = w.cwiseAbs().maxCoeff();
    if (w.size() == 0 || m == 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        s += std::abs(signed_power(w[k] / m, r));
    }
    return m * std::pow(s, 1.0 / r);
}

double prox_power(double x, double lambda, double r) {
    if (!(lambda > 0.0)) throw InvalidArgument("prox_power needs lambda > 0");
    if (!(r > 1.0 && r <= 2.0)) throw InvalidArgument("prox_power needs r in (1, 2]");
    const double a = std::abs(x);
    if (a == 0.0) return 0.0;
    if (r == 2.0) return x / (1.0 + lambda);

    // g(t) = t + lambda t^{r-1} - a is increasing and concave on [0, a]
    const double e = r - 1.0;
    auto g = [&](double t) { return t + lambda * signed_power(t, e) - a; };

    double lo = 0.0;
    double hi = std::min(a, std::pow(a / lambda, 1.0 / e));
    const double tol = std::max(1e-14, 4.0 * std::numeric_limits<double>::epsilon() * a);
    double t = hi;
    for (int it = 0; it < 200; ++it) {
        const double gt = g(t);
        if (std::abs(gt) <= tol) break;
        if (gt < 0.0) lo = t; else hi = t;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
        const double dg = 1.0 + lambda * e * signed_power(t, e - 1.0);
        double next = t - gt / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    return x < 0.0 ? -t : t;
}

Vector prox_power_vec(const Vector& x, double lambda, double r) {
    Vector t(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) t[k] = prox_power(x[k], lambda, r);
    return t;
}

} // namespace lptk
