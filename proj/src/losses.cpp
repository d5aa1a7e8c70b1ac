#include "lptk/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lptk/error.hpp"

namespace lptk {

namespace {

constexpr double kNegInfinity = -kInfinity;

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

Interval point(double x) { return {x, x}; }
Interval nothing() { return {kInfinity, kNegInfinity}; }

Interval scaled(const Interval& iv, double y) {
    if (iv.empty() || y > 0) return iv;
    return {-iv.hi, -iv.lo};
}

Interval shifted(const Interval& iv, double c) {
    if (iv.empty()) return iv;
    return {iv.lo + c, iv.hi + c};
}

// ψ for each family; r is y - t (distance) or y t (margin)
double psi(const LossSpec& loss, double r) {
    switch (loss.kind) {
    case LossKind::square: return 0.5 * r * r;
    case LossKind::eps_insensitive: return std::max(std::abs(r) - loss.eps, 0.0);
    case LossKind::huber: {
        const double a = std::abs(r);
        return a <= loss.rho ? 0.5 * r * r : loss.rho * a - 0.5 * loss.rho * loss.rho;
    }
    case LossKind::logistic:
        return r > 0 ? std::log1p(std::exp(-r)) : -r + std::log1p(std::exp(r));
    case LossKind::hinge: return std::max(1.0 - r, 0.0);
    }
    return kInfinity;
}

double psi_conjugate(const LossSpec& loss, double u) {
    switch (loss.kind) {
    case LossKind::square: return 0.5 * u * u;
    case LossKind::eps_insensitive: return std::abs(u) <= 1.0 ? loss.eps * std::abs(u) : kInfinity;
    case LossKind::huber: return std::abs(u) <= loss.rho ? 0.5 * u * u : kInfinity;
    case LossKind::logistic:
        if (u == -1.0 || u == 0.0) return 0.0;
        if (u > -1.0 && u < 0.0) return (1.0 + u) * std::log1p(u) - u * std::log(-u);
        return kInfinity;
    case LossKind::hinge: return (u >= -1.0 && u <= 0.0) ? u : kInfinity;
    }
    return kInfinity;
}

Interval psi_subdifferential(const LossSpec& loss, double r) {
    switch (loss.kind) {
    case LossKind::square: return point(r);
    case LossKind::eps_insensitive:
        if (r > loss.eps) return point(1.0);
        if (r < -loss.eps) return point(-1.0);
        if (r == loss.eps) return {0.0, 1.0};
        if (r == -loss.eps) return {-1.0, 0.0};
        return point(0.0);
    case LossKind::huber: return point(clip(r, -loss.rho, loss.rho));
    case LossKind::logistic: return point(-1.0 / (1.0 + std::exp(r)));
    case LossKind::hinge:
        if (r < 1.0) return point(-1.0);
        if (r > 1.0) return point(0.0);
        return {-1.0, 0.0};
    }
    return nothing();
}

Interval psi_conjugate_subdifferential(const LossSpec& loss, double u) {
    switch (loss.kind) {
    case LossKind::square: return point(u);
    case LossKind::eps_insensitive:
        if (std::abs(u) > 1.0) return nothing();
        if (u == 1.0) return {loss.eps, kInfinity};
        if (u == -1.0) return {kNegInfinity, -loss.eps};
        if (u == 0.0) return {-loss.eps, loss.eps};
        return point(u > 0 ? loss.eps : -loss.eps);
    case LossKind::huber:
        if (std::abs(u) > loss.rho) return nothing();
        if (u == loss.rho) return {loss.rho, kInfinity};
        if (u == -loss.rho) return {kNegInfinity, -loss.rho};
        return point(u);
    case LossKind::logistic:
        if (u > -1.0 && u < 0.0) return point(std::log1p(u) - std::log(-u));
        return nothing();
    case LossKind::hinge:
        if (u < -1.0 || u > 0.0) return nothing();
        if (u == 0.0) return {1.0, kInfinity};
        if (u == -1.0) return {kNegInfinity, 1.0};
        return point(1.0);
    }
    return nothing();
}

} // namespace

void LossSpec::validate() const {
    if (kind == LossKind::eps_insensitive && !(eps > 0.0)) {
        throw InvalidArgument("eps-insensitive loss needs eps > 0");
    }
    if (kind == LossKind::huber && !(rho > 0.0)) throw InvalidArgument("Huber loss needs rho > 0");
}

const char* loss_name(LossKind kind) noexcept {
    switch (kind) {
    case LossKind::square: return "square";
    case LossKind::eps_insensitive: return "eps_insensitive";
    case LossKind::huber: return "huber";
    case LossKind::logistic: return "logistic";
    case LossKind::hinge: return "hinge";
    }
    return "unknown";
}

LossKind parse_loss(std::string_view name) {
    if (name == "square") return LossKind::square;
    if (name == "eps_insensitive") return LossKind::eps_insensitive;
    if (name == "huber") return LossKind::huber;
    if (name == "logistic") return LossKind::logistic;
    if (name == "hinge") return LossKind::hinge;
    throw InvalidArgument("unknown loss '" + std::string(name) + "'");
}

void check_label(const LossSpec& loss, double y) {
    if (!std::isfinite(y)) throw InvalidArgument("label is not finite");
    if (loss.margin_based() && y != 1.0 && y != -1.0) {
        throw InvalidArgument(std::string(loss_name(loss.kind)) + " loss needs labels in {-1, +1}");
    }
}

void check_labels(const LossSpec& loss, const Vector& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i) check_label(loss, y[i]);
}

double loss_value(const LossSpec& loss, double y, double t) {
    check_label(loss, y);
    return loss.margin_based() ? psi(loss, y * t) : psi(loss, y - t);
}

double conjugate_value(const LossSpec& loss, double y, double s) {
    if (loss.margin_based()) return psi_conjugate(loss, y * s);
    const double c = psi_conjugate(loss, -s);
    return std::isinf(c) ? kInfinity : y * s + c;
}

double Interval::distance(double x) const noexcept {
    if (empty()) return kInfinity;
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
}

Interval loss_subdifferential(const LossSpec& loss, double y, double t) {
    if (loss.margin_based()) return scaled(psi_subdifferential(loss, y * t), y);
    // d/dt ψ(y - t) = -ψ'(y - t)
    return scaled(psi_subdifferential(loss, y - t), -1.0);
}

Interval conjugate_subdifferential(const LossSpec& loss, double y, double s) {
    if (loss.margin_based()) return scaled(psi_conjugate_subdifferential(loss, y * s), y);
    // d/ds [y s + ψ*(-s)] = y - ψ*'(-s)
    return shifted(scaled(psi_conjugate_subdifferential(loss, -s), -1.0), y);
}

double conjugate_infimum(const LossSpec& loss, double y) {
    check_label(loss, y);
    switch (loss.kind) {
    case LossKind::square: return -0.5 * y * y;
    case LossKind::eps_insensitive: return -std::max(std::abs(y) - loss.eps, 0.0);
    case LossKind::huber:
        return std::abs(y) <= loss.rho ? -0.5 * y * y
                                       : -loss.rho * std::abs(y) + 0.5 * loss.rho * loss.rho;
    case LossKind::logistic: return -std::log(2.0);
    case LossKind::hinge: return -1.0;
    }
    return kNegInfinity;
}

Vector xi_vector(const LossSpec& loss, const Vector& y) {
    Vector xi(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) xi[i] = conjugate_infimum(loss, y[i]);
    return xi;
}

namespace {

// argmin_s ½(s - v)² + c h(s) over [0, 1], h(s) = s log s + (1 - s) log(1 - s).
// In z = logit(s) the optimality condition σ(z) - v + c z = 0 is increasing
// in z with the root inside [(v - 1)/c, v/c].
double entropy_prox(double v, double c) {
    if (c == 0.0) return clip(v, 0.0, 1.0);
    const auto sigmoid = [](double z) {
        return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    };
    double lo = (v - 1.0) / c;
    double hi = v / c;
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() *
                                               std::max(1.0, std::abs(z));
         ++it) {
        const double sz = sigmoid(z);
        const double f = sz - v + c * z;
        if (f == 0.0) return sz;
        (f > 0.0 ? hi : lo) = z;
        const double newton = z - f / (sz * (1.0 - sz) + c);
        z = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    return sigmoid(z);
}

} // namespace

Vector phi2_prox(const LossSpec& loss, const Vector& y, const Vector& v, double lambda,
                 double gamma) {
    if (y.size() != v.size()) throw InvalidArgument("phi2_prox: size mismatch");
    if (!(lambda >= 0.0) || !(gamma > 0.0)) throw InvalidArgument("phi2_prox: bad lambda/gamma");
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v[i];
        switch (loss.kind) {
        case LossKind::square: out[i] = x; break;
        case LossKind::logistic:
            out[i] = y[i] * gamma * entropy_prox(y[i] * x / gamma, lambda / gamma);
            break;
        case LossKind::eps_insensitive: {
            const double shrunk = std::copysign(std::max(std::abs(x) - lambda * loss.eps, 0.0), x);
            out[i] = clip(shrunk, -gamma, gamma);
            break;
        }
        case LossKind::huber: out[i] = clip(x, -loss.rho * gamma, loss.rho * gamma); break;
        case LossKind::hinge: out[i] = y[i] * clip(y[i] * x, 0.0, gamma); break;
        }
    }
    return out;
}

double fenchel_young_gap(const LossSpec& loss, double y, double t, double s) {
    check_label(loss, y);
    // in ψ coordinates: ψ(r) + ψ*(v) - v r
    const bool margin = loss.margin_based();
    const double r = margin ? y * t : y - t;
    const double v = margin ? y * s : -s;
    switch (loss.kind) {
    case LossKind::square: return 0.5 * (r - v) * (r - v);
    case LossKind::huber: {
        if (std::abs(v) > loss.rho) return kInfinity;
        if (std::abs(r) <= loss.rho) return 0.5 * (r - v) * (r - v);
        const double slack = loss.rho - (r > 0.0 ? v : -v);
        return 0.5 * slack * slack + slack * (std::abs(r) - loss.rho);
    }
    case LossKind::eps_insensitive:
    case LossKind::logistic:
    case LossKind::hinge: {
        const double c = psi_conjugate(loss, v);
        if (std::isinf(c)) return kInfinity;
        return std::max(psi(loss, r) + c - v * r, 0.0);
    }
    }
    return kInfinity;
}

DualSplit::DualSplit(LossSpec loss, Vector y, double gamma)
    : loss_(loss), y_(std::move(y)), gamma_(gamma) {
    loss_.validate();
    if (!(gamma_ > 0.0)) throw InvalidArgument("gamma must be positive");
    check_labels(loss_, y_);
}

double DualSplit::smooth_value(const Vector& alpha) const {
    switch (loss_.kind) {
    case LossKind::square:
    case LossKind::huber: return alpha.squaredNorm() / (2.0 * gamma_) - y_.dot(alpha);
    case LossKind::eps_insensitive:
    case LossKind::hinge: return -y_.dot(alpha);
    case LossKind::logistic: return 0.0;
    }
    return kInfinity;
}

double DualSplit::smooth_remainder(const Vector& step) const {
    switch (loss_.kind) {
    case LossKind::square:
    case LossKind::huber: return step.squaredNorm() / (2.0 * gamma_);
    case LossKind::eps_insensitive:
    case LossKind::hinge:
    case LossKind::logistic: return 0.0;
    }
    return kInfinity;
}

Vector DualSplit::smooth_gradient(const Vector& alpha) const {
    switch (loss_.kind) {
    case LossKind::square:
    case LossKind::huber: return alpha / gamma_ - y_;
    case LossKind::eps_insensitive:
    case LossKind::hinge: return -y_;
    case LossKind::logistic: return Vector::Zero(alpha.size());
    }
    return Vector::Constant(alpha.size(), kInfinity);
}

double DualSplit::nonsmooth_value(const Vector& alpha) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        switch (loss_.kind) {
        case LossKind::square: break;
        case LossKind::logistic: s += gamma_ * psi_conjugate(loss_, -y_[i] * a / gamma_); break;
        case LossKind::eps_insensitive:
            if (std::abs(a) > gamma_) return kInfinity;
            s += loss_.eps * std::abs(a);
            break;
        case LossKind::huber:
            if (std::abs(a) > loss_.rho * gamma_) return kInfinity;
            break;
        case LossKind::hinge: {
            const double m = y_[i] * a;
            if (m < 0.0 || m > gamma_) return kInfinity;
            break;
        }
        }
    }
    return s;
}

Vector DualSplit::prox(const Vector& v, double lambda) const {
    return phi2_prox(loss_, y_, v, lambda, gamma_);
}

bool DualSplit::nonsmooth_is_zero() const noexcept {
    return loss_.kind == LossKind::square;
}

double DualSplit::mu() const noexcept {
    switch (loss_.kind) {
    case LossKind::square:
    case LossKind::huber: return 1.0 / gamma_;
    case LossKind::logistic: return 4.0 / gamma_;
    case LossKind::eps_insensitive:
    case LossKind::hinge: return 0.0;
    }
    return 0.0;
}

Vector DualSplit::initial_point() const {
    if (loss_.kind == LossKind::logistic) return y_ * (gamma_ / 2.0);
    return Vector::Zero(y_.size());
}

double DualSplit::conjugate_sum(const Vector& alpha) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        s += conjugate_value(loss_, y_[i], -alpha[i] / gamma_);
    }
    return gamma_ * s;
}

double DualSplit::loss_sum(const Vector& t) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) s += loss_value(loss_, y_[i], t[i]);
    return gamma_ * s;
}

double DualSplit::gap_sum(const Vector& t, const Vector& alpha) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        s += fenchel_young_gap(loss_, y_[i], t[i], -alpha[i] / gamma_);
    }
    return gamma_ * s;
}

} // namespace lptk
