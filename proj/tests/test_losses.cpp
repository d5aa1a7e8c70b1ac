#include <doctest.h>

#include <vector>

#include "lptk/error.hpp"
#include "lptk/losses.hpp"
#include "test_support.hpp"

using namespace lptk;
using namespace lptk::testing;

namespace {

std::vector<LossSpec> catalog() {
    return {LossSpec::square(), LossSpec::eps_insensitive(0.3), LossSpec::huber(0.8),
            LossSpec::logistic(), LossSpec::hinge()};
}

double label(const LossSpec& loss, Rng& rng) {
    return loss.margin_based() ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : 2.0 * rng.normal();
}

// A point in the interior of dom L*(y, .), at least `margin` from its edges.
double interior_dual_point(const LossSpec& loss, double y, Rng& rng, double margin = 0.05) {
    const double u = margin + (1.0 - 2.0 * margin) * rng.uniform();
    switch (loss.kind) {
    case LossKind::square: return 3.0 * rng.normal();
    case LossKind::eps_insensitive: return 2.0 * u - 1.0;
    case LossKind::huber: return loss.rho * (2.0 * u - 1.0);
    case LossKind::logistic:
    case LossKind::hinge: return -y * u;
    }
    return 0.0;
}

// α with -α/γ interior to the conjugate's domain
Vector feasible_alpha(const LossSpec& loss, const Vector& y, double gamma, Rng& rng) {
    Vector a(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) a[i] = -gamma * interior_dual_point(loss, y[i], rng);
    return a;
}

} // namespace

TEST_CASE("loss values") {
    CHECK(loss_value(LossSpec::square(), 1.0, 3.0) == 2.0);
    CHECK(loss_value(LossSpec::eps_insensitive(0.5), 1.0, 1.2) == 0.0);
    CHECK(loss_value(LossSpec::eps_insensitive(0.5), 1.0, 3.0) == doctest::Approx(1.5));
    CHECK(loss_value(LossSpec::huber(1.0), 0.0, 0.5) == doctest::Approx(0.125));
    CHECK(loss_value(LossSpec::huber(1.0), 0.0, 3.0) == doctest::Approx(2.5));
    CHECK(loss_value(LossSpec::logistic(), 1.0, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(loss_value(LossSpec::logistic(), -1.0, 800.0) == doctest::Approx(800.0));
    CHECK(loss_value(LossSpec::hinge(), 1.0, 0.25) == doctest::Approx(0.75));
    CHECK(loss_value(LossSpec::hinge(), -1.0, -3.0) == 0.0);
    CHECK_THROWS_AS(loss_value(LossSpec::hinge(), 0.5, 1.0), InvalidArgument);
    CHECK_THROWS_AS(LossSpec::eps_insensitive(0.0).validate(), InvalidArgument);
    CHECK_THROWS_AS(LossSpec::huber(-1.0).validate(), InvalidArgument);
    CHECK(parse_loss("huber") == LossKind::huber);
    CHECK_THROWS_AS(parse_loss("cubic"), InvalidArgument);
}

TEST_CASE("conjugates match a grid supremum") {
    Rng rng(31);
    for (const LossSpec& loss : catalog()) {
        for (int trial = 0; trial < 40; ++trial) {
            const double y = label(loss, rng);
            const double s = interior_dual_point(loss, y, rng);
            const auto negated = [&](double t) { return loss_value(loss, y, t) - s * t; };
            const double t_star = minimize_scalar(negated, -60.0, 60.0, 6001);
            const double oracle = -negated(t_star);
            CHECK(std::abs(conjugate_value(loss, y, s) - oracle) <= 1e-4);
        }
    }
}

TEST_CASE("conjugates are infinite outside their domain") {
    CHECK(conjugate_value(LossSpec::eps_insensitive(), 0.0, 1.5) == kInfinity);
    CHECK(conjugate_value(LossSpec::huber(0.5), 0.0, -0.6) == kInfinity);
    CHECK(conjugate_value(LossSpec::logistic(), 1.0, 0.1) == kInfinity);
    CHECK(conjugate_value(LossSpec::logistic(), 1.0, -1.1) == kInfinity);
    CHECK(conjugate_value(LossSpec::hinge(), -1.0, -0.5) == kInfinity);
    CHECK(conjugate_value(LossSpec::hinge(), -1.0, 0.5) == doctest::Approx(-0.5));
    // logistic conjugate extends continuously to the closed domain
    CHECK(conjugate_value(LossSpec::logistic(), 1.0, 0.0) == 0.0);
    CHECK(conjugate_value(LossSpec::logistic(), 1.0, -1.0) == 0.0);
}

TEST_CASE("Fenchel-Young inequality and equality on the subdifferential") {
    Rng rng(32);
    for (const LossSpec& loss : catalog()) {
        for (int trial = 0; trial < 200; ++trial) {
            const double y = label(loss, rng);
            const double t = 3.0 * rng.normal();
            const double s = interior_dual_point(loss, y, rng, 0.0);
            CHECK(loss_value(loss, y, t) + conjugate_value(loss, y, s) >= s * t - 1e-12);

            const Interval sub = loss_subdifferential(loss, y, t);
            REQUIRE_FALSE(sub.empty());
            const double pick = 0.5 * (sub.lo + sub.hi);
            CHECK(loss_value(loss, y, t) + conjugate_value(loss, y, pick) ==
                  doctest::Approx(pick * t).epsilon(1e-10));
            // the inclusion is symmetric: s ∈ ∂L(t) ⇔ t ∈ ∂L*(s)
            const Interval back = conjugate_subdifferential(loss, y, pick);
            if (!back.empty()) CHECK(back.distance(t) <= 1e-8 * std::max(1.0, std::abs(t)));
        }
    }
}

TEST_CASE("conjugate infimum matches a grid minimum") {
    Rng rng(33);
    for (const LossSpec& loss : catalog()) {
        for (int trial = 0; trial < 10; ++trial) {
            const double y = label(loss, rng);
            double lo = -20.0;
            double hi = 20.0;
            if (loss.kind == LossKind::eps_insensitive) lo = -1.0, hi = 1.0;
            if (loss.kind == LossKind::huber) lo = -loss.rho, hi = loss.rho;
            if (loss.margin_based()) lo = std::min(0.0, -y), hi = std::max(0.0, -y);
            const auto f = [&](double s) { return conjugate_value(loss, y, s); };
            const double oracle = f(minimize_scalar(f, lo, hi, 4001));
            CHECK(conjugate_infimum(loss, y) == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
    Vector y(2);
    y << 1.0, -1.0;
    CHECK(xi_vector(LossSpec::hinge(), y).isApproxToConstant(-1.0));
}

TEST_CASE("phi2 prox matches a grid oracle") {
    Rng rng(34);
    const double gamma = 2.5;
    for (const LossSpec& loss : catalog()) {
        for (int trial = 0; trial < 30; ++trial) {
            Vector y(1);
            y[0] = label(loss, rng);
            Vector v(1);
            v[0] = 4.0 * rng.normal();
            const double lambda = 0.1 + 2.0 * rng.uniform();
            const double got = phi2_prox(loss, y, v, lambda, gamma)[0];

            double lo = v[0] - 20.0;
            double hi = v[0] + 20.0;
            double weight = 0.0;
            switch (loss.kind) {
            case LossKind::eps_insensitive: lo = -gamma, hi = gamma, weight = loss.eps; break;
            case LossKind::huber: lo = -loss.rho * gamma, hi = loss.rho * gamma; break;
            case LossKind::hinge:
            case LossKind::logistic:
                lo = std::min(0.0, y[0] * gamma), hi = std::max(0.0, y[0] * gamma);
                break;
            default: break;
            }
            const auto f = [&](double u) {
                double extra = 0.0;
                if (loss.kind == LossKind::logistic) {
                    extra = gamma * conjugate_value(loss, y[0], -u / gamma);
                }
                return 0.5 * (u - v[0]) * (u - v[0]) + lambda * (weight * std::abs(u) + extra);
            };
            const double oracle = minimize_scalar(f, lo, hi, 4001);
            CHECK(std::abs(got - oracle) <= 1e-6);
        }
    }
}

TEST_CASE("dual split reassembles the conjugate sum") {
    Rng rng(35);
    const double gamma = 3.0;
    for (const LossSpec& loss : catalog()) {
        Vector y(7);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = label(loss, rng);
        const DualSplit split(loss, y, gamma);
        for (int trial = 0; trial < 10; ++trial) {
            const Vector a = feasible_alpha(loss, y, gamma, rng);
            const double total = split.smooth_value(a) + split.nonsmooth_value(a);
            CHECK(total == doctest::Approx(split.conjugate_sum(a)).epsilon(1e-10));

            const Vector fd = numeric_gradient([&](const Vector& v) { return split.smooth_value(v); },
                                               a, 1e-7);
            CHECK((split.smooth_gradient(a) - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));

            const Vector b = feasible_alpha(loss, y, gamma, rng);
            const double direct =
                split.smooth_value(b) - split.smooth_value(a) - split.smooth_gradient(a).dot(b - a);
            CHECK(std::abs(split.smooth_remainder(b - a) - direct) <=
                  1e-10 * (1.0 + std::abs(split.smooth_value(a)) + std::abs(split.smooth_value(b))));
        }
        const Vector a0 = split.initial_point();
        CHECK(std::isfinite(split.smooth_value(a0) + split.nonsmooth_value(a0)));
        CHECK(split.nonsmooth_is_zero() == (loss.kind == LossKind::square));
    }
}

TEST_CASE("dual split moduli and domain") {
    Vector y(2);
    y << 1.0, -1.0;
    const double gamma = 4.0;
    CHECK(DualSplit(LossSpec::square(), y, gamma).mu() == doctest::Approx(0.25));
    CHECK(DualSplit(LossSpec::huber(), y, gamma).mu() == doctest::Approx(0.25));
    CHECK(DualSplit(LossSpec::logistic(), y, gamma).mu() == doctest::Approx(1.0));
    CHECK(DualSplit(LossSpec::hinge(), y, gamma).mu() == 0.0);
    CHECK(DualSplit(LossSpec::eps_insensitive(), y, gamma).mu() == 0.0);

    const DualSplit logistic(LossSpec::logistic(), y, gamma);
    Vector center = logistic.initial_point();
    CHECK(center[0] == doctest::Approx(2.0));
    CHECK(center[1] == doctest::Approx(-2.0));
    Vector edge = center;
    edge[0] = gamma;
    CHECK(std::isfinite(logistic.nonsmooth_value(edge)));
    edge[0] = -0.1;
    CHECK(logistic.nonsmooth_value(edge) == kInfinity);
    // the entropy prox stays in the box even for far-out inputs
    Vector far(2);
    far << -1e6, 1e6;
    const Vector inside = logistic.prox(far, 0.5);
    CHECK(inside[0] >= 0.0);
    CHECK(inside[0] < 1e-3);
    CHECK(inside[1] <= 0.0);
    CHECK(inside[1] > -1e-3);

    const DualSplit hinge(LossSpec::hinge(), y, gamma);
    Vector outside(2);
    outside << 5.0, 0.0;
    CHECK(hinge.nonsmooth_value(outside) == kInfinity);
    const Vector projected = hinge.prox(outside, 1.0);
    CHECK(projected[0] == doctest::Approx(gamma));
    CHECK(hinge.nonsmooth_value(projected) == 0.0);
}

TEST_CASE("Fenchel-Young slack") {
    Rng rng(36);
    for (const LossSpec& loss : catalog()) {
        for (int trial = 0; trial < 200; ++trial) {
            const double y = label(loss, rng);
            const double t = 3.0 * rng.normal();
            const double s = interior_dual_point(loss, y, rng);
            const double direct = loss_value(loss, y, t) + conjugate_value(loss, y, s) - s * t;
            const double slack = fenchel_young_gap(loss, y, t, s);
            CHECK(slack >= 0.0);
            CHECK(slack == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
            // equality exactly on the subdifferential
            const Interval sub = loss_subdifferential(loss, y, t);
            const double on = std::isfinite(sub.lo) ? sub.lo : sub.hi;
            if (std::isfinite(on) && std::isfinite(conjugate_value(loss, y, on))) {
                CHECK(fenchel_young_gap(loss, y, t, on) <= 1e-12 * (1.0 + std::abs(t)));
            }
        }
        if (loss.kind == LossKind::huber || loss.kind == LossKind::eps_insensitive) {
            CHECK(fenchel_young_gap(loss, 1.0, 0.0, 5.0) == kInfinity);
        }
    }
}
