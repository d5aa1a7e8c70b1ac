#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "lptk/core_math.hpp"
#include "lptk/random.hpp"

namespace lptk::testing {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
    }
    return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
    return v;
}

inline Vector random_signs(Rng& rng, Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return v;
}

inline double relative_difference(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double relative_difference(const Vector& a, const Vector& b) {
    const double scale = std::max({1.0, a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>()});
    return (a - b).lpNorm<Eigen::Infinity>() / scale;
}

/// Central differences of f at x.
inline Vector numeric_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                               double h = 1e-6) {
    Vector g(x.size());
    Vector xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        const double fp = f(xp);
        xp[i] = x[i] - step;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

/// Minimizer of a convex scalar function on [lo, hi]: a coarse grid pass
/// followed by golden-section refinement around the best grid point.
inline double minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              int grid = 2001) {
    double best = lo;
    double best_value = f(lo);
    const double h = (hi - lo) / (grid - 1);
    for (int i = 1; i < grid; ++i) {
        const double x = lo + h * i;
        const double v = f(x);
        if (v < best_value) {
            best_value = v;
            best = x;
        }
    }
    double a = std::max(lo, best - h);
    double b = std::min(hi, best + h);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    // the grid endpoints can win for minimizers on the boundary
    double arg = mid;
    double val = f(mid);
    for (double x : {lo, hi, best}) {
        if (f(x) < val) {
            val = f(x);
            arg = x;
        }
    }
    return arg;
}

/// Root of an increasing function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace lptk::testing
