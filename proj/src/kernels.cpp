#include "lptk/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "lptk/error.hpp"
#include "lptk/parallel.hpp"

namespace lptk {

namespace {

double integer_power(double base, int exponent) {
    double r = 1.0;
    while (exponent > 0) {
        if (exponent & 1) r *= base;
        base *= base;
        exponent >>= 1;
    }
    return r;
}

void require_arity4(const TensorKernelSpec& spec) {
    spec.validate();
    if (spec.arity != 4) {
        throw UnsupportedArity("kernelized path supports arity 4 only, got " +
                               std::to_string(spec.arity));
    }
}

} // namespace

void TensorKernelSpec::validate() const {
    if (arity < 4 || arity % 2 != 0) {
        throw InvalidArgument("tensor kernel arity must be an even integer >= 4");
    }
    if (kind == KernelKind::polynomial && degree < 1) {
        throw InvalidArgument("polynomial tensor kernel degree must be >= 1");
    }
}

bool TensorKernelSpec::has_feature_map() const noexcept {
    return kind == KernelKind::linear ||
           (kind == KernelKind::polynomial && (degree == 1 || degree == 2));
}

const char* kernel_name(KernelKind kind) noexcept {
    switch (kind) {
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
    case KernelKind::exponential: return "exponential";
    }
    return "unknown";
}

double kernel_link(const TensorKernelSpec& spec, double s) {
    switch (spec.kind) {
    case KernelKind::linear: return s;
    case KernelKind::polynomial: return integer_power(s, spec.degree);
    case KernelKind::exponential: return std::exp(s);
    }
    throw InvalidArgument("unknown kernel kind");
}

double kernel_eval(const TensorKernelSpec& spec, std::span<const Vector> points) {
    spec.validate();
    if (points.size() != static_cast<std::size_t>(spec.arity)) {
        throw InvalidArgument("kernel_eval expects exactly `arity` points");
    }
    const Eigen::Index d = points.front().size();
    for (const auto& x : points) {
        if (x.size() != d) throw InvalidArgument("kernel_eval: point dimensions differ");
    }
    Vector prod = points.front();
    for (std::size_t m = 1; m < points.size(); ++m) prod.array() *= points[m].array();
    return kernel_link(spec, prod.sum());
}

Vector feature_map_poly2(const Vector& x, double q) {
    const Eigen::Index d = x.size();
    if (d < 1) throw InvalidArgument("feature_map_poly2 needs d >= 1");
    const double c = std::pow(2.0, 1.0 / q);
    Vector phi(d * (d + 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < d; ++j) phi[k++] = x[j] * x[j];
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) phi[k++] = c * x[i] * x[j];
    }
    return phi;
}

Matrix feature_matrix_poly2(const Matrix& points, double q) {
    const Eigen::Index d = points.cols();
    Matrix rows(points.rows(), d * (d + 1) / 2);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        rows.row(i) = feature_map_poly2(points.row(i).transpose(), q).transpose();
    }
    return rows;
}

Vector FeatureOperator::apply(const Vector& w) const {
    if (w.size() != features()) throw InvalidArgument("FeatureOperator::apply: size mismatch");
    return rows_ * w;
}

Vector FeatureOperator::adjoint(const Vector& alpha) const {
    if (alpha.size() != samples()) {
        throw InvalidArgument("FeatureOperator::adjoint: size mismatch");
    }
    return rows_.transpose() * alpha;
}

FeatureOperator feature_operator_for(const TensorKernelSpec& spec, const Matrix& points) {
    spec.validate();
    if (spec.kind == KernelKind::linear ||
        (spec.kind == KernelKind::polynomial && spec.degree == 1)) {
        return FeatureOperator(points);
    }
    if (spec.kind == KernelKind::polynomial && spec.degree == 2) {
        return FeatureOperator(feature_matrix_poly2(points, spec.arity));
    }
    throw InvalidArgument(std::string("no finite feature map for the ") +
                          kernel_name(spec.kind) + " tensor kernel");
}

GramTensor::GramTensor(Eigen::Index n, TensorKernelSpec kernel, std::vector<double> matricized,
                       std::uint64_t kernel_evaluations)
    : n_(n), kernel_(kernel), data_(std::move(matricized)), evaluations_(kernel_evaluations) {
    const auto nn = static_cast<std::size_t>(n);
    if (n < 1 || data_.size() != nn * nn * nn * nn) {
        throw InvalidArgument("GramTensor: storage does not hold n^4 entries");
    }
}

GramTensor build_gram(const Matrix& points, const TensorKernelSpec& spec,
                      const GramBuildOptions& options) {
    require_arity4(spec);
    const Eigen::Index n = points.rows();
    if (n < 1) throw InvalidArgument("build_gram needs at least one point");
    if (n > options.max_samples) {
        throw MemoryCapExceeded("Gram tensor for n=" + std::to_string(n) +
                                " exceeds the sample cap of " +
                                std::to_string(options.max_samples) +
                                "; use the feature-map path or raise the cap");
    }

    const Matrix cols = points.transpose();  // one point per column
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> data(nn * nn * nn * nn);
    std::vector<std::uint64_t> evals(nn, 0);

    parallel_for(0, nn, [&](std::size_t a) {
        const auto i1 = static_cast<Eigen::Index>(a);
        Vector p12(cols.rows());
        Vector p123(cols.rows());
        for (Eigen::Index i2 = i1; i2 < n; ++i2) {
            p12 = cols.col(i1).cwiseProduct(cols.col(i2));
            for (Eigen::Index i3 = i2; i3 < n; ++i3) {
                p123 = p12.cwiseProduct(cols.col(i3));
                for (Eigen::Index i4 = i3; i4 < n; ++i4) {
                    const double k = kernel_link(spec, p123.dot(cols.col(i4)));
                    ++evals[a];
                    std::array<Eigen::Index, 4> idx{i1, i2, i3, i4};
                    do {
                        data[static_cast<std::size_t>(((idx[0] * n + idx[1]) * n + idx[2]) * n +
                                                      idx[3])] = k;
                    } while (std::next_permutation(idx.begin(), idx.end()));
                }
            }
        }
    });

    std::uint64_t total = 0;
    for (auto e : evals) total += e;
    return GramTensor(n, spec, std::move(data), total);
}

std::uint64_t quartic_multiply_model(Eigen::Index n) noexcept {
    const auto m = static_cast<std::uint64_t>(n);
    return m * m * (m + 1) * (m + 1) / 4;
}

Matrix quartic_contraction(const GramTensor& gram, const Vector& x) {
    const Eigen::Index n = gram.n();
    if (x.size() != n) throw InvalidArgument("quartic form: vector has wrong length");

    // Upper-triangular pair weights of x⊗x; off-diagonal pairs appear twice.
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor weights = RowMajor::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        weights(c, c) = x[c] * x[c];
        for (Eigen::Index e = c + 1; e < n; ++e) weights(c, e) = 2.0 * x[c] * x[e];
    }

    // only a <= b rows are formed
    Matrix v(n, n);
    const double* base = gram.matricized().data();
    const auto nn = static_cast<std::size_t>(n);
    parallel_for(0, nn, [&](std::size_t ua) {
        const auto a = static_cast<Eigen::Index>(ua);
        for (Eigen::Index b = a; b < n; ++b) {
            const double* row = base + static_cast<std::size_t>((a * n + b) * n * n);
            double s = 0.0;
            for (Eigen::Index c = 0; c < n; ++c) {
                const Eigen::Index len = n - c;
                Eigen::Map<const Vector> kseg(row + c * n + c, len);
                Eigen::Map<const Vector> wseg(weights.data() + c * n + c, len);
                s += kseg.dot(wseg);
            }
            v(a, b) = s;
            v(b, a) = s;
        }
    });
    return v;
}

QuarticTerms quartic_terms(const GramTensor& gram, const Vector& alpha) {
    const Eigen::Index n = gram.n();
    if (alpha.size() != n) throw InvalidArgument("quartic form: alpha has wrong length");
    const Matrix v = quartic_contraction(gram, alpha);

    QuarticTerms out;
    out.gradient = v * alpha;
    out.value = 0.25 * alpha.dot(out.gradient);
    const auto pairs = static_cast<std::uint64_t>(n * (n + 1) / 2);
    out.multiplies = pairs * pairs + static_cast<std::uint64_t>(n * n);
    return out;
}

double quartic_value(const GramTensor& gram, const Vector& alpha) {
    return quartic_terms(gram, alpha).value;
}

Vector quartic_gradient(const GramTensor& gram, const Vector& alpha) {
    return quartic_terms(gram, alpha).gradient;
}

double kernel_predict(const Matrix& points, const Vector& alpha, const Vector& x,
                      const TensorKernelSpec& spec) {
    require_arity4(spec);
    const Eigen::Index n = points.rows();
    if (alpha.size() != n) throw InvalidArgument("kernel_predict: alpha has wrong length");
    if (x.size() != points.cols()) throw InvalidArgument("kernel_predict: dimension mismatch");

    const Matrix cols = points.transpose();
    double total = 0.0;
    Vector px1(x.size());
    Vector px12(x.size());
    for (Eigen::Index i1 = 0; i1 < n; ++i1) {
        px1 = x.cwiseProduct(cols.col(i1));
        for (Eigen::Index i2 = i1; i2 < n; ++i2) {
            px12 = px1.cwiseProduct(cols.col(i2));
            for (Eigen::Index i3 = i2; i3 < n; ++i3) {
                // number of distinct orderings of the sorted triple
                double mult = 6.0;
                if (i1 == i2 && i2 == i3) mult = 1.0;
                else if (i1 == i2 || i2 == i3) mult = 3.0;
                total += mult * kernel_link(spec, px12.dot(cols.col(i3))) * alpha[i1] *
                         alpha[i2] * alpha[i3];
            }
        }
    }
    return total;
}

double feature_dual_value(const FeatureOperator& phi, const Vector& alpha, double q) {
    return power_sum(phi.adjoint(alpha), q) / q;
}

Vector feature_dual_gradient(const FeatureOperator& phi, const Vector& alpha, double q) {
    if (!(q >= 2.0)) throw InvalidArgument("feature_dual_gradient needs q >= 2");
    return phi.apply(duality_map(phi.adjoint(alpha), q));
}

double rkbs_norm(const GramTensor& gram, const Vector& alpha, const Exponents& exps) {
    if (exps.q() != 4.0) throw UnsupportedArity("rkbs_norm through the Gram tensor needs q = 4");
    const double form = 4.0 * quartic_value(gram, alpha);
    return std::pow(std::max(form, 0.0), 1.0 / exps.p());
}

} // namespace lptk
