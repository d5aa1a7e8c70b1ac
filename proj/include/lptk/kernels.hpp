#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lptk/core_math.hpp"

namespace lptk {

enum class KernelKind : std::uint32_t {
    linear = 0,
    polynomial = 1,
    exponential = 2,
};

/// A tensor kernel K(x_1, ..., x_q) = link(sum(x_1 ⊙ ... ⊙ x_q)), where the
/// link is the identity (linear), t^s (polynomial of degree s) or exp
/// (exponential).
struct TensorKernelSpec {
    KernelKind kind = KernelKind::linear;
    int degree = 1;
    int arity = 4;

    static TensorKernelSpec linear(int arity = 4) { return {KernelKind::linear, 1, arity}; }
    static TensorKernelSpec polynomial(int degree, int arity = 4) {
        return {KernelKind::polynomial, degree, arity};
    }
    static TensorKernelSpec exponential(int arity = 4) {
        return {KernelKind::exponential, 1, arity};
    }

    /// Throws InvalidArgument unless arity is an even integer >= 4 and the
    /// polynomial degree is >= 1.
    void validate() const;

    /// True when an explicit finite feature map is implemented (linear and
    /// polynomial of degree 1 or 2).
    bool has_feature_map() const noexcept;
};

const char* kernel_name(KernelKind kind) noexcept;

/// Applies the kernel's scalar link to the multilinear sum.
double kernel_link(const TensorKernelSpec& spec, double multilinear_sum);

/// K(points[0], ..., points[q-1]); points.size() must equal spec.arity.
double kernel_eval(const TensorKernelSpec& spec, std::span<const Vector> points);

/// Degree-2 polynomial feature map: squares x_j^2 first (j = 0..d-1), then
/// 2^{1/q} x_i x_j for i < j in lexicographic order. Length d(d+1)/2.
Vector feature_map_poly2(const Vector& x, double q);

/// Row-wise feature_map_poly2 of an n x d point matrix.
Matrix feature_matrix_poly2(const Matrix& points, double q);

/// The n x card(K) feature operator Φ_n; row i is Φ(x_i).
class FeatureOperator {
public:
    explicit FeatureOperator(Matrix rows) : rows_(std::move(rows)) {}

    Eigen::Index samples() const noexcept { return rows_.rows(); }
    Eigen::Index features() const noexcept { return rows_.cols(); }
    const Matrix& matrix() const noexcept { return rows_; }

    /// Φ_n w = (<Φ(x_i), w>)_i
    Vector apply(const Vector& w) const;
    /// Φ_n^* α = Σ_i α_i Φ(x_i)
    Vector adjoint(const Vector& alpha) const;

private:
    Matrix rows_;
};

/// Feature operator matching a kernel spec on the given points (rows).
/// Throws InvalidArgument for kernels without an implemented feature map.
FeatureOperator feature_operator_for(const TensorKernelSpec& spec, const Matrix& points);

/// Order-4 Gram tensor stored matricized as a dense row-major n^2 x n^2
/// matrix: entry ((i1*n + i2), (i3*n + i4)) holds K(x_i1, x_i2, x_i3, x_i4).
/// Immutable once built.
class GramTensor {
public:
    GramTensor(Eigen::Index n, TensorKernelSpec kernel, std::vector<double> matricized,
               std::uint64_t kernel_evaluations = 0);

    Eigen::Index n() const noexcept { return n_; }
    const TensorKernelSpec& kernel() const noexcept { return kernel_; }

    double operator()(Eigen::Index i1, Eigen::Index i2, Eigen::Index i3,
                      Eigen::Index i4) const noexcept {
        return data_[static_cast<std::size_t>(((i1 * n_ + i2) * n_ + i3) * n_ + i4)];
    }

    std::span<const double> matricized() const noexcept { return data_; }

    /// Kernel evaluations spent during construction (0 when loaded from disk).
    std::uint64_t kernel_evaluations() const noexcept { return evaluations_; }

private:
    Eigen::Index n_;
    TensorKernelSpec kernel_;
    std::vector<double> data_;
    std::uint64_t evaluations_;
};

struct GramBuildOptions {
    /// Refuse to build above this many samples (n^4 doubles; 150 is ~4 GB).
    Eigen::Index max_samples = 150;
};

/// Builds the order-4 Gram tensor of the rows of `points`. Only sorted index
/// tuples i1 <= i2 <= i3 <= i4 are evaluated; the rest is filled by symmetry.
GramTensor build_gram(const Matrix& points, const TensorKernelSpec& spec,
                      const GramBuildOptions& options = {});

/// Quartic form pieces at α: value (1/4)<[α⊗α], [K][α⊗α]>, its gradient
/// reshape([K][α⊗α], n, n) α, and the multiplications spent.
struct QuarticTerms {
    double value = 0.0;
    Vector gradient;
    std::uint64_t multiplies = 0;
};

/// reshape([K][x⊗x], n, n), the symmetric matrix behind every quartic
/// contraction with two copies of x.
Matrix quartic_contraction(const GramTensor& gram, const Vector& x);

QuarticTerms quartic_terms(const GramTensor& gram, const Vector& alpha);
double quartic_value(const GramTensor& gram, const Vector& alpha);
Vector quartic_gradient(const GramTensor& gram, const Vector& alpha);

/// Multiplication count of the symmetry-reduced matricized product,
/// n^2 (n+1)^2 / 4.
std::uint64_t quartic_multiply_model(Eigen::Index n) noexcept;

/// <w, Φ(x)> for w = J_4(Φ_n^* α), evaluated through the kernel as
/// Σ_{i1,i2,i3} K(x_i1, x_i2, x_i3, x) α_i1 α_i2 α_i3.
double kernel_predict(const Matrix& points, const Vector& alpha, const Vector& x,
                      const TensorKernelSpec& spec);

/// (1/q) ||Φ_n^* α||_q^q
double feature_dual_value(const FeatureOperator& phi, const Vector& alpha, double q);

/// Φ_n J_q(Φ_n^* α), the gradient of feature_dual_value; any real q > 2.
Vector feature_dual_gradient(const FeatureOperator& phi, const Vector& alpha, double q);

/// Norm of <w, Φ(.)> in the induced Banach space for w = J_q(Φ_n^* α):
/// (Σ K(x_i1..x_iq) α_i1...α_iq)^{1/p}.
double rkbs_norm(const GramTensor& gram, const Vector& alpha, const Exponents& exps);

/// Flat little-endian file: magic "LPTKGRAM", u32 version, u64 n, u32 kernel
/// kind, u32 degree, then n^4 float64 in row-major matricized order.
void write_gram(const GramTensor& gram, const std::filesystem::path& path);
GramTensor read_gram(const std::filesystem::path& path);

} // namespace lptk
