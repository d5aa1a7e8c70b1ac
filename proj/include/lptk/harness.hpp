#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lptk/kernels.hpp"
#include "lptk/solvers.hpp"

namespace lptk {

enum class FeatureMode { identity, poly2 };

const char* feature_mode_name(FeatureMode mode) noexcept;
FeatureMode parse_feature_mode(const std::string& name);

struct SyntheticSpec {
    Eigen::Index n = 200;
    Eigen::Index d = 10000;
    Eigen::Index k = 10;
    double sigma = 0.05;
    std::uint64_t seed = 1;
    FeatureMode feature_mode = FeatureMode::identity;

    /// Dimension of the feature space w* lives in: d, or d(d+1)/2 for poly2.
    Eigen::Index feature_count() const noexcept;
    void validate() const;
};

struct Dataset {
    SyntheticSpec spec;
    /// Raw points, one per row (n × d).
    Matrix x;
    Vector y;
    /// Ground truth in feature coordinates.
    Vector w_star;
    /// Sorted indices of the nonzero entries of w*.
    std::vector<Eigen::Index> support;
    /// ε with y = Φ_n w* + σ ε; empty for datasets read from disk.
    Vector noise;

    FeatureOperator features() const;
};

/// Stream order: X row-major, support, coefficients, then ε.
Dataset generate_sparse_regression(const SyntheticSpec& spec);

void write_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

/// Iterations until (v_m - v*) / |v*| <= tol for a recorded objective series.
std::optional<int> iterations_to_precision(const std::vector<double>& values, double optimum,
                                           double tol);

// ---- dual versus primal rates ----------------------------------------------

struct RateOptions {
    std::vector<double> p_list{4.0 / 3.0, 5.0 / 4.0, 1.1, 1.05};
    double gamma = 10.0;
    double tol = 1e-8;
    /// Gap target for the reference solve that supplies Λ*.
    double reference_tol = 1e-12;
    int dual_max_iter = 100000;
    bool run_primal_gd = true;
    int gd_max_iter = 5000;
    bool run_fista = true;
    /// FISTA runs only for p at least this large.
    double fista_min_p = 1.2;
    int fista_max_iter = 20000;
};

struct RateRow {
    double p = 0.0;
    double q = 0.0;
    double dual_optimum = 0.0;
    double reference_gap = 0.0;
    bool reference_converged = false;
    std::optional<int> dual_iterations;
    /// Backtracking steps taken before the target was reached.
    int dual_backtracks = 0;
    double dual_seconds = 0.0;
    bool gd_ran = false;
    std::optional<int> gd_iterations;
    int gd_iterations_run = 0;
    bool gd_stagnated = false;
    double gd_seconds = 0.0;
    bool fista_ran = false;
    std::optional<int> fista_iterations;
    int fista_iterations_run = 0;
    double fista_seconds = 0.0;
    double fista_dual_distance = 0.0;
    /// Relative precision curve of the dual run, (Λ_m - Λ*)/|Λ*|.
    std::vector<double> dual_curve;
};

struct RateReport {
    SyntheticSpec spec;
    RateOptions options;
    std::vector<RateRow> rows;
};

RateReport run_rate_experiment(const Dataset& data, const RateOptions& options);

// ---- tensor kernel timing --------------------------------------------------

struct KernelTimingOptions {
    double gamma = 10.0;
    double tol = 1e-8;
    int max_iter = 100000;
    GramBuildOptions gram{};
};

struct KernelTimingReport {
    SyntheticSpec spec;
    KernelTimingOptions options;
    Eigen::Index n = 0;
    Eigen::Index feature_count = 0;
    std::uint64_t gram_kernel_evaluations = 0;
    double gram_build_seconds = 0.0;
    int kernel_iterations = 0;
    int feature_iterations = 0;
    double kernel_solve_seconds = 0.0;
    double feature_solve_seconds = 0.0;
    double kernel_objective = 0.0;
    double feature_objective = 0.0;
    /// max_i |α^K_i - α^F_i| / max(1, ‖α^F‖_∞)
    double alpha_difference = 0.0;
    bool crossover_predicate = false;
    double crossover_bound = 0.0;
    double multiplies_per_gradient = 0.0;
    std::uint64_t multiply_model = 0;
};

/// n ≤ 2 N^{1/3}: the Gram path is cheaper per gradient.
bool crossover_predicate(Eigen::Index n, Eigen::Index feature_count) noexcept;

KernelTimingReport run_kernel_timing_experiment(const Dataset& data,
                                                const KernelTimingOptions& options);

// ---- support recovery ------------------------------------------------------

struct RecoveryOptions {
    std::vector<double> gammas{1.0, 10.0, 100.0};
    int seeds = 10;
    double p = 4.0 / 3.0;
    Eigen::Index top_k = 6;
    /// Thresholded support: |w̄_j| >= ratio · max_j |w̄_j|.
    double threshold_ratio = 0.1;
    double tol = 1e-8;
    int max_iter = 100000;
};

struct RecoveryRun {
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::vector<Eigen::Index> true_support;
    std::vector<Eigen::Index> top_indices;
    Eigen::Index overlap = 0;
    double shrinkage_ratio = 0.0;
    Eigen::Index thresholded_size = 0;
    int iterations = 0;
    double relative_error = 0.0;
};

struct RecoverySummary {
    double gamma = 0.0;
    double median_overlap_fraction = 0.0;
    double median_shrinkage_ratio = 0.0;
    double median_thresholded_size = 0.0;
};

struct RecoveryReport {
    SyntheticSpec spec;
    RecoveryOptions options;
    std::vector<RecoveryRun> runs;
    std::vector<RecoverySummary> summaries;
    double best_gamma = 0.0;
    double best_median_overlap = 0.0;
    /// w* and w̄ for the first seed at the best γ, for plotting.
    Vector example_truth;
    Vector example_estimate;
};

/// Indices of the k largest |w_j|, ties broken by index, in decreasing order.
std::vector<Eigen::Index> top_k_indices(const Vector& w, Eigen::Index k);

/// Runs seeds spec.seed, spec.seed + 1, ... for every γ.
RecoveryReport run_recovery_experiment(const SyntheticSpec& spec, const RecoveryOptions& options);

} // namespace lptk
