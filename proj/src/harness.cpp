#include "lptk/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lptk/diagnostics.hpp"
#include "lptk/dual_terms.hpp"
#include "lptk/error.hpp"
#include "lptk/primal.hpp"
#include "lptk/random.hpp"

namespace lptk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> objective_series(const DualState& state) {
    std::vector<double> values;
    values.reserve(state.trace.size());
    for (const auto& rec : state.trace) values.push_back(rec.objective);
    return values;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

} // namespace

const char* feature_mode_name(FeatureMode mode) noexcept {
    return mode == FeatureMode::poly2 ? "poly2" : "identity";
}

FeatureMode parse_feature_mode(const std::string& name) {
    if (name == "identity") return FeatureMode::identity;
    if (name == "poly2") return FeatureMode::poly2;
    throw InvalidArgument("unknown feature mode '" + name + "' (expected identity or poly2)");
}

Eigen::Index SyntheticSpec::feature_count() const noexcept {
    return feature_mode == FeatureMode::poly2 ? d * (d + 1) / 2 : d;
}

void SyntheticSpec::validate() const {
    if (n < 1) throw InvalidArgument("n must be at least 1");
    if (d < 1) throw InvalidArgument("d must be at least 1");
    if (k < 0) throw InvalidArgument("k must be non-negative");
    if (k > feature_count()) {
        throw InvalidArgument("k=" + std::to_string(k) + " exceeds the feature dimension " +
                              std::to_string(feature_count()));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be >= 0");
}

FeatureOperator Dataset::features() const {
    if (spec.feature_mode == FeatureMode::poly2) {
        return FeatureOperator(feature_matrix_poly2(x, 4.0));
    }
    return FeatureOperator(x);
}

Dataset generate_sparse_regression(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    Dataset data;
    data.spec = spec;
    data.x.resize(spec.n, spec.d);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        for (Eigen::Index j = 0; j < spec.d; ++j) data.x(i, j) = rng.normal();
    }

    const Eigen::Index count = spec.feature_count();
    const auto drawn = rng.sample_without_replacement(static_cast<std::size_t>(count),
                                                      static_cast<std::size_t>(spec.k));
    data.w_star = Vector::Zero(count);
    for (std::size_t idx : drawn) data.w_star[static_cast<Eigen::Index>(idx)] = rng.normal();
    data.support.assign(drawn.begin(), drawn.end());
    std::sort(data.support.begin(), data.support.end());

    data.noise.resize(spec.n);
    for (Eigen::Index i = 0; i < spec.n; ++i) data.noise[i] = rng.normal();
    data.y = data.features().apply(data.w_star) + spec.sigma * data.noise;
    return data;
}

std::optional<int> iterations_to_precision(const std::vector<double>& values, double optimum,
                                           double tol) {
    const double scale = optimum != 0.0 ? std::abs(optimum) : 1.0;
    for (std::size_t m = 0; m < values.size(); ++m) {
        if (values[m] - optimum <= tol * scale) return static_cast<int>(m);
    }
    return std::nullopt;
}

RateReport run_rate_experiment(const Dataset& data, const RateOptions& options) {
    RateReport report;
    report.spec = data.spec;
    report.options = options;
    const FeatureOperator phi = data.features();

    for (double p : options.p_list) {
        const Exponents exps = Exponents::from_p(p);
        RateRow row;
        row.p = exps.p();
        row.q = exps.q();

        // one tight run both certifies Λ* and yields the iteration count
        const FeatureDualTerm term(phi, exps.q());
        SolverConfig cfg = SolverConfig::least_squares(options.gamma, exps);
        cfg.tol = options.reference_tol;
        cfg.max_iter = options.dual_max_iter;
        auto start = Clock::now();
        const DualState state = solve_dual_least_squares(term, data.y, cfg);
        row.dual_seconds = seconds_since(start);
        row.dual_optimum = state.objective;
        row.reference_gap = state.gap / (1.0 + std::abs(state.primal_value));
        const auto series = objective_series(state);
        row.reference_converged = state.converged;
        // an unconverged reference cannot certify that the target was reached
        if (state.converged) {
            row.dual_iterations = iterations_to_precision(series, row.dual_optimum, options.tol);
        }
        const int upto = row.dual_iterations.value_or(static_cast<int>(series.size()) - 1);
        for (int m = 0; m < upto; ++m) row.dual_backtracks += state.trace[m].backtracks;
        const double scale = row.dual_optimum != 0.0 ? std::abs(row.dual_optimum) : 1.0;
        for (double v : series) row.dual_curve.push_back((v - row.dual_optimum) / scale);

        PrimalConfig pcfg;
        pcfg.gamma = options.gamma;
        pcfg.exps = exps;
        pcfg.tol = options.tol;
        pcfg.reference_optimum = -row.dual_optimum;

        if (options.run_primal_gd) {
            pcfg.max_iter = options.gd_max_iter;
            start = Clock::now();
            const PrimalResult gd = primal_gd_linesearch(phi, data.y, pcfg);
            row.gd_seconds = seconds_since(start);
            row.gd_ran = true;
            row.gd_iterations_run = gd.iterations;
            row.gd_stagnated = gd.stagnated;
            if (gd.converged) row.gd_iterations = gd.iterations;
        }
        if (options.run_fista && row.p >= options.fista_min_p) {
            pcfg.max_iter = options.fista_max_iter;
            start = Clock::now();
            const PrimalResult fista = primal_fista(phi, data.y, pcfg);
            row.fista_seconds = seconds_since(start);
            row.fista_ran = true;
            row.fista_iterations_run = fista.iterations;
            if (fista.converged) row.fista_iterations = fista.iterations;
            const Vector w_bar = recover_primal(phi, state.alpha, exps.q());
            row.fista_dual_distance = lp_norm(fista.w - w_bar, exps.p());
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

bool crossover_predicate(Eigen::Index n, Eigen::Index feature_count) noexcept {
    return static_cast<double>(n) <= 2.0 * std::cbrt(static_cast<double>(feature_count));
}

KernelTimingReport run_kernel_timing_experiment(const Dataset& data,
                                                const KernelTimingOptions& options) {
    if (data.spec.feature_mode != FeatureMode::poly2) {
        throw InvalidArgument("kernel timing needs a poly2 dataset");
    }
    KernelTimingReport report;
    report.spec = data.spec;
    report.options = options;
    report.n = data.x.rows();
    report.feature_count = data.spec.feature_count();
    report.crossover_bound = 2.0 * std::cbrt(static_cast<double>(report.feature_count));
    report.crossover_predicate = crossover_predicate(report.n, report.feature_count);
    report.multiply_model = quartic_multiply_model(report.n);

    const Exponents exps = Exponents::from_q(4.0);
    SolverConfig cfg = SolverConfig::least_squares(options.gamma, exps);
    cfg.tol = options.tol;
    cfg.max_iter = options.max_iter;

    auto start = Clock::now();
    const GramTensor gram = build_gram(data.x, TensorKernelSpec::polynomial(2), options.gram);
    report.gram_build_seconds = seconds_since(start);
    report.gram_kernel_evaluations = gram.kernel_evaluations();

    const GramDualTerm gram_term(gram);
    start = Clock::now();
    const DualState kernel_state = solve_dual_least_squares(gram_term, data.y, cfg);
    report.kernel_solve_seconds = seconds_since(start);
    report.kernel_iterations = kernel_state.iterations;
    report.kernel_objective = kernel_state.objective;
    if (gram_term.gradient_evaluations() > 0) {
        report.multiplies_per_gradient = static_cast<double>(gram_term.gradient_multiplies()) /
                                         static_cast<double>(gram_term.gradient_evaluations());
    }

    const FeatureOperator phi = data.features();
    const FeatureDualTerm feature_term(phi, 4.0);
    start = Clock::now();
    const DualState feature_state = solve_dual_least_squares(feature_term, data.y, cfg);
    report.feature_solve_seconds = seconds_since(start);
    report.feature_iterations = feature_state.iterations;
    report.feature_objective = feature_state.objective;

    const double scale = std::max(1.0, feature_state.alpha.lpNorm<Eigen::Infinity>());
    report.alpha_difference =
        (kernel_state.alpha - feature_state.alpha).lpNorm<Eigen::Infinity>() / scale;
    return report;
}

std::vector<Eigen::Index> top_k_indices(const Vector& w, Eigen::Index k) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(w.size()));
    for (Eigen::Index j = 0; j < w.size(); ++j) idx[static_cast<std::size_t>(j)] = j;
    const auto take = static_cast<std::size_t>(std::clamp<Eigen::Index>(k, 0, w.size()));
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          const double fa = std::abs(w[a]);
                          const double fb = std::abs(w[b]);
                          return fa != fb ? fa > fb : a < b;
                      });
    idx.resize(take);
    return idx;
}

RecoveryReport run_recovery_experiment(const SyntheticSpec& spec, const RecoveryOptions& options) {
    spec.validate();
    if (options.seeds < 1) throw InvalidArgument("recovery needs at least one seed");
    if (options.gammas.empty()) throw InvalidArgument("recovery needs at least one gamma");
    RecoveryReport report;
    report.spec = spec;
    report.options = options;
    const Exponents exps = Exponents::from_p(options.p);

    std::vector<Dataset> datasets;
    for (int s = 0; s < options.seeds; ++s) {
        SyntheticSpec seeded = spec;
        seeded.seed = spec.seed + static_cast<std::uint64_t>(s);
        datasets.push_back(generate_sparse_regression(seeded));
    }

    for (double gamma : options.gammas) {
        std::vector<double> overlaps;
        std::vector<double> ratios;
        std::vector<double> sizes;
        for (const Dataset& data : datasets) {
            const FeatureOperator phi = data.features();
            const FeatureDualTerm term(phi, exps.q());
            SolverConfig cfg = SolverConfig::least_squares(gamma, exps);
            cfg.tol = options.tol;
            cfg.max_iter = options.max_iter;
            const DualState state = solve_dual_least_squares(term, data.y, cfg);
            const Vector w = recover_primal(phi, state.alpha, exps.q());

            RecoveryRun run;
            run.gamma = gamma;
            run.seed = data.spec.seed;
            run.true_support = data.support;
            run.top_indices = top_k_indices(w, options.top_k);
            run.iterations = state.iterations;
            for (Eigen::Index j : run.top_indices) {
                if (std::binary_search(data.support.begin(), data.support.end(), j)) ++run.overlap;
            }
            double inside_min = kInfinity;
            double outside_max = 0.0;
            for (Eigen::Index j = 0; j < w.size(); ++j) {
                const bool in = std::binary_search(data.support.begin(), data.support.end(), j);
                if (in) inside_min = std::min(inside_min, std::abs(w[j]));
                else outside_max = std::max(outside_max, std::abs(w[j]));
            }
            run.shrinkage_ratio = data.support.empty() ? 0.0
                                  : inside_min > 0.0   ? outside_max / inside_min
                                                       : kInfinity;
            const double cutoff = options.threshold_ratio * w.lpNorm<Eigen::Infinity>();
            for (Eigen::Index j = 0; j < w.size(); ++j) {
                if (cutoff > 0.0 && std::abs(w[j]) >= cutoff) ++run.thresholded_size;
            }
            const double truth = data.w_star.norm();
            run.relative_error = truth > 0.0 ? (w - data.w_star).norm() / truth : w.norm();

            const double denom = static_cast<double>(
                std::min<Eigen::Index>(options.top_k, static_cast<Eigen::Index>(data.support.size())));
            overlaps.push_back(denom > 0.0 ? static_cast<double>(run.overlap) / denom : 1.0);
            ratios.push_back(run.shrinkage_ratio);
            sizes.push_back(static_cast<double>(run.thresholded_size));
            report.runs.push_back(std::move(run));
        }
        RecoverySummary summary;
        summary.gamma = gamma;
        summary.median_overlap_fraction = median(overlaps);
        summary.median_shrinkage_ratio = median(ratios);
        summary.median_thresholded_size = median(sizes);
        report.summaries.push_back(summary);
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < report.summaries.size(); ++g) {
        const auto& a = report.summaries[g];
        const auto& b = report.summaries[best];
        if (a.median_overlap_fraction > b.median_overlap_fraction ||
            (a.median_overlap_fraction == b.median_overlap_fraction &&
             a.median_shrinkage_ratio < b.median_shrinkage_ratio)) {
            best = g;
        }
    }
    report.best_gamma = report.summaries[best].gamma;
    report.best_median_overlap = report.summaries[best].median_overlap_fraction;

    const Dataset& first = datasets.front();
    const FeatureOperator phi = first.features();
    const FeatureDualTerm term(phi, exps.q());
    SolverConfig cfg = SolverConfig::least_squares(report.best_gamma, exps);
    cfg.tol = options.tol;
    cfg.max_iter = options.max_iter;
    report.example_truth = first.w_star;
    report.example_estimate =
        recover_primal(phi, solve_dual_least_squares(term, first.y, cfg).alpha, exps.q());
    return report;
}

} // namespace lptk
