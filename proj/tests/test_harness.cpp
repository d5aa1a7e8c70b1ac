#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lptk/diagnostics.hpp"
#include "lptk/dual_terms.hpp"
#include "lptk/error.hpp"
#include "lptk/harness.hpp"
#include "lptk/reports.hpp"
#include "test_support.hpp"

using namespace lptk;
using namespace lptk::testing;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "lptk_test_harness";
    std::filesystem::create_directories(dir);
    return dir / name;
}

SyntheticSpec small_spec(Eigen::Index n, Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    SyntheticSpec s;
    s.n = n;
    s.d = d;
    s.k = k;
    s.seed = seed;
    return s;
}

bool same(const Dataset& a, const Dataset& b) {
    return a.x == b.x && a.y == b.y && a.w_star == b.w_star && a.support == b.support;
}

} // namespace

TEST_CASE("noiseless generation gives y = X w*") {
    SyntheticSpec s = small_spec(2, 3, 1, 7);
    s.sigma = 0.0;
    const Dataset data = generate_sparse_regression(s);
    CHECK(data.x.rows() == 2);
    CHECK(data.x.cols() == 3);
    REQUIRE(data.support.size() == 1);
    CHECK(data.w_star[data.support[0]] != 0.0);
    CHECK((data.w_star.array() != 0.0).count() == 1);
    CHECK(data.y == data.x * data.w_star);
}

TEST_CASE("noise enters with weight sigma") {
    const Dataset data = generate_sparse_regression(small_spec(200, 10000, 10, 1));
    const Vector residual = data.y - data.x * data.w_star;
    CHECK(residual.norm() / (0.05 * data.noise).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(data.support.size() == 10);
    CHECK(std::is_sorted(data.support.begin(), data.support.end()));
}

TEST_CASE("generation is deterministic and seed dependent") {
    const Dataset a = generate_sparse_regression(small_spec(30, 100, 5, 3));
    const Dataset b = generate_sparse_regression(small_spec(30, 100, 5, 3));
    const Dataset c = generate_sparse_regression(small_spec(30, 100, 5, 4));
    CHECK(same(a, b));
    CHECK_FALSE(same(a, c));
}

TEST_CASE("support is spread uniformly") {
    std::vector<int> hits(10, 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const Dataset data = generate_sparse_regression(small_spec(1, 10, 3, seed));
        for (Eigen::Index j : data.support) ++hits[static_cast<std::size_t>(j)];
    }
    // 600 expected per slot; a 5 sigma band is about ±110
    for (int h : hits) CHECK(std::abs(h - 600) < 110);
}

TEST_CASE("poly2 datasets live in feature coordinates") {
    SyntheticSpec s = small_spec(6, 4, 2, 9);
    s.feature_mode = FeatureMode::poly2;
    CHECK(s.feature_count() == 10);
    const Dataset data = generate_sparse_regression(s);
    CHECK(data.x.cols() == 4);
    CHECK(data.w_star.size() == 10);
    const FeatureOperator phi = data.features();
    CHECK(phi.features() == 10);
    CHECK((data.y - phi.apply(data.w_star) - s.sigma * data.noise).norm() <= 1e-12);
    CHECK(parse_feature_mode(feature_mode_name(FeatureMode::poly2)) == FeatureMode::poly2);
    CHECK_THROWS_AS(parse_feature_mode("cubic"), InvalidArgument);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(generate_sparse_regression(small_spec(5, 3, 4, 1)), InvalidArgument);
    SyntheticSpec s = small_spec(5, 3, 1, 1);
    s.sigma = -1.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = small_spec(0, 3, 1, 1);
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = small_spec(5, 3, 6, 1);
    s.feature_mode = FeatureMode::poly2;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("dataset files round trip") {
    for (FeatureMode mode : {FeatureMode::identity, FeatureMode::poly2}) {
        SyntheticSpec s = small_spec(7, 5, 2, 11);
        s.feature_mode = mode;
        const Dataset data = generate_sparse_regression(s);
        const auto path = scratch("round_trip.bin");
        write_dataset(data, path);
        const Dataset back = read_dataset(path);
        CHECK(same(data, back));
        CHECK(back.spec.seed == s.seed);
        CHECK(back.spec.sigma == s.sigma);
        CHECK(back.spec.k == s.k);
        CHECK(back.spec.feature_mode == mode);
    }
}

TEST_CASE("corrupt dataset files are rejected") {
    const Dataset data = generate_sparse_regression(small_spec(7, 5, 2, 11));
    const auto path = scratch("corrupt.bin");
    write_dataset(data, path);
    std::string bytes;
    {
        std::ifstream in(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    const auto rewrite = [&](const std::string& content) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    };

    std::string bad = bytes;
    bad[0] = 'X';
    rewrite(bad);
    CHECK_THROWS_AS(read_dataset(path), FormatError);

    rewrite(bytes.substr(0, bytes.size() - 8));
    CHECK_THROWS_AS(read_dataset(path), FormatError);

    rewrite(bytes.substr(0, 6));
    CHECK_THROWS_AS(read_dataset(path), FormatError);

    CHECK_THROWS_AS(read_dataset(scratch("missing.bin")), FormatError);
}

TEST_CASE("iterations to precision") {
    const std::vector<double> v{10.0, 3.0, 1.5, 1.005, 1.0001, 1.0};
    CHECK(iterations_to_precision(v, 1.0, 1e-2) == 3);
    CHECK(iterations_to_precision(v, 1.0, 1e-3) == 4);
    CHECK(iterations_to_precision(v, 1.0, 0.0) == 5);
    CHECK(iterations_to_precision(v, 0.5, 1e-3) == std::nullopt);
    CHECK(iterations_to_precision({-2.0, -2.0}, -2.0, 1e-8) == 0);
}

TEST_CASE("top-k indices") {
    Vector w(6);
    w << 0.1, -3.0, 2.0, -2.0, 0.0, 0.5;
    const auto top = top_k_indices(w, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0] == 1);
    CHECK(top[1] == 2);
    CHECK(top[2] == 3);
    CHECK(top_k_indices(w, 10).size() == 6);
    CHECK(top_k_indices(w, 0).empty());
}

TEST_CASE("orthogonal noiseless design recovers the single relevant feature") {
    const Eigen::Index d = 12;
    for (Eigen::Index j = 0; j < d; ++j) {
        const FeatureOperator phi(Matrix::Identity(d, d));
        Vector w_star = Vector::Zero(d);
        w_star[j] = -1.7;
        const Vector y = phi.apply(w_star);
        const Exponents e = Exponents::from_p(4.0 / 3.0);
        const FeatureDualTerm term(phi, e.q());
        const DualState state =
            solve_dual_least_squares(term, y, SolverConfig::least_squares(10.0, e));
        const Vector w = recover_primal(phi, state.alpha, e.q());
        CHECK(top_k_indices(w, 1)[0] == j);
    }
}

TEST_CASE("crossover predicate") {
    CHECK(crossover_predicate(90, 211575));
    CHECK(crossover_predicate(119, 211575));
    CHECK_FALSE(crossover_predicate(120, 211575));
    CHECK(crossover_predicate(2, 1));
    CHECK_FALSE(crossover_predicate(3, 1));
}

TEST_CASE("small rate experiment") {
    const Dataset data = generate_sparse_regression(small_spec(20, 300, 4, 5));
    RateOptions options;
    options.p_list = {4.0 / 3.0, 1.1};
    options.gd_max_iter = 200;
    options.fista_max_iter = 5000;
    const RateReport report = run_rate_experiment(data, options);
    REQUIRE(report.rows.size() == 2);
    for (const RateRow& row : report.rows) {
        CHECK(row.reference_converged);
        CHECK(row.reference_gap <= 1e-12);
        REQUIRE(row.dual_iterations);
        CHECK(*row.dual_iterations >= 1);
        CHECK(row.gd_ran);
        CHECK(row.dual_curve.size() >= static_cast<std::size_t>(*row.dual_iterations));
        CHECK(row.dual_curve[static_cast<std::size_t>(*row.dual_iterations)] <= options.tol);
    }
    CHECK(*report.rows[1].dual_iterations >= *report.rows[0].dual_iterations);
    CHECK(report.rows[0].fista_ran);
    CHECK_FALSE(report.rows[1].fista_ran);
    if (report.rows[0].fista_iterations) CHECK(report.rows[0].fista_dual_distance <= 1e-3);

    std::ostringstream table;
    write_rate_table(table, report);
    const std::string text = table.str();
    CHECK(text.find("p=4/3") != std::string::npos);
    CHECK(text.find("p=1.1") != std::string::npos);
    CHECK(text.find("dual GD + linesearch") != std::string::npos);
    CHECK(text.find("primal GD + linesearch") != std::string::npos);
    CHECK(text.find("primal FISTA") != std::string::npos);
    CHECK(text.find("--") != std::string::npos);

    std::ostringstream a;
    std::ostringstream b;
    write_rate_csv(a, report, false);
    write_rate_csv(b, run_rate_experiment(data, options), false);
    CHECK(a.str() == b.str());
}

TEST_CASE("rate experiment reports a cap it could not certify") {
    const Dataset data = generate_sparse_regression(small_spec(20, 300, 4, 5));
    RateOptions options;
    options.p_list = {1.05};
    options.dual_max_iter = 3;
    options.run_primal_gd = false;
    const RateReport report = run_rate_experiment(data, options);
    CHECK_FALSE(report.rows[0].reference_converged);
    CHECK_FALSE(report.rows[0].dual_iterations);
    std::ostringstream table;
    write_rate_table(table, report);
    CHECK(table.str().find(">3") != std::string::npos);
}

TEST_CASE("small kernel timing experiment") {
    SyntheticSpec s = small_spec(9, 6, 3, 2);
    s.feature_mode = FeatureMode::poly2;
    const Dataset data = generate_sparse_regression(s);
    const KernelTimingReport report = run_kernel_timing_experiment(data, {});
    CHECK(report.feature_count == 21);
    CHECK(report.alpha_difference <= 1e-8);
    CHECK(std::abs(report.kernel_iterations - report.feature_iterations) <= 3);
    CHECK(report.multiply_model == 81u * 100u / 4u);
    CHECK(std::abs(report.multiplies_per_gradient - static_cast<double>(report.multiply_model)) <=
          0.1 * static_cast<double>(report.multiply_model));
    CHECK(report.crossover_predicate == crossover_predicate(9, 21));

    std::ostringstream table;
    write_kernel_table(table, report);
    CHECK(table.str().find("(with K)") != std::string::npos);
    CHECK(table.str().find("(without K)") != std::string::npos);

    CHECK_THROWS_AS(run_kernel_timing_experiment(generate_sparse_regression(small_spec(4, 3, 1, 1)), {}),
                    InvalidArgument);
    KernelTimingOptions capped;
    capped.gram.max_samples = 5;
    CHECK_THROWS_AS(run_kernel_timing_experiment(data, capped), MemoryCapExceeded);
}

TEST_CASE("small recovery experiment") {
    const SyntheticSpec s = small_spec(40, 300, 3, 21);
    RecoveryOptions options;
    options.gammas = {1.0, 100.0};
    options.seeds = 3;
    options.top_k = 3;
    const RecoveryReport report = run_recovery_experiment(s, options);
    CHECK(report.runs.size() == 6);
    REQUIRE(report.summaries.size() == 2);
    CHECK((report.best_gamma == 1.0 || report.best_gamma == 100.0));
    CHECK(report.example_truth.size() == 300);
    CHECK(report.example_estimate.size() == 300);
    for (const RecoveryRun& run : report.runs) {
        CHECK(run.top_indices.size() == 3);
        CHECK(run.true_support.size() == 3);
        CHECK(run.overlap >= 0);
        CHECK(run.overlap <= 3);
        CHECK(run.thresholded_size >= 1);
        CHECK(run.shrinkage_ratio >= 0.0);
    }
    // seeds advance from spec.seed
    CHECK(report.runs[0].seed == 21);
    CHECK(report.runs[2].seed == 23);
    CHECK(generate_sparse_regression(small_spec(40, 300, 3, 22)).support == report.runs[1].true_support);

    std::ostringstream a;
    std::ostringstream b;
    write_recovery_csv(a, report);
    write_recovery_csv(b, run_recovery_experiment(s, options));
    CHECK(a.str() == b.str());
    std::ostringstream summary;
    write_recovery_summary(summary, report);
    CHECK(summary.str().find("best gamma") != std::string::npos);
}

TEST_CASE("report helpers") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1e-300) == "1e-300");
    std::ostringstream out;
    write_config_header(out, {{"gamma", "10"}, {"p", "4/3"}});
    CHECK(out.str().find("# gamma=10\n# p=4/3\n# rng=") == 0);
    std::ostringstream series;
    write_series(series, {1.0, 2.0}, {0.25, 0.125});
    CHECK(series.str() == "1 0.25\n2 0.125\n");
}
