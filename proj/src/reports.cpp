#include "lptk/reports.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lptk/error.hpp"
#include "lptk/random.hpp"

namespace lptk {

namespace {

std::string p_label(double p) {
    if (std::abs(p - 4.0 / 3.0) < 1e-9) return "p=4/3";
    if (std::abs(p - 5.0 / 4.0) < 1e-9) return "p=5/4";
    std::ostringstream s;
    s << "p=" << std::setprecision(6) << p;
    return s.str();
}

std::string pad(const std::string& text, std::size_t width) {
    return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

std::string optional_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string join(const std::vector<Eigen::Index>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(idx[i]);
    }
    return s;
}

} // namespace

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_config_header(std::ostream& out, const ConfigEcho& config) {
    for (const auto& [key, value] : config) out << "# " << key << '=' << value << '\n';
    out << "# rng=" << Rng::kAlgorithm << '\n';
}

void write_trace_csv(std::ostream& out, const DualState& state,
                     const std::vector<double>& primal_errors) {
    out << "iter,lambda,objective,grad_norm,gap,primal_err,wall_ns\n";
    for (std::size_t m = 0; m < state.trace.size(); ++m) {
        const auto& r = state.trace[m];
        out << r.iter << ',' << format_number(r.lambda) << ',' << format_number(r.objective) << ','
            << format_number(r.grad_norm) << ',' << format_number(r.gap) << ',';
        if (m < primal_errors.size()) out << format_number(primal_errors[m]);
        out << ',' << r.wall_ns << '\n';
    }
}

void write_series(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidArgument("write_series: column lengths differ");
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << format_number(x[i]) << ' ' << format_number(y[i]) << '\n';
    }
}

void write_rate_table(std::ostream& out, const RateReport& report) {
    constexpr std::size_t label_width = 26;
    constexpr std::size_t cell_width = 12;
    out << "Number of iterations (rel. precision " << report.options.tol << ")\n";
    out << pad("", label_width);
    for (const auto& row : report.rows) out << pad(p_label(row.p), cell_width);
    out << '\n';

    out << pad("dual GD + linesearch", label_width);
    for (const auto& row : report.rows) {
        const std::string cell = row.dual_iterations
                                     ? std::to_string(*row.dual_iterations) + "(" +
                                           std::to_string(row.dual_backtracks) + ")"
                                     : ">" + std::to_string(report.options.dual_max_iter);
        out << pad(cell, cell_width);
    }
    out << '\n';

    out << pad("primal GD + linesearch", label_width);
    for (const auto& row : report.rows) {
        std::string cell = "--";
        if (row.gd_ran) {
            cell = row.gd_iterations ? std::to_string(*row.gd_iterations)
                                     : ">" + std::to_string(row.gd_iterations_run);
            if (row.gd_stagnated) cell += "*";
        }
        out << pad(cell, cell_width);
    }
    out << '\n';

    out << pad("primal FISTA", label_width);
    for (const auto& row : report.rows) {
        std::string cell = "--";
        if (row.fista_ran) {
            cell = row.fista_iterations ? std::to_string(*row.fista_iterations)
                                        : ">" + std::to_string(row.fista_iterations_run);
        }
        out << pad(cell, cell_width);
    }
    out << '\n';
    out << "(parenthesized: backtracking steps; *: stepsize underflow)\n";
}

void write_rate_csv(std::ostream& out, const RateReport& report, bool with_timings) {
    out << "p,q,dual_optimum,reference_gap,dual_iterations,dual_backtracks,"
           "gd_iterations,gd_iterations_run,gd_stagnated,fista_iterations,fista_iterations_run,"
           "fista_dual_distance";
    if (with_timings) out << ",dual_seconds,gd_seconds,fista_seconds";
    out << '\n';
    for (const auto& r : report.rows) {
        out << format_number(r.p) << ',' << format_number(r.q) << ','
            << format_number(r.dual_optimum) << ',' << format_number(r.reference_gap) << ','
            << optional_int(r.dual_iterations) << ',' << r.dual_backtracks << ','
            << optional_int(r.gd_iterations) << ',' << r.gd_iterations_run << ','
            << (r.gd_stagnated ? 1 : 0) << ',' << optional_int(r.fista_iterations) << ','
            << r.fista_iterations_run << ',' << format_number(r.fista_dual_distance);
        if (with_timings) {
            out << ',' << format_number(r.dual_seconds) << ',' << format_number(r.gd_seconds)
                << ',' << format_number(r.fista_seconds);
        }
        out << '\n';
    }
}

void write_kernel_table(std::ostream& out, const KernelTimingReport& r) {
    constexpr std::size_t label_width = 34;
    out << "n=" << r.n << ", d=" << r.spec.d << ", N=" << r.feature_count << '\n';
    out << pad("", label_width) << pad("iterations", 12) << "CPU time (sec)\n";
    out << pad("dual GD + linesearch (with K)", label_width)
        << pad(std::to_string(r.kernel_iterations), 12) << std::fixed << std::setprecision(2)
        << r.gram_build_seconds + r.kernel_solve_seconds << '\n';
    out << pad("dual GD + linesearch (without K)", label_width)
        << pad(std::to_string(r.feature_iterations), 12) << r.feature_solve_seconds << '\n';
    out << "Gram build (sec): " << r.gram_build_seconds
        << ", kernel evaluations: " << r.gram_kernel_evaluations << '\n';
    out << std::defaultfloat << std::setprecision(6);
    out << "crossover n <= 2 N^(1/3) = " << r.crossover_bound << ": "
        << (r.crossover_predicate ? "true" : "false") << '\n';
    out << "multiplies per gradient: " << r.multiplies_per_gradient
        << " (model n^2(n+1)^2/4 = " << r.multiply_model << ")\n";
    out << "max |alpha_K - alpha_F| (relative): " << r.alpha_difference << '\n';
}

void write_kernel_csv(std::ostream& out, const KernelTimingReport& r, bool with_timings) {
    out << "n,d,feature_count,gram_kernel_evaluations,kernel_iterations,feature_iterations,"
           "kernel_objective,feature_objective,alpha_difference,crossover_bound,"
           "crossover_predicate,multiplies_per_gradient,multiply_model";
    if (with_timings) out << ",gram_build_seconds,kernel_solve_seconds,feature_solve_seconds";
    out << '\n';
    out << r.n << ',' << r.spec.d << ',' << r.feature_count << ',' << r.gram_kernel_evaluations
        << ',' << r.kernel_iterations << ',' << r.feature_iterations << ','
        << format_number(r.kernel_objective) << ',' << format_number(r.feature_objective) << ','
        << format_number(r.alpha_difference) << ',' << format_number(r.crossover_bound) << ','
        << (r.crossover_predicate ? 1 : 0) << ',' << format_number(r.multiplies_per_gradient)
        << ',' << r.multiply_model;
    if (with_timings) {
        out << ',' << format_number(r.gram_build_seconds) << ','
            << format_number(r.kernel_solve_seconds) << ','
            << format_number(r.feature_solve_seconds);
    }
    out << '\n';
}

void write_recovery_summary(std::ostream& out, const RecoveryReport& report) {
    out << "top-" << report.options.top_k << " overlap with true support, median over "
        << report.options.seeds << " seeds\n";
    out << pad("gamma", 10) << pad("overlap", 10) << pad("shrinkage", 12) << "thresholded\n";
    for (const auto& s : report.summaries) {
        std::ostringstream g, o, r, t;
        g << s.gamma;
        o << std::setprecision(4) << s.median_overlap_fraction;
        r << std::setprecision(4) << s.median_shrinkage_ratio;
        t << s.median_thresholded_size;
        out << pad(g.str(), 10) << pad(o.str(), 10) << pad(r.str(), 12) << t.str() << '\n';
    }
    out << "best gamma: " << report.best_gamma << " (median overlap "
        << report.best_median_overlap << ")\n";
}

void write_recovery_csv(std::ostream& out, const RecoveryReport& report) {
    out << "gamma,seed,overlap,shrinkage_ratio,thresholded_size,iterations,relative_error,"
           "true_support,top_indices\n";
    for (const auto& r : report.runs) {
        out << format_number(r.gamma) << ',' << r.seed << ',' << r.overlap << ','
            << format_number(r.shrinkage_ratio) << ',' << r.thresholded_size << ','
            << r.iterations << ',' << format_number(r.relative_error) << ','
            << join(r.true_support) << ',' << join(r.top_indices) << '\n';
    }
}

} // namespace lptk
