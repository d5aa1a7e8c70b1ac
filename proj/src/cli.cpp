#include "lptk/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lptk/diagnostics.hpp"
#include "lptk/dual_terms.hpp"
#include "lptk/error.hpp"
#include "lptk/harness.hpp"
#include "lptk/primal.hpp"
#include "lptk/reports.hpp"

namespace lptk {

namespace {

namespace fs = std::filesystem;

struct SpecFlags {
    Eigen::Index n = 0;
    Eigen::Index d = 0;
    Eigen::Index k = 0;
    double sigma = 0.05;
    std::uint64_t seed = 1;
    std::string feature_mode = "identity";

    SyntheticSpec spec() const {
        SyntheticSpec s;
        s.n = n;
        s.d = d;
        s.k = k;
        s.sigma = sigma;
        s.seed = seed;
        s.feature_mode = parse_feature_mode(feature_mode);
        return s;
    }
};

void add_spec_flags(CLI::App* app, SpecFlags& f, Eigen::Index n, Eigen::Index d, Eigen::Index k) {
    f.n = n;
    f.d = d;
    f.k = k;
    app->add_option("--n", f.n, "number of samples");
    app->add_option("--d", f.d, "ambient dimension");
    app->add_option("--k", f.k, "number of relevant features");
    app->add_option("--sigma", f.sigma, "noise scale");
    app->add_option("--seed", f.seed, "random seed");
}

struct ExponentFlags {
    std::string p;
    std::optional<double> q;
};

void add_exponent_flags(CLI::App* app, ExponentFlags& f) {
    auto* p = app->add_option("--p", f.p, "primal exponent, decimal or fraction such as 4/3");
    auto* q = app->add_option("--q", f.q, "conjugate exponent (e.g. 4)");
    p->excludes(q);
}

// A p typed with limited digits is snapped to the nearest even q.
Exponents resolve_exponents(const ExponentFlags& f, double default_q) {
    if (f.q) return Exponents::from_q(*f.q);
    if (f.p.empty()) return Exponents::from_q(default_q);
    const double p = parse_exponent(f.p);
    if (!(p > 1.0 && p <= 2.0)) throw InvalidArgument("p must lie in (1, 2]");
    const double q = p / (p - 1.0);
    const double even = 2.0 * std::round(q / 2.0);
    if (even >= 4.0 && std::abs(q - even) <= 1e-6 * even) return Exponents::from_q(even);
    return Exponents::from_p(p);
}

std::string value_of(const CLI::Option* opt) {
    if (opt->count() == 0) return opt->get_default_str();
    const auto& results = opt->results();
    return results.empty() ? std::string("true") : results.back();
}

ConfigEcho echo(const CLI::App* app) {
    ConfigEcho config;
    config.emplace_back("command", app->get_name());
    for (const CLI::Option* opt : app->get_options()) {
        if (opt == app->get_help_ptr()) continue;
        std::string name = opt->get_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        config.emplace_back(name, value_of(opt));
    }
    return config;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        values.push_back(parse_exponent(item.substr(first)));
    }
    if (values.empty()) throw InvalidArgument("empty list '" + text + "'");
    return values;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw FormatError("cannot open " + path.string() + " for writing");
    file << content;
    if (!file) throw FormatError("failed writing " + path.string());
}

LossSpec make_loss(const std::string& name, double eps, double rho) {
    LossSpec loss;
    if (name == "square") loss = LossSpec::square();
    else if (name == "eps-insensitive" || name == "eps_insensitive") loss = LossSpec::eps_insensitive(eps);
    else if (name == "huber") loss = LossSpec::huber(rho);
    else if (name == "logistic") loss = LossSpec::logistic();
    else if (name == "hinge") loss = LossSpec::hinge();
    else throw InvalidArgument("unknown loss '" + name + "'");
    loss.validate();
    return loss;
}

TensorKernelSpec make_kernel(const std::string& name, int degree) {
    if (name == "linear") return TensorKernelSpec::linear();
    if (name == "polynomial") return TensorKernelSpec::polynomial(degree);
    if (name == "exponential") return TensorKernelSpec::exponential();
    throw InvalidArgument("unknown kernel '" + name + "'");
}

// ---- subcommands -----------------------------------------------------------

struct GenerateCmd {
    SpecFlags spec;
    std::string out;
};

int do_generate(const CLI::App* app, const GenerateCmd& cmd, std::ostream& out) {
    const Dataset data = generate_sparse_regression(cmd.spec.spec());
    write_dataset(data, cmd.out);
    write_config_header(out, echo(app));
    out << "wrote " << cmd.out << " (n=" << data.x.rows() << ", d=" << data.x.cols()
        << ", features=" << data.w_star.size() << ")\n";
    return 0;
}

struct SolveCmd {
    std::string data;
    std::string loss = "square";
    double eps = 0.1;
    double rho = 1.0;
    ExponentFlags exps;
    double gamma = 10.0;
    std::optional<double> delta;
    std::optional<double> theta;
    std::optional<double> lambda_bar;
    std::optional<int> max_backtracks;
    int max_iter = 10000;
    double tol = 1e-8;
    bool check_certificate = false;
    std::string gram_file;
    std::string features;
    std::string algorithm = "auto";
    bool binarize = false;
    std::string trace;
    std::string out;
};

int do_solve(const CLI::App* app, const SolveCmd& cmd, std::ostream& out) {
    const LossSpec loss = make_loss(cmd.loss, cmd.eps, cmd.rho);
    const Exponents exps = resolve_exponents(cmd.exps, 4.0);
    Dataset data = read_dataset(cmd.data);
    Vector y = data.y;
    if (cmd.binarize) {
        if (!loss.margin_based()) throw InvalidArgument("--binarize applies to margin losses only");
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    }
    check_labels(loss, y);

    std::string algorithm = cmd.algorithm;
    if (algorithm == "auto") algorithm = loss.kind == LossKind::square ? "ls" : "prox";
    if (algorithm != "ls" && algorithm != "prox") {
        throw InvalidArgument("--algorithm must be auto, ls or prox");
    }
    if (algorithm == "ls" && loss.kind != LossKind::square) {
        throw InvalidArgument("--algorithm ls needs the square loss");
    }
    SolverConfig cfg = algorithm == "ls" ? SolverConfig::least_squares(cmd.gamma, exps)
                                         : SolverConfig::proximal(cmd.gamma, exps);
    if (cmd.delta) cfg.delta = *cmd.delta;
    if (cmd.theta) cfg.theta = *cmd.theta;
    if (cmd.lambda_bar) cfg.lambda_bar = *cmd.lambda_bar;
    if (cmd.max_backtracks) cfg.max_backtracks = *cmd.max_backtracks;
    cfg.max_iter = cmd.max_iter;
    cfg.tol = cmd.tol;
    cfg.check_certificate = cmd.check_certificate;

    std::optional<GramTensor> gram;
    std::optional<FeatureOperator> phi;
    std::unique_ptr<DualTerm> term;
    if (!cmd.gram_file.empty()) {
        if (exps.q() != 4.0) throw InvalidArgument("the Gram path needs q = 4");
        gram.emplace(read_gram(cmd.gram_file));
        if (gram->n() != data.x.rows()) {
            throw InvalidArgument("Gram tensor has n=" + std::to_string(gram->n()) +
                                  " but the dataset has n=" + std::to_string(data.x.rows()));
        }
        term = std::make_unique<GramDualTerm>(*gram);
    } else {
        if (!cmd.features.empty()) data.spec.feature_mode = parse_feature_mode(cmd.features);
        phi.emplace(data.features());
        term = std::make_unique<FeatureDualTerm>(*phi, exps.q());
    }
    const bool truth_known = phi && data.w_star.size() == phi->features();
    cfg.record_iterates = !cmd.trace.empty() && truth_known;

    const DualState state = algorithm == "ls" ? solve_dual_least_squares(*term, y, cfg)
                                              : solve_dual_prox_grad(*term, y, loss, cfg);

    write_config_header(out, echo(app));
    out << "converged=" << (state.converged ? "true" : "false") << '\n';
    out << "iterations=" << state.iterations << '\n';
    out << "backtracks=" << state.linesearch_backtracks << '\n';
    out << "dual_objective=" << format_number(state.objective) << '\n';
    out << "primal_objective=" << format_number(state.primal_value) << '\n';
    out << "duality_gap=" << format_number(state.gap) << '\n';
    out << "lambda_min=" << format_number(state.lambda_min) << '\n';

    std::optional<Vector> w;
    if (phi) {
        w = recover_primal(*phi, state.alpha, exps.q());
        out << "kkt_residual="
            << format_number(kkt_residual(*phi, *w, state.alpha, y, loss, cmd.gamma, exps)) << '\n';
        if (truth_known) {
            out << "error_to_truth=" << format_number(lp_norm(*w - data.w_star, exps.p())) << '\n';
        }
    }

    if (!cmd.trace.empty()) {
        std::vector<double> errors;
        for (const Vector& a : state.iterates) {
            errors.push_back(lp_norm(recover_primal(*phi, a, exps.q()) - data.w_star, exps.p()));
        }
        std::ostringstream csv;
        write_trace_csv(csv, state, errors);
        write_file(cmd.trace, csv.str());
    }
    if (!cmd.out.empty()) {
        std::ostringstream csv;
        write_config_header(csv, echo(app));
        csv << "kind,index,value\n";
        for (Eigen::Index i = 0; i < state.alpha.size(); ++i) {
            csv << "alpha," << i << ',' << format_number(state.alpha[i]) << '\n';
        }
        if (w) {
            for (Eigen::Index j = 0; j < w->size(); ++j) {
                csv << "w," << j << ',' << format_number((*w)[j]) << '\n';
            }
        }
        write_file(cmd.out, csv.str());
    }
    return 0;
}

struct RatesCmd {
    SpecFlags spec;
    bool paper_scale = false;
    double gamma = 10.0;
    std::string p_list = "4/3,5/4,1.1,1.05";
    double tol = 1e-8;
    int gd_max_iter = 5000;
    int fista_max_iter = 20000;
    bool skip_gd = false;
    bool skip_fista = false;
    std::string out_dir;
};

int do_rates(const CLI::App* app, RatesCmd cmd, std::ostream& out) {
    if (cmd.paper_scale) cmd.spec.d = 100000;
    const Dataset data = generate_sparse_regression(cmd.spec.spec());
    RateOptions options;
    options.p_list = parse_list(cmd.p_list);
    options.gamma = cmd.gamma;
    options.tol = cmd.tol;
    options.gd_max_iter = cmd.gd_max_iter;
    options.fista_max_iter = cmd.fista_max_iter;
    options.run_primal_gd = !cmd.skip_gd;
    options.run_fista = !cmd.skip_fista;
    const RateReport report = run_rate_experiment(data, options);

    std::ostringstream header, table;
    write_config_header(header, echo(app));
    write_rate_table(table, report);
    out << header.str() << table.str();
    if (!cmd.out_dir.empty()) {
        const fs::path dir(cmd.out_dir);
        std::ostringstream csv;
        write_rate_csv(csv, report);
        write_file(dir / "rates.csv", header.str() + csv.str());
        write_file(dir / "table1.txt", header.str() + table.str());
        for (const auto& row : report.rows) {
            std::vector<double> m(row.dual_curve.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<double>(i);
            std::ostringstream series;
            write_series(series, m, row.dual_curve);
            write_file(dir / ("dual_curve_p" + format_number(row.p) + ".dat"), series.str());
        }
    }
    return 0;
}

struct KernelCmd {
    SpecFlags spec;
    double gamma = 10.0;
    double tol = 1e-8;
    int max_samples = 150;
    std::string out_dir;
};

int do_kernel(const CLI::App* app, const KernelCmd& cmd, std::ostream& out) {
    SyntheticSpec spec = cmd.spec.spec();
    spec.feature_mode = FeatureMode::poly2;
    if (spec.n > cmd.max_samples) {
        throw MemoryCapExceeded("n=" + std::to_string(spec.n) + " exceeds --max-samples=" +
                                std::to_string(cmd.max_samples) +
                                "; the Gram tensor needs 8 n^4 bytes. Use the feature path "
                                "(solve --features poly2) or raise the cap.");
    }
    const Dataset data = generate_sparse_regression(spec);
    KernelTimingOptions options;
    options.gamma = cmd.gamma;
    options.tol = cmd.tol;
    options.gram.max_samples = cmd.max_samples;
    const KernelTimingReport report = run_kernel_timing_experiment(data, options);

    std::ostringstream header, table;
    write_config_header(header, echo(app));
    write_kernel_table(table, report);
    out << header.str() << table.str();
    if (!cmd.out_dir.empty()) {
        const fs::path dir(cmd.out_dir);
        std::ostringstream csv;
        write_kernel_csv(csv, report);
        write_file(dir / "kernel.csv", header.str() + csv.str());
        write_file(dir / "table2.txt", header.str() + table.str());
    }
    return 0;
}

struct RecoverCmd {
    SpecFlags spec;
    std::string gammas = "1,10,100";
    int seeds = 10;
    std::string p = "4/3";
    Eigen::Index top_k = 6;
    double threshold = 0.1;
    double tol = 1e-8;
    std::string out_dir;
};

int do_recover(const CLI::App* app, const RecoverCmd& cmd, std::ostream& out) {
    RecoveryOptions options;
    options.gammas = parse_list(cmd.gammas);
    options.seeds = cmd.seeds;
    options.p = parse_exponent(cmd.p);
    options.top_k = cmd.top_k;
    options.threshold_ratio = cmd.threshold;
    options.tol = cmd.tol;
    const RecoveryReport report = run_recovery_experiment(cmd.spec.spec(), options);

    std::ostringstream header, summary;
    write_config_header(header, echo(app));
    write_recovery_summary(summary, report);
    out << header.str() << summary.str();
    if (!cmd.out_dir.empty()) {
        const fs::path dir(cmd.out_dir);
        std::ostringstream csv;
        write_recovery_csv(csv, report);
        write_file(dir / "recovery.csv", header.str() + csv.str());
        std::vector<double> index(static_cast<std::size_t>(report.example_truth.size()));
        for (std::size_t j = 0; j < index.size(); ++j) index[j] = static_cast<double>(j);
        const std::vector<double> truth(report.example_truth.begin(), report.example_truth.end());
        const std::vector<double> estimate(report.example_estimate.begin(),
                                           report.example_estimate.end());
        std::ostringstream a, b;
        write_series(a, index, truth);
        write_series(b, index, estimate);
        write_file(dir / "truth.dat", a.str());
        write_file(dir / "estimate.dat", b.str());
    }
    return 0;
}

struct GramCmd {
    std::string data;
    std::string kernel = "polynomial";
    int degree = 2;
    int max_samples = 150;
    std::string out;
};

int do_gram(const CLI::App* app, const GramCmd& cmd, std::ostream& out) {
    const Dataset data = read_dataset(cmd.data);
    GramBuildOptions options;
    options.max_samples = cmd.max_samples;
    const auto start = std::chrono::steady_clock::now();
    const GramTensor gram = build_gram(data.x, make_kernel(cmd.kernel, cmd.degree), options);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_gram(gram, cmd.out);
    write_config_header(out, echo(app));
    out << "n=" << gram.n() << '\n';
    out << "kernel_evaluations=" << gram.kernel_evaluations() << '\n';
    out << "build_seconds=" << seconds << '\n';
    return 0;
}

std::optional<std::string> extract_config_path(std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i + 2));
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return path;
}

} // namespace

std::vector<std::string> config_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InvalidArgument("config line " + std::to_string(number) + " is not key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

double parse_exponent(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    try {
        if (slash == std::string::npos) {
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        } else {
            const std::string a = text.substr(0, slash);
            const std::string b = text.substr(slash + 1);
            std::size_t ua = 0;
            std::size_t ub = 0;
            const double num = std::stod(a, &ua);
            const double den = std::stod(b, &ub);
            if (ua == a.size() && ub == b.size() && den != 0.0) return num / den;
        }
    } catch (const std::exception&) {
    }
    throw InvalidArgument("cannot parse number '" + text + "'");
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lp-norm regularized learning with tensor kernels"};
    app.name("lptk");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

    GenerateCmd gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic sparse regression dataset");
    add_spec_flags(generate, gen.spec, 200, 10000, 10);
    generate->add_option("--feature-mode", gen.spec.feature_mode, "identity or poly2");
    generate->add_option("--out", gen.out, "dataset file")->required();

    SolveCmd sol;
    auto* solve = app.add_subcommand("solve", "solve the dual problem on a dataset");
    solve->add_option("--data", sol.data, "dataset file")->required();
    solve->add_option("--loss", sol.loss, "square, eps-insensitive, huber, logistic or hinge");
    solve->add_option("--eps", sol.eps, "epsilon-insensitive width");
    solve->add_option("--rho", sol.rho, "Huber threshold");
    add_exponent_flags(solve, sol.exps);
    solve->add_option("--gamma", sol.gamma, "loss weight");
    solve->add_option("--delta", sol.delta, "linesearch sufficient decrease parameter");
    solve->add_option("--theta", sol.theta, "linesearch shrink factor");
    solve->add_option("--lambda-bar", sol.lambda_bar, "initial stepsize");
    solve->add_option("--max-backtracks", sol.max_backtracks, "linesearch shrinks per iteration");
    solve->add_option("--max-iter", sol.max_iter, "iteration cap");
    solve->add_option("--tol", sol.tol, "relative duality gap tolerance");
    solve->add_flag("--check-certificate", sol.check_certificate,
                    "assert the geometric decay inequality (square loss)");
    auto* gram_opt = solve->add_option("--gram-file", sol.gram_file, "precomputed Gram tensor");
    auto* feat_opt = solve->add_option("--features", sol.features, "feature map: identity or poly2");
    gram_opt->excludes(feat_opt);
    solve->add_option("--algorithm", sol.algorithm, "auto, ls or prox");
    solve->add_flag("--binarize", sol.binarize, "map labels to their signs");
    solve->add_option("--trace", sol.trace, "per-iteration CSV");
    solve->add_option("--out", sol.out, "solution CSV");

    RatesCmd rates;
    auto* bench_rates = app.add_subcommand("bench-rates", "dual versus primal iteration counts");
    add_spec_flags(bench_rates, rates.spec, 200, 10000, 10);
    bench_rates->add_flag("--paper-scale", rates.paper_scale, "use d = 100000");
    bench_rates->add_option("--gamma", rates.gamma, "loss weight");
    bench_rates->add_option("--p-list", rates.p_list, "comma separated exponents");
    bench_rates->add_option("--tol", rates.tol, "relative precision target");
    bench_rates->add_option("--gd-max-iter", rates.gd_max_iter, "primal gradient descent cap");
    bench_rates->add_option("--fista-max-iter", rates.fista_max_iter, "FISTA cap");
    bench_rates->add_flag("--skip-gd", rates.skip_gd, "skip primal gradient descent");
    bench_rates->add_flag("--skip-fista", rates.skip_fista, "skip FISTA");
    bench_rates->add_option("--out-dir", rates.out_dir, "directory for CSV and plot data");

    KernelCmd kern;
    auto* bench_kernel = app.add_subcommand("bench-kernel", "Gram tensor versus feature map timing");
    add_spec_flags(bench_kernel, kern.spec, 90, 650, 6);
    bench_kernel->add_option("--gamma", kern.gamma, "loss weight");
    bench_kernel->add_option("--tol", kern.tol, "relative duality gap tolerance");
    bench_kernel->add_option("--max-samples", kern.max_samples, "Gram tensor sample cap");
    bench_kernel->add_option("--out-dir", kern.out_dir, "directory for CSV output");

    RecoverCmd rec;
    auto* recover = app.add_subcommand("recover", "support recovery over seeds and gammas");
    add_spec_flags(recover, rec.spec, 85, 1500, 6);
    recover->add_option("--gammas", rec.gammas, "comma separated loss weights");
    recover->add_option("--seeds", rec.seeds, "number of seeds starting at --seed");
    recover->add_option("--p", rec.p, "primal exponent");
    recover->add_option("--top-k", rec.top_k, "number of largest coefficients compared");
    recover->add_option("--threshold", rec.threshold, "relative threshold for the support size");
    recover->add_option("--tol", rec.tol, "relative duality gap tolerance");
    recover->add_option("--out-dir", rec.out_dir, "directory for CSV and plot data");

    GramCmd gb;
    auto* gram_build = app.add_subcommand("gram-build", "build and store a Gram tensor");
    gram_build->add_option("--data", gb.data, "dataset file")->required();
    gram_build->add_option("--kernel", gb.kernel, "linear, polynomial or exponential");
    gram_build->add_option("--degree", gb.degree, "polynomial degree");
    gram_build->add_option("--max-samples", gb.max_samples, "sample cap");
    gram_build->add_option("--out", gb.out, "Gram file")->required();

    try {
        std::vector<std::string> args = raw_args;
        if (const auto path = extract_config_path(args)) {
            std::ifstream file(*path);
            if (!file) throw InvalidArgument("cannot read config file " + *path);
            std::stringstream text;
            text << file.rdbuf();
            const auto tokens = config_tokens(text.str());
            const bool has_sub = !args.empty() && args.front().rfind("-", 0) != 0;
            args.insert(args.begin() + (has_sub ? 1 : 0), tokens.begin(), tokens.end());
        }
        // CLI11 consumes arguments from the back
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp& e) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << '\n';
            const auto subs = app.get_subcommands();
            err << (subs.empty() ? app.help() : subs.front()->help());
            return 2;
        }

        if (generate->parsed()) return do_generate(generate, gen, out);
        if (solve->parsed()) return do_solve(solve, sol, out);
        if (bench_rates->parsed()) return do_rates(bench_rates, rates, out);
        if (bench_kernel->parsed()) return do_kernel(bench_kernel, kern, out);
        if (recover->parsed()) return do_recover(recover, rec, out);
        if (gram_build->parsed()) return do_gram(gram_build, gb, out);
        err << app.help();
        return 2;
    } catch (const MemoryCapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace lptk
