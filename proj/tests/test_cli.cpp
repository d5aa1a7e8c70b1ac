#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lptk/cli.hpp"
#include "lptk/error.hpp"

using namespace lptk;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "lptk_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string path_of(const std::string& name) { return (scratch_dir() / name).string(); }

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
}

std::string small_dataset(const std::string& name, const std::string& extra_mode = "identity") {
    const std::string out = path_of(name);
    const Run r = cli({"generate", "--n", "12", "--d", "40", "--k", "3", "--sigma", "0.05", "--seed",
                       "1", "--feature-mode", extra_mode, "--out", out});
    REQUIRE(r.code == 0);
    return out;
}

} // namespace

TEST_CASE("parse_exponent and config tokens") {
    CHECK(parse_exponent("4/3") == doctest::Approx(4.0 / 3.0));
    CHECK(parse_exponent("1.25") == 1.25);
    CHECK_THROWS_AS(parse_exponent("1.2x"), InvalidArgument);
    CHECK_THROWS_AS(parse_exponent("1/0"), InvalidArgument);
    const auto tokens = config_tokens("# comment\n\n gamma = 3 \np-list=4/3,1.1\n");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == "--gamma=3");
    CHECK(tokens[1] == "--p-list=4/3,1.1");
    CHECK_THROWS_AS(config_tokens("gamma\n"), InvalidArgument);
}

TEST_CASE("generate writes a dataset and echoes its config") {
    const std::string out = path_of("gen.bin");
    const Run r = cli({"generate", "--n", "200", "--d", "10000", "--k", "10", "--sigma", "0.05",
                       "--seed", "1", "--out", out});
    CHECK(r.code == 0);
    CHECK(fs::exists(out));
    CHECK(fs::file_size(out) > 200u * 10000u * 8u);
    CHECK(r.out.find("# seed=1") != std::string::npos);
    CHECK(r.out.find("# rng=") != std::string::npos);
    CHECK(r.out.find("help") == std::string::npos);
}

TEST_CASE("solve writes a monotone trace") {
    const std::string data = small_dataset("solve.bin");
    const std::string trace = path_of("trace.csv");
    const std::string sol = path_of("solution.csv");
    const Run r = cli({"solve", "--loss", "square", "--p", "1.3333333333", "--gamma", "10", "--data",
                       data, "--trace", trace, "--out", sol});
    REQUIRE(r.code == 0);
    CHECK(value_of(r.out, "converged") == "true");
    // 1.3333333333 is read as q = 4
    CHECK(r.out.find("# p=1.3333333333") != std::string::npos);

    std::istringstream csv(slurp(trace));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "iter,lambda,objective,grad_norm,gap,primal_err,wall_ns");
    double prev = 1e300;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream fields(line);
        std::string field;
        std::getline(fields, field, ',');
        std::getline(fields, field, ',');
        std::getline(fields, field, ',');
        const double objective = std::stod(field);
        CHECK(objective <= prev);
        prev = objective;
        ++rows;
    }
    CHECK(rows == std::stoi(value_of(r.out, "iterations")) + 1);
    CHECK(slurp(sol).find("alpha,0,") != std::string::npos);
    CHECK(slurp(sol).find("w,39,") != std::string::npos);

    // identical flags give identical numeric output
    const Run again = cli({"solve", "--loss", "square", "--p", "1.3333333333", "--gamma", "10",
                           "--data", data});
    CHECK(value_of(again.out, "dual_objective") == value_of(r.out, "dual_objective"));
    CHECK(value_of(again.out, "iterations") == value_of(r.out, "iterations"));
}

TEST_CASE("exponents") {
    const std::string data = small_dataset("exps.bin");
    // the feature path takes any q > 1, odd ones included
    CHECK(cli({"solve", "--data", data, "--p", "1.1"}).code == 0);
    CHECK(cli({"solve", "--data", data, "--q", "6"}).code == 0);
    CHECK(cli({"solve", "--data", data, "--p", "1"}).code == 2);
    CHECK(cli({"solve", "--data", data, "--q", "6", "--p", "1.2"}).code == 2);
}

TEST_CASE("unknown flags and bad values exit with 2") {
    const Run r = cli({"solve", "--no-such-flag"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"solve", "--data", path_of("missing.bin")}).code == 2);
    const std::string data = small_dataset("bad.bin");
    CHECK(cli({"solve", "--data", data, "--loss", "cauchy"}).code == 2);
    CHECK(cli({"solve", "--data", data, "--gamma", "-1"}).code == 2);
    CHECK(cli({"solve", "--data", data, "--algorithm", "ls", "--loss", "huber"}).code == 2);
}

TEST_CASE("config file composes with flags") {
    const std::string data = small_dataset("config.bin");
    const std::string cfg = path_of("solve.cfg");
    {
        std::ofstream out(cfg);
        out << "# solver settings\nloss=huber\nrho=0.5\ngamma=3\ndata=" << data << "\n";
    }
    const Run from_file = cli({"solve", "--config", cfg});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out.find("# gamma=3\n") != std::string::npos);
    CHECK(from_file.out.find("# loss=huber\n") != std::string::npos);

    const Run overridden = cli({"solve", "--config", cfg, "--gamma", "7"});
    REQUIRE(overridden.code == 0);
    CHECK(overridden.out.find("# gamma=7\n") != std::string::npos);
    CHECK(overridden.out.find("# rho=0.5\n") != std::string::npos);
    CHECK(value_of(overridden.out, "dual_objective") != value_of(from_file.out, "dual_objective"));

    CHECK(cli({"solve", "--config", path_of("nope.cfg")}).code == 2);
}

TEST_CASE("solver failures exit with 1") {
    const std::string data = small_dataset("fail.bin");
    const Run r = cli({"solve", "--data", data, "--algorithm", "prox", "--lambda-bar", "1e12",
                       "--max-backtracks", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("solver error") != std::string::npos);
    // an iteration cap is not an error
    const Run capped = cli({"solve", "--data", data, "--max-iter", "1", "--tol", "1e-15"});
    CHECK(capped.code == 0);
    CHECK(value_of(capped.out, "converged") == "false");
}

TEST_CASE("margin losses need binary labels") {
    const std::string data = small_dataset("margin.bin");
    CHECK(cli({"solve", "--data", data, "--loss", "hinge"}).code == 2);
    const Run r = cli({"solve", "--data", data, "--loss", "hinge", "--binarize"});
    CHECK(r.code == 0);
    CHECK(value_of(r.out, "converged") == "true");
    CHECK(cli({"solve", "--data", data, "--loss", "logistic", "--binarize"}).code == 0);
    CHECK(cli({"solve", "--data", data, "--loss", "square", "--binarize"}).code == 2);
}

TEST_CASE("Gram file and feature map paths agree") {
    const std::string data = small_dataset("gram.bin", "poly2");
    const std::string gram = path_of("gram.lptk");
    const Run built = cli({"gram-build", "--data", data, "--kernel", "polynomial", "--degree", "2",
                           "--out", gram});
    REQUIRE(built.code == 0);
    CHECK(value_of(built.out, "n") == "12");

    const Run with_k = cli({"solve", "--data", data, "--gram-file", gram, "--tol", "1e-12"});
    const Run without_k = cli({"solve", "--data", data, "--features", "poly2", "--tol", "1e-12"});
    REQUIRE(with_k.code == 0);
    REQUIRE(without_k.code == 0);
    const double a = std::stod(value_of(with_k.out, "dual_objective"));
    const double b = std::stod(value_of(without_k.out, "dual_objective"));
    CHECK(a == doctest::Approx(b).epsilon(1e-10));

    CHECK(cli({"solve", "--data", data, "--gram-file", gram, "--features", "poly2"}).code == 2);
    CHECK(cli({"solve", "--data", data, "--gram-file", gram, "--q", "6"}).code == 2);
    CHECK(cli({"gram-build", "--data", data, "--max-samples", "5", "--out", gram}).code == 2);
}

TEST_CASE("bench-rates prints the four exponent columns") {
    const std::string cfg = path_of("table1.cfg");
    {
        std::ofstream out(cfg);
        out << "n=15\nd=120\nk=3\nseed=2\ngd-max-iter=50\nfista-max-iter=200\n";
    }
    const std::string dir = path_of("rates_out");
    fs::create_directories(dir);
    const Run r = cli({"bench-rates", "--config", cfg, "--out-dir", dir});
    REQUIRE(r.code == 0);
    for (const char* label : {"p=4/3", "p=5/4", "p=1.1", "p=1.05"}) {
        CHECK(r.out.find(label) != std::string::npos);
    }
    CHECK(r.out.find("primal FISTA") != std::string::npos);
    CHECK(fs::exists(fs::path(dir) / "rates.csv"));
    CHECK(fs::exists(fs::path(dir) / "table1.txt"));
}

TEST_CASE("bench-kernel refuses oversized Gram tensors") {
    const Run r = cli({"bench-kernel", "--n", "200", "--d", "10", "--k", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--features poly2") != std::string::npos);
    const Run ok = cli({"bench-kernel", "--n", "8", "--d", "5", "--k", "2"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("(with K)") != std::string::npos);
}

TEST_CASE("recover reports the best gamma") {
    const std::string dir = path_of("recover_out");
    fs::create_directories(dir);
    const Run r = cli({"recover", "--n", "30", "--d", "150", "--k", "3", "--seeds", "2", "--gammas",
                       "1,10", "--top-k", "3", "--out-dir", dir});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("best gamma") != std::string::npos);
    CHECK(fs::exists(fs::path(dir) / "truth.dat"));
    CHECK(fs::exists(fs::path(dir) / "estimate.dat"));
}
