#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "xnt/error.hpp"
#include "xnt/experiments.hpp"
#include "xnt/run_config.hpp"
#include "xnt/trace_lab.hpp"

using namespace xnt;

namespace {

RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "xnt_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_config(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "xnt_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(XNT_CLI_PATH) + " " + args + " > " + scratch("stdout.txt").string() + " 2> " +
                            scratch("stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

} // namespace

TEST_CASE("config parsing") {
    const auto c = parse({"boxcount", "--f", "T^2", "--F", "X0^2+X1^2+X2^2", "--B", "20"});
    CHECK(c.subcommand == "boxcount");
    CHECK(c.B == 20);
    CHECK(c.threshold == ThresholdMode::Lemma);
    CHECK(parse({"boxcount", "--f", "T^2", "--F", "X0^2", "--threshold", "logp"}).threshold == ThresholdMode::LogP);

    try {
        parse({"klsum", "--F", "X1^^2", "--p", "5"});
        FAIL("malformed polynomial accepted");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
        CHECK(std::string(e.what()).find("offset 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse({"boxcount", "--nonsense", "3"}), InputError);
    CHECK_THROWS_AS(parse({"klsum", "--B", "3"}), InputError);
    CHECK_THROWS_AS(parse({"boxcount", "--threshold", "other"}), InputError);
    CHECK_THROWS_AS(parse({"boxcount", "--primes", "3,5"}), InputError);
    CHECK_THROWS_AS(parse({}), InputError);
    CHECK_THROWS_AS(parse({"klsum", "--help"}), HelpRequested);
    CHECK(parse_int_list("1,-2,30") == std::vector<std::int64_t>{1, -2, 30});
    CHECK_THROWS_AS(parse_int_list("1,,2"), InputError);

    const auto file = scratch("overlay.toml");
    std::ofstream(file) << "f = \"T^3\"\nB = 7\nthreshold = \"logp\"\n";
    const auto o = parse({"boxcount", "--config", file.string(), "--B", "9", "--F", "X0^2+X1^2"});
    CHECK(o.f == "T^3");
    CHECK(o.B == 9);
    CHECK(o.threshold == ThresholdMode::LogP);
    std::ofstream(file) << "unknown_key = 1\n";
    CHECK_THROWS_AS(parse({"boxcount", "--config", file.string()}), InputError);
}

TEST_CASE("klsum report") {
    const auto report = run_experiment(parse({"klsum", "--m", "2", "--p", "13", "--F", "X1^3+X2^3+X3^3"}));
    const auto f = build_ext_field(13, 1);
    const auto kl = kloosterman(2, f);
    Complex S = 0.0;
    for (std::int64_t a = 0; a < 13; ++a)
        for (std::int64_t b = 0; b < 13; ++b)
            for (std::int64_t c = 0; c < 13; ++c) S += kl((a * a * a + b * b * b + c * c * c) % 13);
    const auto& res = report.json()["result"];
    CHECK(res["abs"].get<double>() == doctest::Approx(std::abs(S)).epsilon(1e-9));
    CHECK(res["normalized"].get<double>() == doctest::Approx(std::abs(S) / std::pow(13.0, 1.5)).epsilon(1e-9));
    CHECK(report.tables()["fibers"]["rows"].size() == 13);
    CHECK(report.ok());
}

TEST_CASE("subcommand reports") {
    const auto sc = run_experiment(parse({"sieve-check", "--d", "3", "--p", "7"}));
    CHECK(sc.json()["result"]["max_error"].get<double>() <= 1e-9);

    const auto tw = run_experiment(parse({"tracesum", "--trace", "legendre", "--p", "13", "--F", "X0^2+X1^2+X2^2",
                                          "--u", "1,2,3", "--kmax", "1"}));
    CHECK(tw.json()["semi_decision"]["k_max"] == 1);
    CHECK(tw.json()["result"].contains("u_class"));
    CHECK(tw.ok());

    const auto mix = run_experiment(parse({"mixsum", "--F", "X1^2+X2^2+X3^2", "--G", "X1", "--p", "5"}));
    CHECK(mix.tables()["pairs"]["rows"].size() == 25);
    CHECK(mix.ok());

    const auto det = run_experiment(parse({"sieve-detect", "--f", "T^2"}));
    CHECK(det.json()["result"]["ledger"]["hypothesis_ok"] == true);
    CHECK(det.json()["result"]["ledger"]["inequality_holds"] == true);
    CHECK(det.tables()["primes"]["rows"].size() == 8);

    const auto bad = run_experiment(parse({"sieve-detect", "--f", "T^3", "--primes", "list:7,13", "--seq", "points:753571"}));
    CHECK(bad.json()["result"]["ledger"]["support_ok"] == false);
    CHECK(bad.json()["result"]["power_sieve"]["ratio_V_over_rhs"].get<double>() == doctest::Approx(2.0));

    const auto cls = run_experiment(parse({"classify-u", "--F", "X0^2+X1^2+X2^2", "--u", "1,2,0", "--p", "5"}));
    CHECK(cls.json()["result"]["u_class"] == "bad");
    CHECK(cls.json()["result"]["u_class_exact"] == "bad");

    const auto fib = run_experiment(parse({"fibers", "--F", "X1^4 - 6*X1^2", "--p", "7", "--kmax", "2"}));
    CHECK(fib.json()["result"]["singular_lambdas"].size() == 2);

    const auto bs = run_experiment(parse({"bound-scan", "--f", "T^2", "--F", "X0^2+X1^2+X2^2", "--Bs", "5,10"}));
    CHECK(bs.tables()["ratios"]["rows"].size() == 2);

    const auto pc = run_experiment(parse({"poisson-check", "--F", "X0^2+X1^2+X2^2", "--B", "10", "--p", "3", "--q", "5",
                                          "--trace", "legendre"}));
    CHECK(pc.ok());

    const auto crt = run_experiment(parse({"crt-check", "--F", "X0^2+X1^2", "--p", "3", "--q", "5", "--trace", "legendre",
                                           "--draws", "4", "--u", "1,1"}));
    CHECK(crt.json()["result"]["draws"] == 5);
    CHECK(crt.ok());

    CHECK_THROWS_AS(run_experiment(parse({"boxcount", "--f", "T^2", "--F", "X0^2+X1^2+X2^2", "--B", "5", "--primes", "list:"})),
                    InputError);
    CHECK_THROWS_AS(run_experiment(parse({"klsum", "--p", "13"})), InputError);
    CHECK_THROWS_AS(run_experiment(parse({"tracesum", "--p", "13", "--F", "X0^2", "--trace", "nope"})), InputError);
}

TEST_CASE("JSON round trip, determinism and CSV") {
    const auto config = parse({"boxcount", "--f", "T^2", "--F", "X0^2+X1^2+X2^2", "--B", "10", "--seed", "42"});
    const auto first = run_experiment(config);
    const auto second = run_experiment(config);
    CHECK(without_timing(first.json()).dump() == without_timing(second.json()).dump());
    CHECK(first.json()["seed"] == 42);
    CHECK(first.json()["version"] == kToolVersion);

    const auto path = scratch("report.json");
    first.write_json(path);
    std::ifstream in(path);
    const auto back = Json::parse(in);
    CHECK(back == first.json());

    const auto files = first.write_csv(scratch("report").string());
    CHECK(files.size() == first.tables().size());
    const auto& res = first.json()["result"];
    CHECK(line_count(scratch("report_classification.csv")) == 4);
    const auto tally = res["classification"]["zero"].get<std::uint64_t>() + res["classification"]["good"].get<std::uint64_t>() +
                       res["classification"]["bad"].get<std::uint64_t>();
    std::ifstream csv(scratch("report_classification.csv"));
    std::string line;
    std::getline(csv, line);
    std::uint64_t total = 0;
    while (std::getline(csv, line)) total += std::stoull(line.substr(line.find(',') + 1));
    CHECK(total == tally);
    CHECK(line_count(scratch("report_exceptional.csv")) ==
          1 + std::min<std::size_t>(50, res["exceptional_set"]["members"].size()));
}

TEST_CASE("binary exit codes") {
    CHECK(run_cli("klsum --m 2 --p 13 --F \"X1^3+X2^3+X3^3\"") == 0);
    CHECK(run_cli("sieve-check --d 3 --p 7 --out " + scratch("sc.json").string()) == 0);
    CHECK(std::filesystem::exists(scratch("sc.json")));
    CHECK(std::filesystem::exists(scratch("sc_decomposition.csv")));
    CHECK(run_cli("klsum --p 5 --F \"X1^^2\"") == 1);
    CHECK(run_cli("boxcount --f T^2 --F \"X0^2+X1^2+X2^2\" --B 5 --primes list:") == 1);
    CHECK(run_cli("boxcount --wrong 1") == 1);
    CHECK(run_cli("crt-check --F \"X0^3+X1^3\" --p 7 --q 5 --trace kl2 --u 3,4 --tol 1e-300") == 2);
    CHECK(run_cli("klsum --help") == 0);
}
