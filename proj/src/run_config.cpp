#include "xnt/run_config.hpp"

#include <map>
#include <set>

#include <CLI11.hpp>

#include "xnt/error.hpp"
#include "xnt/poly_algebra.hpp"

namespace xnt {

namespace {

std::string describe(const std::string& name) {
    static const std::map<std::string, std::string> text{
        {"klsum", "sum of Kl_m over the values of F mod p"},
        {"tracesum", "sum of a trace function over the values of F mod p"},
        {"mixsum", "mixed sum over the joint values of F and G"},
        {"sieve-check", "exact character decomposition of the d-th power indicator"},
        {"sieve-detect", "sieve detectors and the large-sieve inequality on a sequence"},
        {"classify-u", "zero/good/bad type of a dual vector u"},
        {"fibers", "fiber counts N(a) of F over F_p"},
        {"boxcount", "count x in [-B,B]^{n+1} with F(x) in f(Z)"},
        {"bound-scan", "box counts against the theorem and Serre rates"},
        {"poisson-check", "smoothed sum against its truncated dual sum"},
        {"crt-check", "factorization of a sum mod pq into sums mod p and q"}};
    const auto it = text.find(name);
    return it == text.end() ? std::string{} : it->second;
}

// Flags accepted by each subcommand, beyond --out, --csv, --seed and --config.
const std::map<std::string, std::set<std::string>>& flag_table() {
    static const std::map<std::string, std::set<std::string>> table{
        {"klsum", {"m", "p", "k", "F", "u", "kmax", "budget"}},
        {"tracesum", {"trace", "p", "k", "F", "u", "kmax", "budget"}},
        {"mixsum", {"trace", "p", "k", "F", "G", "budget"}},
        {"sieve-check", {"d", "p"}},
        {"sieve-detect", {"f", "primes", "threshold", "seq"}},
        {"classify-u", {"F", "u", "p", "kmax", "budget"}},
        {"fibers", {"F", "G", "p", "kmax", "budget"}},
        {"boxcount", {"f", "F", "B", "primes", "threshold", "kmax", "budget", "threads"}},
        {"bound-scan", {"f", "F", "Bs", "budget", "threads"}},
        {"poisson-check", {"F", "B", "p", "q", "trace", "ucut"}},
        {"crt-check", {"F", "p", "q", "u", "trace", "draws", "tol", "budget"}},
    };
    return table;
}

void add_flags(CLI::App* sub, const std::set<std::string>& flags, RunConfig& c, std::string& threshold) {
    auto has = [&](const char* name) { return flags.count(name) != 0; };
    if (has("f")) sub->add_option("--f", c.f, "univariate polynomial in T");
    if (has("F")) sub->add_option("--F", c.F, "polynomial in X0..Xn");
    if (has("G")) sub->add_option("--G", c.G, "second polynomial in the same variables");
    if (has("B")) sub->add_option("--B", c.B, "box radius")->check(CLI::NonNegativeNumber);
    if (has("Bs")) sub->add_option("--Bs", c.Bs, "comma-separated box radii");
    if (has("primes")) sub->add_option("--primes", c.primes, "auto or list:p1,p2,...");
    if (has("kmax")) sub->add_option("--kmax", c.kmax, "largest extension degree scanned")->check(CLI::Range(1, 4));
    if (has("threshold"))
        sub->add_option("--threshold", threshold, "exceptional-set threshold")->check(CLI::IsMember({"lemma", "logp"}));
    if (has("budget")) sub->add_option("--budget", c.budget, "maximum points enumerated")->check(CLI::PositiveNumber);
    if (has("threads")) sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
    if (has("m")) sub->add_option("--m", c.m, "Kloosterman order")->check(CLI::Range(1, 8));
    if (has("d")) sub->add_option("--d", c.d, "character order")->check(CLI::Range(1, 1000));
    if (has("p")) sub->add_option("--p", c.p, "prime");
    if (has("q")) sub->add_option("--q", c.q, "second prime");
    if (has("k")) sub->add_option("--k", c.k, "extension degree")->check(CLI::Range(1, 4));
    if (has("u")) sub->add_option("--u", c.u, "comma-separated frequency vector");
    if (has("trace")) sub->add_option("--trace", c.trace, "trace function name");
    if (has("seq")) sub->add_option("--seq", c.seq, "values:K | range:L:R | points:n1,n2,...");
    if (has("ucut")) sub->add_option("--ucut", c.ucut, "dual cutoff; negative picks one automatically");
    if (has("draws")) sub->add_option("--draws", c.draws, "random frequency draws");
    if (has("tol")) sub->add_option("--tol", c.tolerance, "relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "JSON report path");
    sub->add_option("--csv", c.csv, "CSV file prefix");
    sub->add_option("--seed", c.seed, "seed for randomized checks");
    sub->add_option("--config", "TOML/INI file supplying values for flags not given");
}

// Values from the file fill only the flags absent on the command line.
void apply_overlay(CLI::App* sub, const std::string& path) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw InputError("config file " + path + ": " + e.what());
    }
    for (const auto& item : items) {
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub->get_name()))
            throw InputError("config file " + path + ": unexpected section for key '" + item.name + "'");
        auto* opt = sub->get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config")
            throw InputError("config file " + path + ": unknown key '" + item.name + "'");
        if (opt->count() != 0) continue;
        try {
            opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw InputError("config file " + path + ": key '" + item.name + "': " + e.what());
        }
    }
}

} // namespace

std::string to_string(ThresholdMode mode) { return mode == ThresholdMode::Lemma ? "lemma" : "logp"; }

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size())
            throw InputError("bad integer '" + token + "' in list '" + text + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

RunConfig parse_config(int argc, const char* const* argv) {
    RunConfig c;
    std::string threshold = "lemma";
    CLI::App app{"Exponential sums, polynomial sieves and box counts", "xnt_cli"};
    app.require_subcommand(1, 1);
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name, describe(name));
        add_flags(sub, flag_table().at(name), c, threshold);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw InputError(e.what());
    }
    auto* sub = app.get_subcommands().front();
    c.subcommand = sub->get_name();
    if (auto* cfg = sub->get_option("--config"); cfg->count() != 0) apply_overlay(sub, cfg->as<std::string>());
    if (threshold != "lemma" && threshold != "logp") throw InputError("--threshold must be lemma or logp");
    c.threshold = threshold == "logp" ? ThresholdMode::LogP : ThresholdMode::Lemma;

    if (!c.f.empty()) (void)parse_uni(c.f);
    if (!c.F.empty()) (void)parse_multi(c.F);
    if (!c.G.empty()) (void)parse_multi(c.G);
    if (!c.u.empty()) (void)parse_int_list(c.u);
    if (c.primes != "auto" && c.primes.rfind("list:", 0) != 0)
        throw InputError("--primes must be 'auto' or 'list:p1,p2,...'");
    return c;
}

} // namespace xnt
