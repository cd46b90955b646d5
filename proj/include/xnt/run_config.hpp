#ifndef XNT_RUN_CONFIG_HPP
#define XNT_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xnt/poly_sieve.hpp"

namespace xnt {

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"klsum",      "tracesum",   "mixsum",   "sieve-check",
                                                "sieve-detect", "classify-u", "fibers",   "boxcount",
                                                "bound-scan", "poisson-check", "crt-check"};
    return names;
}

struct RunConfig {
    std::string subcommand;
    std::string f;
    std::string F;
    std::string G;
    std::int64_t B = 0;
    std::string Bs = "10,20,40,80";
    std::string primes = "auto";
    unsigned kmax = 2;
    ThresholdMode threshold = ThresholdMode::Lemma;
    std::uint64_t budget = 50'000'000;
    std::string out;
    std::string csv;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    unsigned m = 2;
    unsigned d = 2;
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    unsigned k = 1;
    std::string u;
    std::string trace = "kl2";
    std::string seq = "values:50";
    int ucut = -1;
    unsigned draws = 0;
    double tolerance = 1e-6;
};

/// Thrown for --help; carries the usage text.
struct HelpRequested {
    std::string text;
};

/// Parses argv (subcommand first). A `--config FILE` overlay supplies values
/// for flags not given on the command line. Throws InputError on unknown flags
/// and ParseError on malformed polynomial text.
RunConfig parse_config(int argc, const char* const* argv);

/// Comma-separated integers; InputError names the bad token.
std::vector<std::int64_t> parse_int_list(const std::string& text);

std::string to_string(ThresholdMode mode);

} // namespace xnt

#endif
