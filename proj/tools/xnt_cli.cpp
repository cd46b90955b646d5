#include <filesystem>
#include <iostream>

#include "xnt/error.hpp"
#include "xnt/experiments.hpp"
#include "xnt/run_config.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInvariantFailed = 2;

std::string csv_prefix(const xnt::RunConfig& c) {
    if (!c.csv.empty()) return c.csv;
    if (c.out.empty()) return "";
    std::filesystem::path p(c.out);
    return (p.parent_path() / p.stem()).string();
}

} // namespace

int main(int argc, char** argv) {
    xnt::RunConfig config;
    try {
        config = xnt::parse_config(argc, argv);
    } catch (const xnt::HelpRequested& help) {
        std::cout << help.text;
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        const auto report = xnt::run_experiment(config);
        if (config.out.empty())
            std::cout << report.dump() << '\n';
        else
            report.write_json(config.out);
        if (const auto prefix = csv_prefix(config); !prefix.empty()) report.write_csv(prefix);
        if (!report.ok()) {
            for (const auto& inv : report.json()["invariants"])
                if (!inv["ok"].get<bool>()) std::cerr << "invariant failed: " << inv["name"].get<std::string>() << '\n';
            return kInvariantFailed;
        }
        return kOk;
    } catch (const xnt::AssertionFailure& e) {
        std::cerr << "invariant failed: " << e.what() << '\n';
        return kInvariantFailed;
    } catch (const std::exception& e) {
        std::cerr << "error in " << config.subcommand << ": " << e.what() << '\n';
        return kInputError;
    }
}
