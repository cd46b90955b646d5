#ifndef XNT_REPORT_HPP
#define XNT_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace xnt {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

using Json = nlohmann::ordered_json;

/// Versioned experiment record. Field order is insertion order, so identical
/// runs serialize identically apart from the "timing" block.
class Report {
public:
    Report(std::string subcommand, std::uint64_t seed);

    Json& config() { return root_["config"]; }
    Json& result() { return root_["result"]; }
    void disclose_kmax(unsigned k_max, const std::string& used_by);
    void invariant(const std::string& name, bool ok, const std::string& detail = "");
    bool ok() const;

    /// Adds a table; each row must have one cell per column.
    void table(const std::string& name, std::vector<std::string> columns, Json rows);
    const Json& tables() const { return root_["tables"]; }

    /// Wall-clock data; excluded from determinism comparisons.
    Json& timing() { return root_["timing"]; }
    const Json& json() const { return root_; }
    std::string dump() const { return root_.dump(2); }

    void write_json(const std::filesystem::path& path) const;
    /// One file per table: <prefix>_<table>.csv. Returns the paths written.
    std::vector<std::filesystem::path> write_csv(const std::string& prefix) const;

private:
    Json root_;
};

/// The report with its timing block removed, for determinism checks.
Json without_timing(const Json& report);

} // namespace xnt

#endif
