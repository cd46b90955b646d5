#include "xnt/report.hpp"

#include <algorithm>
#include <fstream>

#include "xnt/error.hpp"

namespace xnt {

namespace {

std::string csv_cell(const Json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + "\"";
    }
    return v.dump();
}

} // namespace

Report::Report(std::string subcommand, std::uint64_t seed) {
    root_["tool"] = "xnt";
    root_["version"] = kToolVersion;
    root_["schema"] = kReportSchema;
    root_["subcommand"] = std::move(subcommand);
    root_["seed"] = seed;
    root_["config"] = Json::object();
    root_["result"] = Json::object();
    root_["invariants"] = Json::array();
    root_["tables"] = Json::object();
    root_["timing"] = Json::object();
}

void Report::disclose_kmax(unsigned k_max, const std::string& used_by) {
    auto& block = root_["semi_decision"];
    block["k_max"] = k_max;
    auto& users = block["used_by"];
    if (!users.is_array()) users = Json::array();
    if (std::find(users.begin(), users.end(), used_by) == users.end()) users.push_back(used_by);
    block["note"] = "no witness up to the stated extension degree is not a proof of absence";
}

void Report::invariant(const std::string& name, bool ok, const std::string& detail) {
    Json entry;
    entry["name"] = name;
    entry["ok"] = ok;
    if (!detail.empty()) entry["detail"] = detail;
    root_["invariants"].push_back(std::move(entry));
}

bool Report::ok() const {
    for (const auto& inv : root_["invariants"])
        if (!inv["ok"].get<bool>()) return false;
    return true;
}

void Report::table(const std::string& name, std::vector<std::string> columns, Json rows) {
    if (!rows.is_array()) throw InputError("table rows must be an array");
    for (const auto& row : rows)
        if (!row.is_array() || row.size() != columns.size())
            throw InputError("table " + name + " has a row of the wrong width");
    Json t;
    t["columns"] = std::move(columns);
    t["rows"] = std::move(rows);
    root_["tables"][name] = std::move(t);
}

void Report::write_json(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    out << dump() << '\n';
    if (!out) throw InputError("failed writing " + path.string());
}

std::vector<std::filesystem::path> Report::write_csv(const std::string& prefix) const {
    std::vector<std::filesystem::path> written;
    for (const auto& [name, t] : root_["tables"].items()) {
        const std::filesystem::path path = prefix + "_" + name + ".csv";
        std::ofstream out(path);
        if (!out) throw InputError("cannot open " + path.string() + " for writing");
        const auto& cols = t["columns"];
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].get<std::string>();
        out << '\n';
        for (const auto& row : t["rows"]) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
            out << '\n';
        }
        if (!out) throw InputError("failed writing " + path.string());
        written.push_back(path);
    }
    return written;
}

Json without_timing(const Json& report) {
    Json copy = report;
    copy.erase("timing");
    return copy;
}

} // namespace xnt
