#include "cli_output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace quench::cli {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const KeyValues& meta, const std::vector<std::string>& columns)
    : out_(path), ncol_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << '#';
    for (const auto& [k, v] : meta) out_ << ' ' << k << '=' << v;
    out_ << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    if (cells.size() != ncol_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i].text;
    out_ << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_digest"] = m.config_digest;
    j["tool_version"] = m.tool_version;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& p : m.outputs) {
        std::error_code ec;
        const auto size = std::filesystem::file_size(p, ec);
        if (ec || size == 0) throw std::runtime_error("output missing or empty: " + p.string());
        j["outputs"].push_back(p.filename().string());
    }
    j["wall_time"] = m.wall_time;
    write_json(path, j);
}

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw UsageError("cannot create output directory " + dir_.string());
}

std::filesystem::path OutputSet::add(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
}

}  // namespace quench::cli
