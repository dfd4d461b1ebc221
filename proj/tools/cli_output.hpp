#pragma once

#include "cli_config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace quench::cli {

/// Round-trip formatting (%.17g); nan and inf print as nan, inf, -inf.
std::string fmt(double v);

/// One CSV cell.
struct Cell {
    std::string text;
    Cell(double v) : text(fmt(v)) {}
    Cell(int v) : text(std::to_string(v)) {}
    Cell(long v) : text(std::to_string(v)) {}
    Cell(std::size_t v) : text(std::to_string(v)) {}
    Cell(bool v) : text(v ? "1" : "0") {}
    Cell(std::string s) : text(std::move(s)) {}
    Cell(const char* s) : text(s) {}
};

/// `# k=v k=v` metadata line, a column line, then rows.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const KeyValues& meta, const std::vector<std::string>& columns);
    void row(const std::vector<Cell>& cells);

private:
    std::ofstream out_;
    std::size_t ncol_;
};

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::string tool_version;
    std::vector<std::filesystem::path> outputs;
    double wall_time = 0.0;
};

/// Checks that every output exists and is non-empty, then writes the manifest as JSON.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

/// Output directory plus the list of files written into it.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);
    std::filesystem::path add(const std::string& name);
    const std::filesystem::path& dir() const { return dir_; }
    const std::vector<std::filesystem::path>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
};

}  // namespace quench::cli
