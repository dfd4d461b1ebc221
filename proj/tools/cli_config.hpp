#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace CLI {
class App;
}

namespace quench::cli {

/// Bad flags, bad config files, out-of-range arguments. Maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Default output directory comes from this variable when --out is absent.
inline constexpr const char* kOutDirEnv = "QUENCH_OUT_DIR";

/// Flat `key = value` lines; `#` starts a comment. Keys use the long flag names without dashes.
KeyValues parse_config_text(std::string_view text);
KeyValues load_config(const std::filesystem::path& path);

/// Fills options of `sub` that were not given on the command line from `kv`.
/// Unknown keys raise UsageError.
void apply_config(CLI::App& sub, const KeyValues& kv);

/// Effective option values of `sub` (command line, config or default), skipping help, config and out.
KeyValues effective_config(const CLI::App& sub);

/// "key=value\n" lines in key order, prefixed by the command name.
std::string canonical_config(std::string_view command, const KeyValues& kv);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

std::filesystem::path default_output_dir();

/// "0.5,1.5" -> {0.5, 1.5}
std::vector<double> parse_list(std::string_view text);
/// "1e-4:1e-2" -> {1e-4, 1e-2}
std::pair<double, double> parse_range(std::string_view text);

}  // namespace quench::cli
