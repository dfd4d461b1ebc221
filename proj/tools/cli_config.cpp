#include "cli_config.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

namespace quench::cli {

namespace {

std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

}  // namespace

KeyValues parse_config_text(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string val = trim(std::string_view(t).substr(eq + 1));
        if (key.empty() || val.empty())
            throw UsageError("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key)) throw UsageError("config line " + std::to_string(lineno) + ": duplicate key " + key);
        kv.emplace(std::move(key), std::move(val));
    }
    return kv;
}

KeyValues load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

void apply_config(CLI::App& sub, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (!opt || key == "config" || key == "help") throw UsageError("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        std::istringstream words(value);
        std::string w;
        while (words >> w) opt->add_result(w);
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

KeyValues effective_config(const CLI::App& sub) {
    KeyValues kv;
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config" || name == "out") continue;
        std::string val;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) val += (val.empty() ? "" : " ") + r;
        } else {
            val = opt->get_default_str();
        }
        kv[name] = val;
    }
    return kv;
}

std::string canonical_config(std::string_view command, const KeyValues& kv) {
    std::string s = "command=" + std::string(command) + "\n";
    for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
    return s;
}

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::filesystem::path default_output_dir() {
    if (const char* d = std::getenv(kOutDirEnv); d && *d) return d;
    return ".";
}

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw UsageError("empty entry in list '" + std::string(text) + "'");
        out.push_back(to_double(t));
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::pair<double, double> parse_range(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw UsageError("range must look like lo:hi");
    const double lo = to_double(trim(text.substr(0, colon)));
    const double hi = to_double(trim(text.substr(colon + 1)));
    if (!(lo > 0.0) || !(hi >= lo)) throw UsageError("range needs 0 < lo <= hi");
    return {lo, hi};
}

}  // namespace quench::cli
