#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli_commands.hpp"
#include "cli_config.hpp"
#include "cli_output.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace quench::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int rc;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "quench-cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("quench_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    return s;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("config text parsing") {
    const auto kv = parse_config_text("# comment\n  c = 1.2  \n\neps=0.0025 # trailing\n");
    CHECK(kv.size() == 2);
    CHECK(kv.at("c") == "1.2");
    CHECK(kv.at("eps") == "0.0025");
    CHECK_THROWS_AS(parse_config_text("c 1.2\n"), UsageError);
    CHECK_THROWS_AS(parse_config_text("= 1\n"), UsageError);
    CHECK_THROWS_AS(parse_config_text("c =\n"), UsageError);
    CHECK_THROWS_AS(parse_config_text("c = 1\nc = 2\n"), UsageError);
    CHECK_THROWS_AS(load_config("/nonexistent/quench.cfg"), UsageError);
}

TEST_CASE("lists, ranges and digests") {
    CHECK(parse_list("0.5,1.5") == std::vector<double>{0.5, 1.5});
    CHECK_THROWS_AS(parse_list("0.5,x"), UsageError);
    CHECK(parse_range("1e-4:1e-2") == std::pair{1e-4, 1e-2});
    CHECK_THROWS_AS(parse_range("1e-2:1e-4"), UsageError);
    CHECK_THROWS_AS(parse_range("0:1"), UsageError);
    CHECK_THROWS_AS(parse_range("1e-4"), UsageError);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(canonical_config("front", {{"eps", "0.1"}, {"c", "1"}}) == "command=front\nc=1\neps=0.1\n");
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(fmt(v)) == v);
    CHECK(fmt(std::nan("")) == "nan");
    CHECK(fmt(INFINITY) == "inf");
    CHECK(fmt(-INFINITY) == "-inf");
}

TEST_CASE("csv writer and manifest") {
    const auto dir = scratch("writer");
    OutputSet outs(dir / "sub");
    {
        CsvWriter w(outs.add("a.csv"), {{"k", "v"}}, {"x", "y"});
        w.row({1.5, "z"});
        CHECK_THROWS(w.row({1.0}));
    }
    CHECK(first_line(dir / "sub" / "a.csv") == "# k=v");
    write_manifest(dir / "m.json", {"front", "00", "1.0.0", outs.files(), 0.1});
    const auto j = nlohmann::json::parse(slurp(dir / "m.json"));
    CHECK(j["outputs"].size() == 1);
    outs.add("missing.csv");
    CHECK_THROWS(write_manifest(dir / "m2.json", {"front", "00", "1.0.0", outs.files(), 0.1}));
}

TEST_CASE("help names the reproduced claim") {
    for (const char* sub : {"front", "delay-sweep", "painleve", "pde"}) {
        CAPTURE(sub);
        const auto r = invoke({sub, "--help"});
        CHECK(r.rc == kOk);
        CHECK(r.out.find("Claim:") != std::string::npos);
    }
    CHECK(invoke({"--version"}).out.find(kToolVersion) != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    const auto dir = scratch("usage");
    CHECK(invoke({}).rc == kUsage);
    CHECK(invoke({"bogus"}).rc == kUsage);
    CHECK(invoke({"front", "--c", "2.5", "--out", dir.string()}).rc == kUsage);
    CHECK(invoke({"pde", "--dt", "1", "--out", dir.string()}).rc == kUsage);
    write_file(dir / "bad.cfg", "t-end 10\n");
    CHECK(invoke({"pde", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}).rc == kUsage);
    write_file(dir / "unknown.cfg", "nonsense = 1\n");
    const auto r = invoke({"pde", "--config", (dir / "unknown.cfg").string(), "--out", dir.string()});
    CHECK(r.rc == kUsage);
    CHECK(r.err.find("nonsense") != std::string::npos);
}

TEST_CASE("config precedence: flags over file over defaults") {
    const auto dir = scratch("precedence");
    write_file(dir / "p.cfg", "n = 4001\nclassify = 0.5\n");
    const auto a = dir / "a", b = dir / "b", d = dir / "d";
    REQUIRE(invoke({"painleve", "--config", (dir / "p.cfg").string(), "--out", a.string()}).rc == kOk);
    REQUIRE(invoke({"painleve", "--config", (dir / "p.cfg").string(), "--n", "6001", "--out", b.string()}).rc == kOk);
    REQUIRE(invoke({"painleve", "--out", d.string()}).rc == kOk);
    CHECK(first_line(a / "hm_solution.csv").find(" n=4001") != std::string::npos);
    CHECK(first_line(b / "hm_solution.csv").find(" n=6001") != std::string::npos);
    CHECK(first_line(d / "hm_solution.csv").find(" n=8001") != std::string::npos);
    CHECK(first_line(a / "hm_classes.csv").find("classify=0.5") != std::string::npos);
}

TEST_CASE("output directory from the environment") {
    const auto dir = scratch("env");
    setenv(kOutDirEnv, dir.string().c_str(), 1);
    const auto r = invoke({"pde", "--frozen-mu", "1", "--x-max", "40", "--dx", "0.5", "--t-end", "2"});
    unsetenv(kOutDirEnv);
    CHECK(r.rc == kOk);
    CHECK(fs::exists(dir / "pde_track.csv"));
    CHECK(fs::exists(dir / "pde_manifest.json"));
}

TEST_CASE("identical configs give identical data files") {
    const auto dir = scratch("determinism");
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"painleve", {"painleve", "--n", "4001", "--classify", "0.5,1.5"}},
        {"pde", {"pde", "--frozen-mu", "1", "--x-max", "60", "--dx", "0.5", "--t-end", "10", "--snapshot-every", "5"}},
        {"front", {"front", "--eps", "0.02"}},
        {"delay-sweep", {"delay-sweep", "--fold", "--jobs", "2"}},
    };
    for (const auto& [name, args] : runs) {
        CAPTURE(name);
        std::vector<fs::path> dirs{dir / (name + "1"), dir / (name + "2")};
        for (const auto& d : dirs) {
            auto a = args;
            a.push_back("--out");
            a.push_back(d.string());
            REQUIRE(invoke(a).rc == kOk);
        }
        const auto m1 = nlohmann::json::parse(slurp(dirs[0] / (name + "_manifest.json")));
        const auto m2 = nlohmann::json::parse(slurp(dirs[1] / (name + "_manifest.json")));
        CHECK(m1["config_digest"] == m2["config_digest"]);
        REQUIRE(!m1["outputs"].empty());
        for (const auto& f : m1["outputs"]) {
            const std::string file = f.get<std::string>();
            CAPTURE(file);
            CHECK(fs::file_size(dirs[0] / file) > 0);
            CHECK(slurp(dirs[0] / file) == slurp(dirs[1] / file));
        }
    }
}

TEST_CASE("delay sweep with one point refuses the fit") {
    const auto dir = scratch("single");
    const auto r = invoke({"delay-sweep", "--fold", "--eps-decade", "1e-4:1e-4", "--points", "1", "--out", dir.string()});
    CHECK(r.rc == kOk);
    CHECK(fs::exists(dir / "delay_sweep.csv"));
    const auto fit = nlohmann::json::parse(slurp(dir / "delay_fit.json"));
    CHECK(fit.dump().find("refused") != std::string::npos);
}
