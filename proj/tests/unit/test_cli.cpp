#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fibscope/cli/cli.hpp"

using namespace fibscope;
namespace fs = std::filesystem;

namespace {

const std::string kMaps = std::string(FIBSCOPE_SOURCE_DIR) + "/maps/";

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("fibscope-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// File contents with the timestamp line removed.
std::string stable(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string out;
    for (std::string line; std::getline(in, line);)
        if (line.find("\"generated_at\"") == std::string::npos) out += line + "\n";
    return out;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = stable(e.path());
    return files;
}

bool single_line(const std::string& s) { return !s.empty() && s.find('\n') == s.size() - 1; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
    Result r = invoke({});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage:") != std::string::npos);
    r = invoke({"frobnicate", kMaps + "broughton.map"});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("fibscope: error: usage:", 0) == 0);
    CHECK(r.err.find("Subcommands:") != std::string::npos);
    CHECK(invoke({"milnor"}).code == 2);
    CHECK(invoke({"embed", kMaps + "broughton.map", "--format", "obj"}).code == 2);
    CHECK(invoke({"asymptotic", kMaps + "broughton.map", "--radii", "1,2"}).code == 2);
    CHECK(invoke({"sample", kMaps + "broughton.map", "--seed", "minus-one"}).code == 2);
    TempDir dir("usage");
    CHECK(invoke({"demo", "nosuch", "--out", dir.str()}).code == 2);
}

TEST_CASE("help lists defaults") {
    const Result r = invoke({"certify", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--seed") != std::string::npos);
    CHECK(r.out.find("[42]") != std::string::npos);
    CHECK(r.out.find("--cluster-tol") != std::string::npos);
    CHECK(r.out.find("[0.01]") != std::string::npos);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("domain errors exit with 1 and a single diagnostic line") {
    TempDir dir("domain");
    Result r = invoke({"parse", kMaps + "missing.map", "--out", dir.str()});
    CHECK(r.code == 1);
    CHECK(single_line(r.err));
    CHECK(r.err.rfind("fibscope: error: io:", 0) == 0);

    fs::create_directories(dir.path);
    const fs::path bad = dir.path / "bad.map";
    std::ofstream(bad) << "n = 2\nG1 = z1 + conj(z2)\nrho = 1, 1\n";
    r = invoke({"milnor", bad.string(), "--out", dir.str()});
    CHECK(r.code == 1);
    CHECK(single_line(r.err));
    CHECK(r.err.rfind("fibscope: error: spec-", 0) == 0);
    CHECK(r.err.find(" at 2:") != std::string::npos);

    // with rho = |z1|^2 the presentation of G = z1 vanishes identically
    const fs::path flat = dir.path / "flat.map";
    std::ofstream(flat) << "n = 2\nG1 = z1\nrho = 1, 0\n";
    r = invoke({"sample", flat.string(), "--out", dir.str(), "--samples", "4"});
    CHECK(r.code == 1);
    CHECK(single_line(r.err));
    CHECK(r.err.rfind("fibscope: error: domain: identically zero presentation", 0) == 0);
}

TEST_CASE("milnor and parse print canonical forms") {
    TempDir dir("milnor");
    Result r = invoke({"milnor", kMaps + "broughton.map", "--out", dir.str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("h = -4*z1*z2*conj(z2) - 2*conj(z2)\n", 0) == 0);
    const auto j = nlohmann::json::parse(slurp(dir.path / "milnor.json"));
    CHECK(j["h"] == "-4*z1*z2*conj(z2) - 2*conj(z2)");
    CHECK(j["config"]["subcommand"] == "milnor");
    CHECK(j.contains("generated_at"));

    r = invoke({"parse", kMaps + "twistsum.map", "--out", dir.str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n = 3\nG1 = z1\nG2 = z1*z3^2 + z2\nrho = 0, 0, 1\n", 0) == 0);
}

TEST_CASE("certify Broughton") {
    TempDir dir("certify");
    const Result r = invoke({"certify", kMaps + "broughton.map", "--seed", "42", "--out", dir.str()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir.path / "certificate.json"));
    const auto& c = j["certificate"];
    CHECK(c["conclusion"] == "b");
    CHECK(c["sg_verdict"] == "nonempty");
    REQUIRE(c["witness_clusters"].size() == 1);
    const auto& center = c["witness_clusters"][0]["center"];
    CHECK(std::hypot(center[0].get<double>(), center[1].get<double>()) < 1e-2);
    CHECK(j["config"]["seed"] == 42);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
    TempDir dir("repro");
    const std::vector<std::string> cmds{"sample", "asymptotic", "kinf", "embed"};
    std::map<std::string, std::string> first;
    for (const char* threads : {"1", "3"}) {
        setenv("FIBSCOPE_THREADS", threads, 1);
        fs::remove_all(dir.path);
        for (const auto& c : cmds) {
            std::vector<std::string> args{c, kMaps + "broughton.map", "--samples", "24", "--out", dir.str()};
            if (c == "embed") args.insert(args.end(), {"--format", "ply"});
            REQUIRE(invoke(args).code == 0);
        }
        const auto snap = snapshot(dir.path);
        if (first.empty()) {
            first = snap;
            CHECK(first.size() == 7);
        } else {
            CHECK(snap == first);
        }
    }
    unsetenv("FIBSCOPE_THREADS");
}

TEST_CASE("every subcommand runs on every shipped map with default flags") {
    TempDir dir("all");
    for (const char* map : {"broughton", "suspension", "twistsum", "twistsum_w"}) {
        for (const char* cmd : {"parse", "milnor", "sample", "asymptotic", "kinf", "leading", "certify", "embed"}) {
            CAPTURE(map);
            CAPTURE(cmd);
            const Result r = invoke({cmd, kMaps + map + ".map", "--out", dir.str()});
            CHECK(r.code == 0);
            CHECK(r.err.empty());
        }
    }
}
