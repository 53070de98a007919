#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dockslim/cli.hpp"

using namespace dockslim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("dockslim-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = path / name;
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }
};

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dockslim");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::string kPip = "FROM python:3\nRUN pip install flask\n";
const std::string kClean = "FROM alpine\nRUN apk add --no-cache curl\n";

}  // namespace

TEST_CASE("lint finds the pip smell") {
    TempDir d;
    const auto f = d.write("Dockerfile", kPip);
    const auto r = cli({"lint", f});
    CHECK(r.code == 1);
    CHECK(r.out.find(f + ":2:9: pipUseNoCacheDir: Clean cache after pip install. [fixable]") !=
          std::string::npos);
}

TEST_CASE("lint on a clean file exits 0") {
    TempDir d;
    const auto r = cli({"lint", d.write("Dockerfile", kClean), "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["files"][0]["diagnostics"].empty());
}

TEST_CASE("rule filter hides other rules") {
    TempDir d;
    CHECK(cli({"lint", "--rules", "apkAddUseNoCache", d.write("Dockerfile", kPip)}).code == 0);
}

TEST_CASE("unknown rules are a usage error") {
    TempDir d;
    const auto r = cli({"lint", "--rules", "nope", d.write("Dockerfile", kPip)});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("missing paths exit 2") {
    CHECK(cli({"lint", "/nonexistent/dockslim/Dockerfile"}).code == 2);
}

TEST_CASE("wholly unparseable input exits 2") {
    TempDir d;
    CHECK(cli({"lint", d.write("Dockerfile", std::string("\0\1\2\3", 4))}).code == 2);
}

TEST_CASE("DOCKSLIM_RULES sets the default filter") {
    TempDir d;
    const auto f = d.write("Dockerfile", kPip);
    ::setenv("DOCKSLIM_RULES", "apkAddUseNoCache", 1);
    const int filtered = cli({"lint", f}).code;
    const int overridden = cli({"lint", "--rules", "pipUseNoCacheDir", f}).code;
    ::unsetenv("DOCKSLIM_RULES");
    CHECK(filtered == 0);
    CHECK(overridden == 1);
}

TEST_CASE("json diagnostics carry the core fields") {
    TempDir d;
    const auto f = d.write("Dockerfile", "FROM a\nRUN apt-get update; apt-get install -y x\n");
    const auto r = cli({"lint", f, "--format", "json"});
    CHECK(r.code == 1);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["files"].size() == 1);
    const auto& ds = j["files"][0]["diagnostics"];
    REQUIRE(ds.size() == 2);
    for (const auto& x : ds) {
        for (const char* k : {"rule", "path", "line", "column", "message", "fixable"}) {
            CHECK(x.contains(k));
        }
    }
    CHECK(ds[1]["rule"] == "aptGetInstallThenRemoveAptLists");
    CHECK(ds[1]["fixable"] == false);
    CHECK(ds[1]["reason"] == "unsafe-top-level");
    CHECK(j["summary"].is_object());
}

TEST_CASE("lint writes a report file") {
    TempDir d;
    const auto f = d.write("Dockerfile", kPip);
    const auto out = (d.path / "report.json").string();
    CHECK(cli({"lint", f, "--format", "json", "-o", out}).code == 1);
    CHECK(nlohmann::json::parse(read(out))["files"][0]["diagnostics"].size() == 1);
}

TEST_CASE("fix prints the npm one-line diff") {
    TempDir d;
    std::string text = "FROM node:18\n";
    for (int i = 2; i <= 20; ++i) {
        text += "ENV V" + std::to_string(i) + "=x\n";
    }
    text += "RUN npm cache clean\nCMD [\"node\"]\n";
    const auto f = d.write("Dockerfile", text);
    const auto r = cli({"fix", f, "-U", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("@@ -21,1 +21,1 @@\n-RUN npm cache clean\n+RUN npm cache clean --force\n") !=
          std::string::npos);
    CHECK(read(f) == text);
}

TEST_CASE("fix on a clean file changes nothing") {
    TempDir d;
    const auto f = d.write("Dockerfile", kClean);
    const auto r = cli({"fix", "-i", f});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(read(f) == kClean);
}

TEST_CASE("fix with a top-level sequence reports not fixable") {
    TempDir d;
    const std::string text = "FROM a\nRUN apt-get update; apt-get install -y --no-install-recommends x\n";
    const auto f = d.write("Dockerfile", text);
    const auto r = cli({"fix", "-i", f});
    CHECK(r.code == 1);
    CHECK(r.err.find("not-fixable") != std::string::npos);
    CHECK(read(f) == text);
}

TEST_CASE("fix in place twice is stable") {
    TempDir d;
    const auto f = d.write("Dockerfile", "FROM a\nRUN apt-get update \\\n  && apt-get install -y curl\n");
    CHECK(cli({"fix", "-i", f}).code == 0);
    const std::string once = read(f);
    CHECK(once != "");
    CHECK(cli({"fix", "-i", f}).code == 0);
    CHECK(read(f) == once);
    CHECK(cli({"lint", f}).code == 0);
}

TEST_CASE("fix to an output directory keeps relative paths") {
    TempDir d;
    d.write("src/a/Dockerfile", kPip);
    const auto out = d.path / "out";
    const auto r = cli({"fix", (d.path / "src").string(), "--output-dir", out.string()});
    CHECK(r.code == 0);
    CHECK(read(out / "a" / "Dockerfile") == "FROM python:3\nRUN pip install --no-cache-dir flask\n");
    CHECK(read(d.path / "src" / "a" / "Dockerfile") == kPip);
}

TEST_CASE("directory discovery uses name globs") {
    TempDir d;
    d.write("a/Dockerfile", kPip);
    d.write("b/web.Dockerfile", kPip);
    d.write("c/Dockerfile.dev", kPip);
    d.write("d/notes.txt", kPip);
    d.write("e/MyDockerfileBackup", kPip);
    const auto r = cli({"lint", d.path.string(), "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)["files"].size() == 3);
    const auto s = cli({"lint", d.path.string(), "--format", "json", "--substring", "Dockerfile"});
    CHECK(nlohmann::json::parse(s.out)["files"].size() == 4);
}

TEST_CASE("stats deduplicates identical files") {
    TempDir d;
    d.write("x/Dockerfile", kPip);
    d.write("y/Dockerfile", kPip);
    const auto r = cli({"stats", d.path.string(), "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["files_scanned"] == 2);
    CHECK(j["unique_files"] == 1);
    CHECK(j["duplicates"] == 1);
    CHECK(j["rules"][0]["rule"] == "pipUseNoCacheDir");
    CHECK(j["rules"][0]["before"]["occurrences"] == 1);
    CHECK(j["rules"][0]["before"]["files"] == 1);
    CHECK(j["rules"][0]["after"]["occurrences"] == 0);
}

TEST_CASE("stats counts three pips in two files") {
    TempDir d;
    d.write("x/Dockerfile", "FROM p\nRUN pip install a && pip install b\n");
    d.write("y/Dockerfile", "FROM p\nRUN pip3 install c\n");
    const auto r = cli({"stats", d.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("# Docker Smell") != std::string::npos);
    CHECK(r.out.find("# Dockerfile with Smell") != std::string::npos);
    std::istringstream lines(r.out);
    std::string line;
    bool seen = false;
    while (std::getline(lines, line)) {
        if (line.rfind("pipUseNoCacheDir", 0) == 0) {
            seen = true;
            CHECK(line.find("3 (100.0%)") != std::string::npos);
            CHECK(line.find("2 (100.0%)") != std::string::npos);
        }
    }
    CHECK(seen);
}

TEST_CASE("stats on an empty directory is all zeros") {
    TempDir d;
    const auto j = nlohmann::json::parse(cli({"stats", d.path.string(), "--format", "json"}).out);
    CHECK(j["files_scanned"] == 0);
    CHECK(j["total"]["before"]["occurrences"] == 0);
    CHECK(j["total"]["before"]["files"] == 0);
}

TEST_CASE("rules lists all fourteen") {
    const auto r = cli({"rules", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).size() == 14);
}

TEST_CASE("help and bad usage") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"fix", "-i", "--output-dir", "x", "."}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("parallel runs give the same report") {
    TempDir d;
    for (int i = 0; i < 12; ++i) {
        d.write("d" + std::to_string(i) + "/Dockerfile",
                "FROM a\nRUN pip install p" + std::to_string(i) + " && apk add x\n");
    }
    const auto one = cli({"lint", d.path.string(), "--format", "json", "-j", "1"});
    const auto many = cli({"lint", d.path.string(), "--format", "json", "-j", "8"});
    CHECK(one.code == 1);
    CHECK(one.out == many.out);
}
