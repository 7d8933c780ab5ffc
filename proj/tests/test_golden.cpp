// Golden-file CLI tests. Each case in golden/cases.json names a command line,
// its exit code and spot checks; the full stdout is compared byte-for-byte
// against golden/expected/<name>.out, both through run() and the built binary.
// NORMALFAN_UPDATE_GOLDEN=1 rewrites the expected files.

#include "normalfan/cli.hpp"
#include "normalfan/serialize.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using normalfan::Json;

namespace {

const std::string golden_dir = NORMALFAN_GOLDEN_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> expand(const Json& args) {
    std::vector<std::string> out;
    for (const auto& a : args) {
        std::string s = a.get<std::string>();
        if (!s.empty() && s[0] == '@')
            s = golden_dir + "/instances/" + s.substr(1);
        out.push_back(s);
    }
    return out;
}

struct Captured {
    int code;
    std::string out;
};

Captured run_binary(const std::vector<std::string>& args) {
    std::string cmd = std::string("'") + NORMALFAN_CLI_PATH + "'";
    for (const auto& a : args)
        cmd += " '" + a + "'";
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void apply_check(const Json& report, const Json& check) {
    const auto ptr = Json::json_pointer(check.at("pointer").get<std::string>());
    INFO("pointer " << check.at("pointer").get<std::string>());
    REQUIRE(report.contains(ptr));
    const Json& v = report.at(ptr);
    if (check.contains("equals"))
        CHECK(v == check.at("equals"));
    if (check.contains("size"))
        CHECK(v.size() == check.at("size").get<std::size_t>());
}

} // namespace

TEST_CASE("golden CLI cases") {
    const Json manifest = Json::parse(slurp(golden_dir + "/cases.json"));
    const bool update = std::getenv("NORMALFAN_UPDATE_GOLDEN") != nullptr;
    REQUIRE(manifest.at("cases").size() > 0);

    for (const auto& c : manifest.at("cases")) {
        const std::string name = c.at("name").get<std::string>();
        CAPTURE(name);
        const auto args = expand(c.at("args"));
        const int want_code = c.at("exit").get<int>();
        const std::string golden_path = golden_dir + "/expected/" + name + ".out";

        std::ostringstream out, err;
        const int code = normalfan::run(args, out, err);
        CHECK(code == want_code);
        if (code != 0)
            CHECK_FALSE(err.str().empty());

        if (update) {
            std::ofstream(golden_path, std::ios::binary) << out.str();
        } else {
            CHECK(out.str() == slurp(golden_path));
        }

        if (code == 0 && !c.at("checks").empty()) {
            const Json report = Json::parse(out.str());
            for (const auto& check : c.at("checks"))
                apply_check(report, check);
        }

        const Captured bin = run_binary(args);
        CHECK(bin.code == want_code);
        CHECK(bin.out == out.str());
    }
}

TEST_CASE("pretty format carries the same document") {
    const std::string sq = golden_dir + "/instances/square.json";
    std::ostringstream compact, pretty, err;
    REQUIRE(normalfan::run({"faces", sq}, compact, err) == 0);
    REQUIRE(normalfan::run({"faces", sq, "--format", "pretty"}, pretty, err) == 0);
    CHECK(Json::parse(compact.str()) == Json::parse(pretty.str()));
    CHECK(pretty.str().find('\n') < pretty.str().size() - 1);
}

TEST_CASE("input errors exit with code 2") {
    const std::string sq = golden_dir + "/instances/square.json";
    std::ostringstream out, err;
    CHECK(normalfan::run({"phi", sq, "--point", "1,x"}, out, err) == 2);
    CHECK(normalfan::run({"phi", golden_dir + "/cases.json", "--point", "1,1"}, out, err) == 2);
    CHECK(normalfan::run({"phi", golden_dir + "/no-such-file.json", "--point", "1,1"}, out, err) == 2);
    CHECK(normalfan::run({"localize", sq, "--g", "3", "--h", "99"}, out, err) == 2);
    CHECK(normalfan::run({"gen", "--kind", "simplex"}, out, err) == 2);
    CHECK(normalfan::run({"bogus"}, out, err) == 2);
    CHECK(normalfan::run({}, out, err) == 2);
}

TEST_CASE("help exits 0 and lists the flags") {
    std::ostringstream out, err;
    CHECK(normalfan::run({"--help"}, out, err) == 0);
    std::ostringstream sub;
    CHECK(normalfan::run({"verify", "--help"}, sub, err) == 0);
    const std::string text = sub.str();
    for (const char* flag : {"--samples", "--seed", "--per-pair", "--format"})
        CHECK(text.find(flag) != std::string::npos);
}

TEST_CASE("NORMALFAN_MAX_DIM caps the dimension") {
    const std::string cube = golden_dir + "/instances/cube.json";
    std::ostringstream out, err;
    setenv("NORMALFAN_MAX_DIM", "2", 1);
    CHECK(normalfan::run({"faces", cube}, out, err) == 2);
    CHECK(normalfan::run({"gen", "--dim", "3"}, out, err) == 2);
    setenv("NORMALFAN_MAX_DIM", "zero", 1);
    CHECK(normalfan::run({"faces", cube}, out, err) == 2);
    unsetenv("NORMALFAN_MAX_DIM");
    CHECK(normalfan::run({"faces", cube}, out, err) == 0);
}
