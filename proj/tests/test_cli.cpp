#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SVP_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = ::pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("kloosterman") {
    auto r = run("kloosterman --a 1 --b 1 --c 3");
    CHECK(r.code == 0);
    CHECK(r.out == "-1.000000000000\n");
    r = run("kloosterman --a 0 --b 0 --c 12");
    CHECK(r.out == "4.000000000000\n");
    CHECK(run("kloosterman --a 1 --b 1 --c 1").out == "1.000000000000\n");
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("kloosterman --a 1 --b 1 --c 0").code == 2);
    CHECK(run("kloosterman --a 1 --b 1").code == 2);
    CHECK(run("poincare --m 0 --weight 12 --N 1").code == 2);
    CHECK(run("poincare --m 1 --weight 3 --N 1").code == 2);
    CHECK(run("poincare --m 1 --weight 12 --c-max 10 --tol 1e-3").code == 2);
    CHECK(run("sv --N 13 --weight 2").code == 2);
    CHECK(run("nonsense").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("poincare --m 1 --format yaml").code == 2);
}

TEST_CASE("help exits with 0") {
    const auto r = run("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("poincare") != std::string::npos);
}

TEST_CASE("route unavailable exits with 4") {
    CHECK(run("sv --N 1 --weight 12 --route periods").code == 4);
}

TEST_CASE("tolerance not reached exits with 3") {
    const auto p = run("poincare --N 1 --weight 12 --m -1 --n-max 2 --tol 1e-30 --hard-cap 1000 --format json");
    CHECK(p.code == 3);
    const auto j = nlohmann::json::parse(p.out);
    CHECK(j[0].contains("warning"));
    CHECK(run("sv --N 1 --weight 12 --route poincare --tol 1e-30 --hard-cap 1000").code == 3);
}

TEST_CASE("poincare JSON is deterministic and canonical") {
    const std::string args = "poincare --N 1 --weight 12 --m -1 --n-max 3 --c-max 200 --format json";
    const auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::ordered_json::parse(a.out);
    CHECK(j.dump(2) + "\n" == a.out);
    REQUIRE(j.size() == 3);
    CHECK(j[0]["n"] == 1);
    CHECK(j[0]["c_max"] == 200);
    CHECK_FALSE(j[0].contains("warning"));
}

TEST_CASE("CSV output") {
    const auto r = run("poincare --N 1 --weight 12 --m 1 --n-max 2 --c-max 50 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("n,value,tail_estimate,c_max,warning\r\n", 0) == 0);
    std::size_t rows = 0;
    for (std::size_t pos = 0; (pos = r.out.find("\r\n", pos)) != std::string::npos; pos += 2) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "svp_cli_test_out.txt";
    std::filesystem::remove(path);
    const auto r = run("poincare --N 1 --weight 12 --m 1 --n-max 2 --c-max 50 --output " + path.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().rfind("# P_{1,12,1}", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("sv record") {
    const auto r = run("sv --N 9 --weight 4 --route poincare --n-max 4 --format json");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["level"] == 9);
    CHECK(j["weight"] == 4);
    CHECK(j["cm"] == true);
    CHECK(j["poincare"]["c"].is_number());
    CHECK(j["poincare"]["rho"].is_number());
    CHECK(j["poincare"]["residuals"].size() == 3);
    CHECK_FALSE(j.contains("periods"));

    const auto t = run("sv --N 11 --weight 2 --route periods");
    CHECK(t.code == 0);
    CHECK(t.out.find("periods.c: -0.58936") != std::string::npos);
}
