#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HECKE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string tmp(const std::string& name, const std::string& body) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST(Cli, Decompose) {
    EXPECT_EQ(run("decompose --m 2 --n 1").out, "Sym3⊗det^-1: 1, Sym1: 2\n");
    EXPECT_EQ(run("decompose --m 1 --n 0").out, "Sym1: 1\n");
    const auto j = nlohmann::json::parse(run("--format json decompose --m 4 --n 4").out);
    EXPECT_EQ(j.back()["class"], "Sym0");
    EXPECT_EQ(j.back()["multiplicity"], "14");
    EXPECT_EQ(run("decompose --m 0 --n 0").code, 2);
    EXPECT_EQ(run("decompose --m 1").code, 2);
}

TEST(Cli, Atable) {
    const auto j5 = nlohmann::json::parse(run("--format json atable --r 5").out);
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(j5[n]["A"], n == 4 ? "14" : "≤1");
    const auto j2 = nlohmann::json::parse(run("atable --r 2 --format json").out);
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(j2[n]["A"], n % 2 == 0 ? "14" : "0");
    const auto j23 = nlohmann::json::parse(run("atable --r 23 --format json").out);
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(j23[n]["A"], n == 4 ? "14" : "0");
    EXPECT_EQ(run("atable --r 1").code, 2);
}

TEST(Cli, Constants) {
    const auto t = run("constants --r 2").out;
    EXPECT_TRUE(contains(t, "q8           7 (7)"));
    EXPECT_TRUE(contains(run("constants --r 2 --phi 0").out, "q4(0)        1 "));
    const auto j = nlohmann::json::parse(run("--format json constants --r 20").out);
    bool seen = false;
    for (const auto& row : j)
        if (row["quantity"] == "256 q8") {
            EXPECT_EQ(row["value"]["exact"], "982");
            seen = true;
        }
    EXPECT_TRUE(seen);
}

TEST(Cli, Sector) {
    const auto j = nlohmann::json::parse(run("--format json sector --r 4").out);
    EXPECT_NEAR(j[0]["value"].get<double>(), 0.684, 1e-3);
    const auto t2 = run("sector --r 2").out;
    EXPECT_TRUE(contains(t2, "cos4phi-low |a| >"));
    EXPECT_TRUE(contains(t2, "0.7028"));
    const auto t7 = run("sector --r 7").out;
    EXPECT_TRUE(contains(t7, "half-angle rad"));
    EXPECT_TRUE(contains(t7, "Q                2.34098"));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("sector --r 7 --cap 0.5").code, 3);
    EXPECT_EQ(run("--cap 0.5 sector --r 7").code, 3);
    EXPECT_EQ(run("HECKE_DUMMY").code, 2);
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("--format xml atable --r 3").code, 2);
    EXPECT_EQ(run("--grid 3 boundary").code, 2);
    EXPECT_EQ(run("check-sector --r 6 --center 0 --angle 1").code, 2);
}

TEST(Cli, EnvironmentOverridesCap) {
    const std::string cmd = "HECKE_CAP=0.5 " + std::string(HECKE_CLI_PATH) + " sector --r 7 >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 3);
}

TEST(Cli, CsvAndJsonAreDeterministic) {
    for (const char* args : {"--format csv boundary --scan", "--format json sector --r 3", "--format csv lines --r 5"}) {
        const auto a = run(args);
        EXPECT_EQ(a.code, 0) << args;
        EXPECT_EQ(a.out, run(args).out) << args;
    }
}

TEST(Cli, JsonRoundTrip) {
    const auto j = nlohmann::json::parse(run("--format json boundary").out);
    for (const auto& row : j) {
        const double v = row["value"].get<double>();
        EXPECT_EQ(nlohmann::json(v).dump(), row["value"].dump());
    }
}

TEST(Cli, SynthAndVerify) {
    const std::string path = ::testing::TempDir() + "rays.json";
    ASSERT_EQ(run("synth --model symmetric --r 3 --count 3000 --seed 11 --out " + path).code, 0);
    const auto v = run("--format json verify --data " + path);
    ASSERT_EQ(v.code, 0);
    const auto j = nlohmann::json::parse(v.out);
    std::vector<double> k3;
    for (const auto& row : j)
        if (row["quantity"] == "k=3") k3.push_back(std::abs(row["value"].get<double>()));
    ASSERT_EQ(k3.size(), 3u);
    EXPECT_LT(k3[1], k3[0]);
    EXPECT_LT(k3[2], k3[1]);
    EXPECT_LT(k3[2], 0.1);

    const auto empty = tmp("empty.csv", "");
    const auto e = run("verify --data " + empty + " --r 3");
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(run("--format json verify --data " + empty + " --r 3").out, "[]\n");

    const auto bad = tmp("bad.csv", "norm,re,im\n2,1,0\n3,zz,0\n");
    const std::string cmd = std::string(HECKE_CLI_PATH) + " verify --data " + bad + " --r 3 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string err;
    std::array<char, 512> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) err.append(buf.data(), n);
    EXPECT_EQ(WEXITSTATUS(pclose(p)), 2);
    EXPECT_TRUE(contains(err, "line 3"));

    EXPECT_EQ(run("verify --data /nonexistent.csv --r 3").code, 2);
}
