#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
};

Invocation fba(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" FBA_CLI_PATH "' " + args + " 2>/dev/null";
    Invocation r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, got);
    const int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

TEST(Cli, VerifyIdentitiesPasses) {
    const Invocation r = fba("verify-identities --q 0.2 --s 0.5 --nodes 512");
    ASSERT_EQ(r.code, 0) << r.out;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("schema"), "fba-spec-1");
    EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Cli, SolveGroundJson) {
    const Invocation r = fba("solve-ground --n 2 --q 0.1 --s 0.5");
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_TRUE(j.contains("certificates"));
    EXPECT_NEAR(j.at("t")[1][0].get<double>(), -1.1780739092074317, 1e-9);
}

TEST(Cli, TropicalSeedEmbedsReport) {
    const Invocation r = fba("tropical-seed --n 4 --m 1 --subset 0,2 --branch 1");
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_TRUE(j.at("verify").at("pass").get<bool>());
}

TEST(Cli, FailedCheckExitsOne) {
    EXPECT_EQ(fba("verify-identities --q 0.2 --s 0.5 --tol 1e-30").code, 1);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(fba("").code, 2);
    EXPECT_EQ(fba("no-such-command").code, 2);
    EXPECT_EQ(fba("solve-ground --n 2 --q abc").code, 2);
    EXPECT_EQ(fba("solve-ground --n 2 --q 0.1 --bogus 1").code, 2);
    EXPECT_EQ(fba("density --format xml").code, 2);
    EXPECT_EQ(fba("tropical-seed --n 4 --m 1 --subset 0,x").code, 2);
    EXPECT_EQ(fba("solve-ground --n 2 --sweep t=1,2").code, 2);
}

TEST(Cli, DeterministicOutput) {
    const Invocation a = fba("partition --q -0.1 --s 0.5 --format csv");
    const Invocation b = fba("partition --q -0.1 --s 0.5 --format csv");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("phi,", 0), 0u);
}

TEST(Cli, SweepIndependentOfThreadCount) {
    const std::string args = "solve-ground --n 2 --s 0.5 --sweep q=0.05,0.1,0.2";
    const Invocation one = fba(args, "FBA_THREADS=1");
    const Invocation three = fba(args, "FBA_THREADS=3");
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, three.out);
    const json j = json::parse(one.out);
    EXPECT_EQ(j.at("results").size(), 3u);
    EXPECT_NEAR(j.at("results")[0].at("t")[1][0].get<double>(), -1.341402043665684, 1e-9);
    EXPECT_NEAR(j.at("results")[2].at("t")[1][0].get<double>(), -0.9056414861273914, 1e-9);
}

TEST(Cli, DensityCsvColumnsAndOutFile) {
    const auto path = std::filesystem::temp_directory_path() / "fba_cli_density.csv";
    const Invocation r = fba("density --s 0.5 --q -0.1 --format csv --out '" + path.string() + "'");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "phi,P_series,P_tropical,P_empirical");
    std::filesystem::remove(path);
}
