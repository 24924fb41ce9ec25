#include <gtest/gtest.h>

#include "fba/serialize.hpp"

using namespace fba;
using nlohmann::json;

TEST(Json, ComplexAndLaurent) {
    EXPECT_EQ(to_json(cplx(1.5, -2.0)), json::parse("[1.5, -2.0]"));
    const json j = to_json(LaurentPoly(-1, {1.0, 0.0, cplx(0, 3)}));
    EXPECT_EQ(j.size(), 2u);
    EXPECT_EQ(j.at("-1"), json::parse("[1.0, 0.0]"));
    EXPECT_EQ(j.at("1"), json::parse("[0.0, 3.0]"));
    EXPECT_FALSE(j.contains("0"));
}

TEST(Json, BetheSolutionFields) {
    qspecial::QParams p;
    p.q = 0.1;
    p.s = 0.5;
    const auto sol = baxterflow::solve_ground(2, p);
    const json j = to_json(sol);
    EXPECT_EQ(j.at("schema"), "fba-spec-1");
    for (const char* k : {"n", "q", "s", "m", "v", "t", "w", "C", "residuals", "wronskian_const", "certificates"})
        EXPECT_TRUE(j.contains(k)) << k;
    for (const char* k : {"baxter_grid_residual", "pole_residuals", "wronskian_scatter"})
        EXPECT_TRUE(j.at("certificates").contains(k)) << k;
    EXPECT_EQ(j.at("n"), 2);
    EXPECT_EQ(j.at("t").size(), 3u);
    EXPECT_EQ(j.at("w").size(), 2u);
    EXPECT_EQ(j.at("residuals").size(), 1u);
    EXPECT_DOUBLE_EQ(j.at("t")[1][0].get<double>(), sol.T.t(0).real());
    EXPECT_DOUBLE_EQ(j.at("C")[0].get<double>(), sol.C.real());
}

TEST(Json, SeedStateFields) {
    const auto st = tropical::even_seed(4, 1, 0.5, {0, 2}, tropical::Branch::One);
    const json j = to_json(st);
    EXPECT_EQ(j.at("schema"), "fba-spec-1");
    for (const char* k : {"n", "m", "sector", "H0", "H0_down", "H0_up", "K", "Kprime", "k_branch", "subset", "T0", "W0"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j.at("sector"), "unitary-v");
    EXPECT_EQ(j.at("subset"), json::parse("[0, 2]"));
    EXPECT_TRUE(j.at("H0").contains("coeffs"));
    const json o = to_json(tropical::one_particle_seed(3, 0.4, 1));
    EXPECT_EQ(o.at("sector"), "dual-q");
    EXPECT_TRUE(o.at("W0").is_null());
    EXPECT_EQ(o.at("roots").size(), 3u);
}

TEST(Json, SeedReport) {
    const json j = to_json(tropical::verify_seed(tropical::one_particle_seed(3, 0.4, 1)));
    EXPECT_TRUE(j.at("pass").get<bool>());
    EXPECT_TRUE(j.contains("baxter_dev"));
}
