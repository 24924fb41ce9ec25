#include <gtest/gtest.h>

#include <random>

#include "fba/baxterflow.hpp"
#include "fba/tropical.hpp"

using namespace fba;
using namespace fba::tropical;

namespace {

cplx omega(int n, int j) { return std::polar(1.0, 2.0 * kPi * j / n); }

// Value of a ScaledPoly at q = 1 on the principal branch of z^{1/2}.
cplx eval(const ScaledPoly& p, cplx z) { return p.poly(z) * std::pow(z, 0.5 * p.z_half); }

std::vector<std::vector<int>> subsets(int n, int size) {
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != size) continue;
        std::vector<int> s;
        for (int j = 0; j < n; ++j)
            if (mask & (1 << j)) s.push_back(j);
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST(GroundSeed, WorkedExample) {
    const SeedState st = ground_seed(2, 1.0, 0.5);
    EXPECT_LT(std::abs(st.K + 8.0 / 3.0), 1e-15);
    EXPECT_EQ(st.K, st.Kprime);
    EXPECT_EQ(st.H0.poly.low(), 0);
    EXPECT_EQ(st.H0.poly.high(), 0);
    EXPECT_EQ(st.H0.poly.coeff(0), cplx(1.0));
    // ((1 + z/2)^2 + (8/3)(1/2 + z)^2) / (5/3) = 1 + 11/5 z + 7/4 z^2
    EXPECT_LT(std::abs(st.H0_down.poly.coeff(0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(st.H0_down.poly.coeff(1) - 2.2), 1e-15);
    EXPECT_LT(std::abs(st.H0_down.poly.coeff(2) - 1.75), 1e-15);
    EXPECT_TRUE(verify_seed(st).pass);
}

TEST(GroundSeed, TransferEdgesAndWronskian) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    for (int n = 1; n <= 6; ++n) {
        const cplx v = std::polar(1.0, ph(g)), s(0.4, 0.1);
        const SeedState st = ground_seed(n, v, s);
        const LaurentPoly& T = st.T0.poly;
        const cplx e = v + 1.0 / v;
        EXPECT_LT(std::abs(T.coeff(n) - e), 1e-12) << n;
        EXPECT_LT(std::abs(T.coeff(-n) - (n % 2 ? -e : e)), 1e-12) << n;
        for (int j = -n + 1; j <= n; j += 2) EXPECT_LT(std::abs(T.coeff(j)), 1e-12) << n << " " << j;
        // Tropical Wronskian with H0 = 1, evaluated pointwise.
        for (cplx z : {cplx(0.3, 0.7), cplx(-1.1, 0.2)}) {
            const cplx l = ipow(1.0 - z / s, n) * eval(st.H0_down, z) - ipow(1.0 + z / s, n) * eval(st.H0_down, -z);
            const cplx r = st.W0 * (ipow((1.0 - z / s) * (1.0 + s * z), n) - ipow((1.0 + z / s) * (1.0 - s * z), n));
            EXPECT_LT(std::abs(l - r), 1e-11 * std::max(1.0, std::abs(l))) << n;
        }
        EXPECT_TRUE(verify_seed(st).pass) << n;
    }
    const SeedReport r = verify_seed(ground_seed(3, std::polar(1.0, 0.7), 0.4));
    EXPECT_LE(r.baxter_dev, 1e-12);
    ASSERT_TRUE(r.wronskian_dev.has_value());
    EXPECT_LE(*r.wronskian_dev, 1e-12);
}

TEST(GroundSeed, MatchesBaxterflowTropicalTransfer) {
    for (int n : {2, 3, 4, 5}) {
        const SeedState st = ground_seed(n, 1.0, 0.5);
        const auto T0 = baxterflow::tropical_transfer(n, 0.5);
        for (int j = -n; j <= n; j += 2) EXPECT_LT(std::abs(st.T0.poly.coeff(j) - T0.t(j)), 1e-12) << n;
    }
}

TEST(GroundSeed, Resonance) {
    EXPECT_THROW(ground_seed(2, 1.0, 1.0), DomainError);
    EXPECT_THROW(ground_seed(0, 1.0, 0.5), DomainError);
}

TEST(Perimeter, BaseCaseAndUnitLimit) {
    const SeedState st = ground_seed(3, std::polar(1.0, 0.9), 0.4);
    const auto [d1, u1] = perimeter_coeffs(1, st);
    EXPECT_LT(max_coeff_deviation(d1.poly, st.H0_down.poly), 1e-15);
    EXPECT_LT(max_coeff_deviation(u1.poly, st.H0_up.poly), 1e-15);
    EXPECT_EQ(d1.q_half, 0);

    // v = 1, k = 2: z^n (2 H0(z/q) - (s + z)^n), prefactor q^{-n}.
    const SeedState g = ground_seed(3, 1.0, 0.4);
    const auto [d2, u2] = perimeter_coeffs(2, g);
    const LaurentPoly want = (g.H0_down.poly * 2.0 - LaurentPoly(0, {0.4, 1.0}).pow(3)).shifted(3);
    EXPECT_LT(max_coeff_deviation(d2.poly, want), 1e-14);
    EXPECT_EQ(d2.q_half, -6);
    EXPECT_EQ(u2.q_half, -6);

    // Continuity of the Chebyshev ratio across v = 1.
    const auto [dn, un] = perimeter_coeffs(4, ground_seed(3, std::polar(1.0, 1e-7), 0.4));
    const auto [d4, u4] = perimeter_coeffs(4, g);
    EXPECT_LT(max_coeff_deviation(dn.poly, d4.poly), 1e-5);
    EXPECT_THROW(perimeter_coeffs(0, g), DomainError);
    EXPECT_THROW(perimeter_coeffs(1, one_particle_seed(3, 0.4, 1)), DomainError);
}

TEST(Perimeter, GluingOfNeighbouringShells) {
    // The lowest coefficient of the k-th shell equals the highest coefficient of shell k-1.
    for (cplx v : {std::polar(1.0, 0.9), cplx(1.0)}) {
        const SeedState st = ground_seed(3, v, 0.4);
        for (int k = 2; k <= 5; ++k) {
            const auto [dk, uk] = perimeter_coeffs(k, st);
            const auto [dp, up] = perimeter_coeffs(k - 1, st);
            EXPECT_LT(std::abs(dk.poly.coeff(dk.poly.trimmed(1e-14).low()) - dp.poly.coeff(dp.poly.trimmed(1e-14).high())),
                      1e-12)
                << k;
            EXPECT_LT(std::abs(uk.poly.coeff(uk.poly.trimmed(1e-14).high()) - up.poly.coeff(up.poly.trimmed(1e-14).low())),
                      1e-12)
                << k;
        }
    }
}

TEST(OneParticle, ConnectionConstantAndRoots) {
    EXPECT_LT(std::abs(one_particle_C(2, 0.5, 0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(one_particle_C(2, cplx(0.3, 0.2), 0) - 1.0), 1e-15);
    const cplx s(0.4, 0.05);
    for (int n = 1; n <= 8; ++n) {
        for (int j = 0; j < n; ++j) {
            const cplx C = one_particle_C(n, s, j);
            const cplx w0 = (n % 2 ? 1.0 : -1.0) * C;
            EXPECT_LT(std::abs(one_particle_P(n, s, C)(w0)), 1e-12 * std::max(1.0, std::pow(std::abs(w0), n + 1)));
            const SeedState st = one_particle_seed(n, s, j);
            ASSERT_EQ(st.roots.size(), static_cast<std::size_t>(n));
            cplx prod = 1.0;
            for (cplx w : st.roots) {
                prod *= w;
                EXPECT_LT(std::abs(one_particle_P(n, s, C)(w)), 1e-9);
            }
            EXPECT_LT(std::abs(prod - 1.0), 1e-10) << n << " " << j;
            EXPECT_TRUE(verify_seed(st).pass) << n << " " << j;
        }
    }
    EXPECT_LE(verify_seed(one_particle_seed(3, 0.4, 1)).baxter_dev, 1e-12);
    EXPECT_THROW(one_particle_seed(3, 1.0, 0), DomainError);
}

TEST(EvenSeed, WorkedExample) {
    const SeedState st = even_seed(4, 1, 0.5, {2, 0}, Branch::One);
    EXPECT_EQ(st.subset, (std::vector<int>{0, 2}));
    EXPECT_LT(std::abs(st.K * st.Kprime - 1.0), 1e-15);
    EXPECT_EQ(st.H0.poly.low(), -1);
    EXPECT_EQ(st.H0.poly.high(), 1);
    EXPECT_TRUE(verify_seed(st).pass);
    const SeedReport r = verify_seed(even_seed(5, 1, 0.5, {0, 1}, Branch::One));
    EXPECT_LE(r.baxter_dev, 1e-12);
    ASSERT_TRUE(r.wronskian_dev.has_value());
    EXPECT_LE(*r.wronskian_dev, 1e-12);
}

TEST(EvenSeed, AllSubsetsBothBranches) {
    const cplx s = 0.45;
    for (int n = 3; n <= 8; ++n) {
        for (Branch b : {Branch::One, Branch::OmegaHalf}) {
            const cplx k = branch_value(n, b);
            EXPECT_LT(std::abs(ipow(k, 2 * n) - 1.0), 1e-13);
            for (int m = 1; 2 * m < n; ++m) {
                for (const auto& I : subsets(n, 2 * m)) {
                    const SeedState st = even_seed(n, m, s, I, b);
                    EXPECT_LT(std::abs(st.K * st.Kprime - 1.0), 1e-13);
                    EXPECT_LT(std::abs(st.chain_lhs - st.chain_rhs), 1e-11 * std::abs(st.chain_lhs));
                    EXPECT_EQ(st.H0.poly.low(), -m);
                    EXPECT_EQ(st.H0.poly.high(), m);
                    EXPECT_LE(st.H0_down.poly.high() - m, n - 2);
                    const SeedReport r = verify_seed(st);
                    EXPECT_TRUE(r.pass) << n << " m=" << m << " " << r.note;
                }
            }
        }
    }
}

TEST(EvenSeed, WronskianFactorization) {
    // A+(z) z^m H0(-z) = q^m W0 (1 - k^n s^n) prod_j (1 + z (s - k w^j)/(1 - k s w^j)).
    const cplx s(0.35, 0.1);
    for (Branch b : {Branch::One, Branch::OmegaHalf}) {
        const int n = 6, m = 2;
        const SeedState st = even_seed(n, m, s, {0, 1, 3, 4}, b);
        const cplx k = branch_value(n, b);
        for (cplx z : {cplx(0.4, 0.3), cplx(-0.8, 1.1)}) {
            cplx want = st.W0 * (1.0 - ipow(k, n) * ipow(s, n));
            for (int j = 0; j < n; ++j) want *= 1.0 + z * (s - k * omega(n, j)) / (1.0 - k * s * omega(n, j));
            const cplx Aplus = st.H0_down.poly.shifted(-m)(z);
            EXPECT_LT(std::abs(Aplus * ipow(z, m) * st.H0.poly(-z) - want), 1e-11 * std::abs(want));
        }
    }
}

TEST(EvenSeed, Errors) {
    EXPECT_THROW(even_seed(4, 1, 0.5, {0}, Branch::One), DomainError);
    EXPECT_THROW(even_seed(4, 2, 0.5, {0, 1, 2, 3}, Branch::One), DomainError);
    EXPECT_THROW(even_seed(4, 1, 0.5, {0, 0}, Branch::One), DomainError);
    EXPECT_THROW(even_seed(4, 1, 0.5, {0, 4}, Branch::One), DomainError);
    EXPECT_THROW(even_seed(4, 1, 1.0, {0, 1}, Branch::One), DomainError);
}

TEST(VerifySeed, CorruptedSeedFails) {
    SeedState st = ground_seed(3, std::polar(1.0, 0.7), 0.4);
    st.H0_down.poly.set(1, st.H0_down.poly.coeff(1) + 1e-6);
    EXPECT_FALSE(verify_seed(st).pass);
    SeedState e = even_seed(5, 1, 0.5, {0, 1}, Branch::One);
    e.T0.poly.set(1, e.T0.poly.coeff(1) + 1e-6);
    EXPECT_FALSE(verify_seed(e).pass);
    SeedState o = one_particle_seed(4, 0.4, 2);
    o.roots[0] *= 1.0 + 1e-6;
    o.H0_down.poly = LaurentPoly::from_linear_factors({1.0 / o.roots[0], 1.0 / o.roots[1], 1.0 / o.roots[2], 1.0 / o.roots[3]});
    EXPECT_FALSE(verify_seed(o).pass);
}
