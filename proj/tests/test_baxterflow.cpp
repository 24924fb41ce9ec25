#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "fba/baxterflow.hpp"

using namespace fba;
using namespace fba::baxterflow;

namespace {

QParams at(cplx q, cplx s = 0.5) {
    QParams p;
    p.q = q;
    p.s = s;
    return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// chi+ Taylor coefficients in z^2 by matching powers in
// chi+(z/q) = (-z)^n T(z) chi+(z) - ((1 - s^2 z^2)(1 - q^2 z^2 / s^2))^n chi+(q z).
std::vector<cplx> series_oracle(const TransferPoly& T, cplx q, cplx s, int kmax) {
    const int n = T.n;
    std::vector<cplx> tau(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) tau[static_cast<std::size_t>(i)] = (n % 2 ? -1.0 : 1.0) * T.t(2 * i - n);
    std::vector<cplx> beta{1.0};
    auto mul = [](const std::vector<cplx>& a, cplx c1) {
        std::vector<cplx> r(a.size() + 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] += a[i];
            r[i + 1] += c1 * a[i];
        }
        return r;
    };
    for (int i = 0; i < n; ++i) beta = mul(mul(beta, -s * s), -q * q / (s * s));
    std::vector<cplx> c{1.0};
    for (int k = 1; k <= kmax; ++k) {
        cplx rhs{};
        for (int i = 1; i <= k; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const cplx ti = ui < tau.size() ? tau[ui] : cplx{};
            const cplx bi = ui < beta.size() ? beta[ui] : cplx{};
            rhs += (ti - bi * ipow(q, 2 * (k - i))) * c[static_cast<std::size_t>(k - i)];
        }
        c.push_back(rhs / (ipow(q, -2 * k) - tau[0] + ipow(q, 2 * k)));
    }
    return c;
}

const BetheSolution& solved(int n, double q) {
    static std::map<std::pair<int, double>, BetheSolution> cache;
    auto key = std::make_pair(n, q);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, solve_ground(n, at(q))).first;
    return it->second;
}

TransferPoly random_transfer(int n, std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TransferPoly T(n, 0, 1.0);
    for (int j : T.interior()) T.set_t(j, cplx(u(g), u(g)));
    return T;
}

}  // namespace

TEST(TransferPoly, EdgesParityAndEval) {
    TransferPoly T(3, 0, std::polar(1.0, 0.4));
    EXPECT_LT(T.edge_deviation(), 1e-16);
    EXPECT_EQ(T.interior(), (std::vector<int>{-1, 1}));
    EXPECT_THROW(T.set_t(0, 1.0), DomainError);
    EXPECT_THROW(T.set_t(5, 1.0), DomainError);
    EXPECT_EQ(T.t(2), cplx(0.0));
    T.set_t(1, 0.5);
    const cplx z(0.7, 0.2);
    const cplx e = 2.0 * std::cos(0.4);
    const cplx want = e * ipow(z, 3) + 0.5 * z - e * ipow(z, -3);
    EXPECT_LT(std::abs(T(z) - want), 1e-14);
    T.set_t(3, 0.0);
    EXPECT_GT(T.edge_deviation(), 1.0);
    EXPECT_THROW(TransferPoly(0, 0, 1.0), DomainError);
}

TEST(Tropical, RootsAndTransfer) {
    for (int n : {2, 3, 4, 5}) {
        const cplx s = 0.5;
        const auto w = tropical_roots(n, s);
        ASSERT_EQ(w.size(), static_cast<std::size_t>(n));
        cplx prod = 1.0;
        for (int k = 0; k < n; ++k) {
            const cplx wk = w[static_cast<std::size_t>(k)];
            prod *= wk;
            EXPECT_LT(std::abs((s - wk) / (1.0 - s * wk) - std::polar(1.0, 2 * kPi * (k + 0.5) / n)), 1e-14);
        }
        EXPECT_LT(std::abs(prod - 1.0), 1e-13) << n;
        const TransferPoly T0 = tropical_transfer(n, s);
        EXPECT_LT(T0.edge_deviation(), 1e-13);
        for (cplx z : {cplx(0.3, 0.9), cplx(-1.2, 0.4), cplx(0.8, -0.1)}) {
            cplx pr = 1.0 - ipow(s, 2 * n);
            for (cplx wk : w) pr *= 1.0 - z * z / (wk * wk);
            const cplx want = pr + ipow(1.0 - s * s * z * z, n) + ipow(s * s - z * z, n);
            EXPECT_LT(rel(ipow(-z, n) * T0(z), want), 1e-13);
        }
    }
}

TEST(Chi, SeriesOracle) {
    for (double q : {0.1, -0.2}) {
        const QParams p = at(q);
        for (int n : {2, 3}) {
            const TransferPoly T0 = tropical_transfer(n, p.s);
            const auto want = series_oracle(T0, p.q, p.s, 12);
            const auto got = chi_plus_series(T0, p, 12);
            ASSERT_GE(got.size(), 13u);
            for (int k = 0; k <= 12; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                EXPECT_LE(std::abs(got[uk] - want[uk]), 1e-11 * std::max(1.0, std::abs(want[uk])))
                    << "q=" << q << " n=" << n << " k=" << k;
            }
            for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.4)}) {
                cplx sum{};
                for (int k = 12; k >= 0; --k) sum = sum * z * z + want[static_cast<std::size_t>(k)];
                EXPECT_LT(std::abs(chi_plus_eval(z, T0, p) - sum), 1e-11);
            }
        }
    }
}

TEST(Chi, NormalizationAndTropicalLimit) {
    std::mt19937_64 g(3);
    const TransferPoly T = random_transfer(3, g);
    const QParams p = at(0.1);
    EXPECT_EQ(chi_plus_eval(0.0, T, p), cplx(1.0));
    EXPECT_LT(std::abs(chi_minus_eval(1e6, T, p) - 1.0), 1e-10);
    EXPECT_LT(std::abs(chi_minus_eval(cplx(0, -1e6), T, p) - 1.0), 1e-10);
    const QParams tiny = at(1e-8);
    const TransferPoly T0 = tropical_transfer(3, tiny.s);
    for (cplx z : {cplx(0.5, 0.5), cplx(-0.9, 0.1), cplx(1.1, -0.6)}) {
        EXPECT_LT(std::abs(chi_plus_eval(z, T0, tiny) - 1.0), 1e-6);
        EXPECT_LT(std::abs(chi_minus_eval(z, T0, tiny) - 1.0), 1e-6);
    }
}

TEST(Chi, MinusIsPlusOfReflectedTransfer) {
    // Substituting z -> 1/z maps the chi- equation onto the chi+ equation with t_j -> (-1)^n t_{-j}.
    std::mt19937_64 g(4);
    const QParams p = at(0.15);
    for (int n : {2, 3, 4}) {
        const TransferPoly T = random_transfer(n, g);
        TransferPoly R(n, 0, 1.0);
        for (int j = -n; j <= n; j += 2) R.set_t(j, (n % 2 ? -1.0 : 1.0) * T.t(-j));
        for (cplx z : {cplx(1.5, 0.3), cplx(-0.7, 0.8), cplx(0.2, -2.5)})
            EXPECT_LT(rel(chi_minus_eval(z, T, p), chi_plus_eval(1.0 / z, R, p)), 1e-12) << n;
    }
}

TEST(Chi, TruncationConverged) {
    std::mt19937_64 g(5);
    const HolomorphicPair hp{random_transfer(2, g), at(0.2), 0};
    for (cplx z : {cplx(0.4, 0.1), cplx(1.0, 1.0), cplx(-2.0, 0.5)}) EXPECT_LE(hp.truncation_gap(z), 1e-13);
}

class WronskianShape : public ::testing::TestWithParam<int> {};

TEST_P(WronskianShape, QuasiPeriodicAndEven) {
    const int n = GetParam();
    std::mt19937_64 g(6 + static_cast<unsigned>(n));
    const HolomorphicPair hp{random_transfer(n, g), at(0.1), 0};
    std::uniform_real_distribution<double> r(0.5, 2.0), ph(-kPi, kPi);
    for (int i = 0; i < 30; ++i) {
        const cplx z = std::polar(r(g), ph(g));
        const cplx w = wronskian_chi(z, hp);
        EXPECT_LT(rel(ipow(-z * z, n) * wronskian_chi(hp.p.q * z, hp), w), 1e-10);
        EXPECT_LT(rel(wronskian_chi(-z, hp), w), 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(ChainLength, WronskianShape, ::testing::Values(2, 3));

TEST(Wronskian, FundamentalRep) {
    const cplx q(0.1, 0.05);
    for (cplx w : {cplx(0.001, 0.002), cplx(30.0, -4.0), cplx(0.9, 0.3)}) {
        const cplx r = fundamental_rep(w, q);
        EXPECT_GT(std::abs(r), std::sqrt(std::abs(q)));
        EXPECT_LE(std::abs(r), 1.0 / std::sqrt(std::abs(q)));
        const double k = std::log(std::abs(r / w)) / std::log(std::abs(q));
        EXPECT_NEAR(k, std::round(k), 1e-9);
        EXPECT_LT(std::abs(r / w - ipow(q, static_cast<int>(std::lround(k)))), 1e-12);
    }
}

TEST(Wronskian, ZerosContinueFromTropicalRoots) {
    const QParams p = at(0.05);
    const HolomorphicPair hp{tropical_transfer(2, p.s), p, 0};
    const auto w0 = tropical_roots(2, p.s);
    const auto w = find_wronskian_zeros(hp, w0);
    for (std::size_t k = 0; k < w.size(); ++k) {
        EXPECT_LT(std::abs(wronskian_chi(w[k], hp)), 1e-10);
        EXPECT_LT(std::abs(w[k] - w0[k]), 10 * std::abs(p.q));
    }
    EXPECT_THROW(find_wronskian_zeros(hp, {w0[0], w0[0]}), ZeroCollision);
}

TEST(Wronskian, RatioIsQPeriodicAtZeros) {
    const BetheSolution& sol = solved(2, 0.1);
    const HolomorphicPair hp{sol.T, sol.p, 0};
    for (cplx w : sol.w) EXPECT_LT(rel(c_ratio(sol.p.q * w, hp), c_ratio(w, hp)), 1e-8);
}

TEST(Bethe, TropicalGroundState) {
    const QParams p = at(1e-8);
    for (int n : {2, 3}) {
        const TransferPoly T0 = tropical_transfer(n, p.s);
        const auto ev = bethe_evaluate(T0, p, {});
        for (std::size_t k = 0; k < ev.roots.size(); ++k) {
            const cplx w = ev.roots[k];
            EXPECT_LT(std::abs(ev.c_values[k] + 1.0), 1e-6);
            EXPECT_LT(std::abs(ev.c_values[k] - ipow((p.s - w) / (1.0 - p.s * w), n)), 1e-6);
        }
    }
}

TEST(Bethe, TropicalResidualVanishesLinearlyInQ) {
    // T0 solves the equations only at q = 0; the residual is r(q) = c q + O(q^2) with c of order 10
    // (7.2 for n = 2 and 15.6 for n = 3 at s = 1/2), so it is above 1e-8 at q = 1e-8.
    for (int n : {2, 3}) {
        std::vector<double> slope;
        for (double q : {1e-7, 1e-8, 1e-9}) {
            const auto r = bethe_residual(tropical_transfer(n, 0.5), at(q));
            slope.push_back(*std::max_element(r.begin(), r.end()) / q);
        }
        EXPECT_LT(std::abs(slope[0] / slope[2] - 1.0), 1e-4) << n;
        EXPECT_LT(std::abs(slope[1] / slope[2] - 1.0), 1e-4) << n;
        EXPECT_LT(slope[1], 20.0) << n;
    }
}

TEST(Solver, FrozenGroundStates) {
    const BetheSolution& a = solved(2, 0.1);
    EXPECT_NEAR(a.T.t(0).real(), -1.1780739092074317, 1e-9);
    EXPECT_NEAR(a.T.t(0).imag(), 0.0, 1e-12);
    const BetheSolution& b = solved(3, 0.1);
    EXPECT_NEAR(b.T.t(-1).real(), 0.2872425051, 1e-9);
    EXPECT_NEAR(b.T.t(1).real(), -0.2872425051, 1e-9);
    const BetheSolution& c = solved(2, -0.15);
    EXPECT_NEAR(c.T.t(0).real(), -2.2119002071, 1e-9);
    for (const BetheSolution* s : {&a, &b, &c}) {
        EXPECT_LT(s->T.edge_deviation(), 1e-14);
        EXPECT_EQ(s->residuals.size(), static_cast<std::size_t>(s->T.n - 1));
        for (double r : s->residuals) EXPECT_LE(r, 1e-10);
        cplx prod = 1.0;
        for (cplx w : s->w) prod *= w;
        EXPECT_LT(std::abs(prod - 1.0), 1e-10);
        EXPECT_LT(std::abs(s->C + 1.0), 0.5);
    }
}

TEST(Solver, PerturbationRaisesResidual) {
    const BetheSolution& sol = solved(2, 0.1);
    TransferPoly bumped = sol.T;
    bumped.set_t(0, bumped.t(0) + 0.01);
    const auto at_sol = bethe_residual(sol.T, sol.p, 0, sol.w);
    const auto off = bethe_residual(bumped, sol.p, 0, sol.w);
    EXPECT_GT(off[0], 100.0 * std::max(at_sol[0], 1e-14));
}

TEST(Solver, ZerosCloseUnderConjugation) {
    for (int n : {2, 3}) {
        const BetheSolution& sol = solved(n, 0.1);
        for (cplx w : sol.w) {
            double best = 1e300;
            for (cplx u : sol.w) best = std::min(best, std::abs(u - std::conj(w)));
            EXPECT_LT(best, 1e-9);
        }
    }
}

TEST(Solver, RejectsOutOfRange) {
    EXPECT_THROW(solve_ground(2, at(0.35)), DomainError);
    EXPECT_THROW(solve_ground(1, at(0.1)), DomainError);
}

TEST(EntireH, BaxterEquationAndCertificates) {
    for (int n : {2, 3}) {
        const BetheSolution& sol = solved(n, 0.1);
        EXPECT_LE(sol.certificates.baxter_grid_residual, 1e-9);
        EXPECT_GE(sol.certificates.baxter_grid_residual, 0.0);
        for (double r : sol.certificates.pole_residuals) EXPECT_LE(r, 1e-9);
        EXPECT_LE(sol.certificates.wronskian_scatter, 1e-8);
        const EntireH eh = build_H(sol, sol.p);
        EXPECT_LE(baxter_grid_residual(eh.H, sol.T, sol.p, 1.3), 1e-9);
    }
}

TEST(EntireH, NoResidueAtRoots) {
    // (1/2 pi i) oint H dz around each root: zero for the entire combination, not for H+ alone.
    const BetheSolution& sol = solved(2, 0.1);
    const EntireH eh = build_H(sol, sol.p);
    auto residue = [](const std::function<cplx(cplx)>& F, cplx c, double r) {
        cplx acc{};
        double big = 0.0;
        const int N = 64;
        for (int j = 0; j < N; ++j) {
            const cplx e = std::polar(1.0, 2 * kPi * (j + 0.5) / N);
            const cplx f = F(c + r * e);
            acc += f * r * e;
            big = std::max(big, std::abs(f));
        }
        return std::abs(acc / static_cast<double>(N)) / (r * big);
    };
    for (cplx w : sol.w) {
        EXPECT_LT(residue(eh.H, w, 1e-3), 1e-9);
        EXPECT_GT(residue(eh.H_plus, w, 1e-3), 1e-2);
    }
}

TEST(EntireH, WronskianNegativeControl) {
    const BetheSolution& sol = solved(2, 0.1);
    const EntireH eh = build_H(sol, sol.p);
    EXPECT_LE(wronskian_q_check(eh.H, sol.p, 2).scatter, 1e-8);
    EXPECT_GT(wronskian_q_check(eh.H_plus, sol.p, 2).scatter, 1e-2);
}
