#include "fba/tropical.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace fba::tropical {

namespace {

cplx omega_pow(int n, int j) { return std::polar(1.0, 2.0 * kPi * j / n); }

double sgn(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

// Chebyshev ratio (v^k - v^-k)/(v - 1/v), written without the removable division.
cplx cheb(cplx v, int k) {
    cplx r{};
    for (int i = 0; i < k; ++i) r += ipow(v, k - 1 - 2 * i);
    return r;
}

LaurentPoly lin(cplx c0, cplx c1) { return LaurentPoly(0, {c0, c1}); }

// Multiplies z^{z_half/2} into the polynomial; requires an even z_half.
LaurentPoly absorbed(const ScaledPoly& p) { return p.poly.shifted(p.z_half / 2); }

double scale_of(std::initializer_list<const LaurentPoly*> ps) {
    double m = 1.0;
    for (auto* p : ps) m = std::max(m, p->max_abs());
    return m;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs_low_to_high) {
    std::vector<cplx> c = coeffs_low_to_high;
    while (!c.empty() && c.back() == cplx{}) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) M(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) M(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    std::vector<cplx> r(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) r[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return r;
}

}  // namespace

SeedState ground_seed(int n, cplx v, cplx s) {
    if (n < 1) throw DomainError("ground_seed: n must be positive");
    const cplx sn = ipow(s, n);
    if (std::abs(1.0 - sn * v) < 1e-14 || std::abs(1.0 - sn / v) < 1e-14)
        throw DomainError("ground_seed: resonance 1 - s^n v^{+-1} = 0");
    const cplx K = -v / (1.0 - sn * v) - (1.0 / v) / (1.0 - sn / v);
    const cplx den = 1.0 - sn * K;
    if (std::abs(den) < 1e-14) throw DomainError("ground_seed: resonance 1 - s^n K = 0");

    SeedState st;
    st.n = n;
    st.m = 0;
    st.sector = Sector::UnitaryV;
    st.s = s;
    st.v = v;
    st.K = K;
    st.Kprime = K;
    st.H0 = {LaurentPoly(1.0), 0, 0};
    const LaurentPoly D = (lin(1.0, s).pow(n) - lin(s, 1.0).pow(n) * K) * (1.0 / den);
    st.H0_down = {D, 0, 0};
    st.H0_up = {D.inverted_arg(), 0, 0};
    const LaurentPoly one_minus_sz = lin(1.0, -s).pow(n);
    const LaurentPoly one_minus_s_over_z = LaurentPoly(-1, {-s, 1.0}).pow(n);
    st.T0 = {one_minus_sz * st.H0_up.poly * sgn(n) + one_minus_s_over_z * D, 0, 0};
    st.W0 = 1.0 / den;
    st.has_W0 = true;
    return st;
}

std::pair<ScaledPoly, ScaledPoly> perimeter_coeffs(int k, const SeedState& seed) {
    if (k < 1) throw DomainError("perimeter_coeffs: k must be >= 1");
    if (seed.sector != Sector::UnitaryV || seed.m != 0)
        throw DomainError("perimeter_coeffs: ground seeds only");
    const int n = seed.n;
    const cplx rk = cheb(seed.v, k), rk1 = cheb(seed.v, k - 1);
    const LaurentPoly down =
        (seed.H0_down.poly * rk - lin(seed.s, 1.0).pow(n) * rk1).shifted(n * (k - 1));
    const LaurentPoly up =
        (seed.H0_up.poly * rk - LaurentPoly(-1, {1.0, seed.s}).pow(n) * rk1).shifted(-n * (k - 1));
    const int qh = -n * k * (k - 1);
    return {{down, qh, 0}, {up, qh, 0}};
}

cplx one_particle_C(int n, cplx s, int j) {
    const cplx w = omega_pow(n, j);
    if (std::abs(s - w) < 1e-14) throw DomainError("one_particle_seed: s = omega^j");
    return sgn(n + 1) * (1.0 - w * s) / (s - w);
}

LaurentPoly one_particle_P(int n, cplx s, cplx C) {
    return LaurentPoly(1, {1.0}) * lin(-s, 1.0).pow(n) + lin(1.0, -s).pow(n) * C;
}

SeedState one_particle_seed(int n, cplx s, int j) {
    if (n < 1) throw DomainError("one_particle_seed: n must be positive");
    j = ((j % n) + n) % n;
    const cplx C = one_particle_C(n, s, j);
    const cplx w0 = sgn(n + 1) * C;
    const LaurentPoly P = one_particle_P(n, s, C);
    // Synthetic division by (z - w0).
    std::vector<cplx> c(static_cast<std::size_t>(P.high() + 1));
    for (int i = 0; i <= P.high(); ++i) c[static_cast<std::size_t>(i)] = P.coeff(i);
    std::vector<cplx> quo(static_cast<std::size_t>(P.high()));
    cplx carry{};
    for (int i = P.high(); i >= 1; --i) {
        carry = c[static_cast<std::size_t>(i)] + carry * w0;
        quo[static_cast<std::size_t>(i - 1)] = carry;
    }
    const auto w = poly_roots(quo);

    SeedState st;
    st.n = n;
    st.m = 1;
    st.sector = Sector::DualQ;
    st.s = s;
    st.v = 0.0;
    st.C = C;
    st.roots = w;
    st.K = 0.0;
    st.Kprime = 0.0;
    st.subset = {j};
    st.H0 = {LaurentPoly(0, {sgn(n + 1) * w0, sgn(n)}), 0, -1};
    std::vector<cplx> inv;
    for (cplx x : w) inv.push_back(1.0 / x);
    st.H0_down = {LaurentPoly::from_linear_factors(inv) * sgn(n), -1, 1};
    st.H0_up = {LaurentPoly::from_linear_factors(w).inverted_arg() * C, -1, -1};
    std::vector<cplx> pm;
    for (cplx x : w) {
        pm.push_back(1.0 / x);
        pm.push_back(-1.0 / x);
    }
    st.T0 = {LaurentPoly::from_linear_factors(pm).shifted(-n) * sgn(n), -1, 0};
    st.has_W0 = false;
    return st;
}

cplx branch_value(int n, Branch b) {
    return b == Branch::One ? cplx{1.0, 0.0} : std::polar(1.0, kPi / n);
}

SeedState even_seed(int n, int m, cplx s, std::vector<int> subset, Branch branch) {
    if (m < 1 || 2 * m >= n) throw DomainError("even_seed: need 1 <= m and 2m < n");
    std::sort(subset.begin(), subset.end());
    if (static_cast<int>(subset.size()) != 2 * m ||
        std::adjacent_find(subset.begin(), subset.end()) != subset.end() || subset.front() < 0 ||
        subset.back() >= n)
        throw DomainError("even_seed: subset must hold 2m distinct indices in [0, n)");
    const cplx k = branch_value(n, branch);
    if (std::abs(ipow(k, 2 * n) - 1.0) > 1e-12) throw DomainError("even_seed: branch violates k^{2n} = 1");

    std::vector<cplx> a(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const cplx den = 1.0 - k * s * omega_pow(n, j);
        if (std::abs(den) < 1e-14) throw DomainError("even_seed: resonant momentum");
        a[static_cast<std::size_t>(j)] = (s - k * omega_pow(n, j)) / den;
    }
    std::vector<cplx> aI, aJ;
    for (int j = 0; j < n; ++j)
        (std::binary_search(subset.begin(), subset.end(), j) ? aI : aJ).push_back(a[static_cast<std::size_t>(j)]);

    const double sm = sgn(m);
    cplx c = sm;
    for (cplx x : aI) c *= x;
    cplx c2 = -sm * ipow(k, n);
    for (cplx x : aJ) c2 /= x;
    const cplx kn = ipow(k, n);
    const cplx f = 1.0 - kn * ipow(s, n);
    const int N = static_cast<int>(aJ.size());

    SeedState st;
    st.n = n;
    st.m = m;
    st.sector = Sector::UnitaryV;
    st.s = s;
    st.k_branch = k;
    st.subset = subset;
    st.K = kn;
    st.Kprime = 1.0 / kn;
    std::vector<cplx> negI;
    for (cplx x : aI) negI.push_back(-x);
    st.H0 = {LaurentPoly::from_linear_factors(negI).shifted(-m) * sm, 0, 0};
    const LaurentPoly prodJ = LaurentPoly::from_linear_factors(aJ);
    const LaurentPoly Aplus = prodJ * c;
    const LaurentPoly Aminus = prodJ.shifted(-N) * (-c / kn);
    st.H0_down = {Aplus.shifted(m), -2 * m, 0};
    st.H0_up = {Aminus.shifted(-m), -2 * m, 0};
    LaurentPoly T(f);
    for (cplx x : aJ) T = T * LaurentPoly(-1, {-1.0 / x, 0.0, x});
    st.T0 = {T, -2 * m, 0};
    st.W0 = c / f;
    st.W0_q_half = -2 * m;
    st.has_W0 = true;
    st.chain_lhs = c;
    st.chain_rhs = c2;
    return st;
}

SeedReport verify_seed(const SeedState& seed, double tol) {
    SeedReport rep;
    const int n = seed.n;
    const cplx s = seed.s;
    const double inf = std::numeric_limits<double>::infinity();

    // Baxter at order q^0.
    {
        const LaurentPoly a = lin(1.0, -s).pow(n) * sgn(n);
        const LaurentPoly d = LaurentPoly(-1, {-s, 1.0}).pow(n);
        const int qL = seed.T0.q_half + seed.H0.q_half;
        const int zL = seed.T0.z_half + seed.H0.z_half;
        const int zU = seed.H0_up.z_half, zD = seed.H0_down.z_half;
        if (qL != seed.H0_up.q_half || qL != seed.H0_down.q_half || (zL - zU) % 2 || (zL - zD) % 2) {
            rep.baxter_dev = inf;
            rep.note += "Baxter terms carry different q or z^{1/2} powers; ";
        } else {
            const int z0 = std::min({zL, zU, zD});
            const LaurentPoly L = (seed.T0.poly * seed.H0.poly).shifted((zL - z0) / 2);
            const LaurentPoly R = (a * seed.H0_up.poly).shifted((zU - z0) / 2) +
                                  (d * seed.H0_down.poly).shifted((zD - z0) / 2);
            rep.baxter_dev = max_coeff_deviation(L, R) / scale_of({&L, &R});
        }
    }

    // Wronskian at order q^0.
    if (!seed.has_W0 || seed.H0.z_half % 2 || seed.H0_down.z_half % 2) {
        rep.note += "Wronskian not applicable (half-integer powers of z); ";
    } else if (seed.H0.q_half + seed.H0_down.q_half != seed.W0_q_half) {
        rep.wronskian_dev = inf;
    } else {
        const LaurentPoly H = absorbed(seed.H0);
        const LaurentPoly D = absorbed(seed.H0_down);
        const LaurentPoly mzs = lin(1.0, -1.0 / s).pow(n), pzs = lin(1.0, 1.0 / s).pow(n);
        const LaurentPoly L = mzs * D * H.scaled_arg(-1.0) - pzs * H * D.scaled_arg(-1.0);
        const LaurentPoly R = (mzs * lin(1.0, s).pow(n) - pzs * lin(1.0, -s).pow(n)) * seed.W0;
        rep.wronskian_dev = max_coeff_deviation(L, R) / scale_of({&L, &R});
    }

    // Gluing: outermost coefficients of H0 reappear in H0(z/q) and H0(qz).
    {
        const auto& h = seed.H0;
        const int top = 2 * h.poly.high() + h.z_half;
        const int bot = 2 * h.poly.low() + h.z_half;
        auto coeff_at = [](const ScaledPoly& p, int half_exp) -> std::optional<cplx> {
            if ((half_exp - p.z_half) % 2) return std::nullopt;
            return p.poly.coeff((half_exp - p.z_half) / 2);
        };
        const auto cd = coeff_at(seed.H0_down, top);
        const auto cu = coeff_at(seed.H0_up, bot);
        if (!cd || !cu) {
            rep.gluing_dev = inf;
        } else {
            rep.gluing_dev = std::max(std::abs(*cd - h.poly.coeff(h.poly.high())),
                                      std::abs(*cu - h.poly.coeff(h.poly.low())));
        }
    }

    // Shape of T0: parity, and pinned edges where the sector fixes them.
    {
        if (seed.T0.z_half % 2) {
            rep.transfer_shape_dev = inf;
        } else {
            const LaurentPoly T = absorbed(seed.T0);
            double dev = 0.0;
            for (int k = T.low(); k <= T.high(); ++k)
                if (((k + n) % 2 + 2) % 2 != 0) dev = std::max(dev, std::abs(T.coeff(k)));
            if (seed.m == 0) {
                const cplx e = seed.v + 1.0 / seed.v;
                for (int k = T.low(); k <= T.high(); ++k)
                    if (k < -n || k > n) dev = std::max(dev, std::abs(T.coeff(k)));
                dev = std::max({dev, std::abs(T.coeff(n) - e), std::abs(T.coeff(-n) - sgn(n) * e)});
            } else if (seed.sector == Sector::DualQ) {
                dev = std::max({dev, std::abs(T.coeff(n) - 1.0), std::abs(T.coeff(-n) - sgn(n))});
            }
            rep.transfer_shape_dev = dev / std::max(1.0, T.max_abs());
        }
    }

    if (seed.sector == Sector::UnitaryV && seed.m > 0) {
        rep.chain_dev = std::max({std::abs(seed.chain_lhs - seed.chain_rhs) / std::max(1.0, std::abs(seed.chain_lhs)),
                                  std::abs(ipow(seed.k_branch, 2 * n) - 1.0),
                                  std::abs(seed.K * seed.Kprime - 1.0)});
    }
    if (seed.sector == Sector::DualQ) {
        cplx prod{1.0};
        for (cplx w : seed.roots) prod *= w;
        rep.chain_dev = std::abs(one_particle_P(n, s, seed.C)(sgn(n + 1) * seed.C)) +
                        std::abs(prod - 1.0);
    }

    rep.pass = rep.baxter_dev <= tol && rep.gluing_dev <= tol && rep.transfer_shape_dev <= tol &&
               rep.chain_dev <= tol && (!rep.wronskian_dev || *rep.wronskian_dev <= tol);
    return rep;
}

}  // namespace fba::tropical
