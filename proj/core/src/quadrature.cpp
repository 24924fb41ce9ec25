#include "fba/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fba::quadrature {

using qspecial::kappa_cg;
using qspecial::kappa_const;
using qspecial::sigma;

namespace {

cplx pairwise_sum(const cplx* x, std::size_t n) {
    if (n <= 8) {
        cplx acc{};
        for (std::size_t i = 0; i < n; ++i) acc += x[i];
        return acc;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double relerr(cplx a, cplx b) {
    const double d = std::abs(b);
    return d > 0 ? std::abs(a - b) / d : std::abs(a - b);
}

struct Pole {
    std::size_t factor;
    int k;
    cplx x;
    bool outside;  // required side relative to the contour
};

}  // namespace

double Annulus::mid() const { return std::sqrt(lo * hi); }

cplx circle_integral(const std::function<cplx(cplx)>& f, const CircleContour& c) {
    if (c.nodes < 1) throw DomainError("circle_integral: nodes must be positive");
    if (!(c.radius > 0)) throw DomainError("circle_integral: radius must be positive");
    const std::size_t n = static_cast<std::size_t>(c.nodes);
    std::vector<cplx> vals(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        const cplx v = std::polar(c.radius, th);
        vals[j] = f(v);
        if (!finite(vals[j])) throw NonFiniteSample("circle_integral: non-finite sample");
    }
    return pairwise_sum(vals.data(), n) / static_cast<double>(n);
}

cplx separated_integral(const std::vector<SigmaFactor>& factors,
                        const std::function<cplx(cplx)>& pref, const QParams& p,
                        int min_nodes, SeparatedReport* report) {
    const cplx q = p.q;
    // Normalize to power +1: 1/sigma(c x^e) = sigma((-q/c) x^{-e}).
    std::vector<std::pair<cplx, int>> f;
    f.reserve(factors.size());
    for (const auto& fa : factors) {
        if (fa.c == cplx{}) throw DomainError("separated_integral: zero coefficient");
        if (std::abs(fa.e) != 1 || std::abs(fa.power) != 1)
            throw DomainError("separated_integral: exponents must be +-1");
        if (fa.power == 1)
            f.emplace_back(fa.c, fa.e);
        else
            f.emplace_back(-q / fa.c, -fa.e);
    }
    auto integrand = [&](cplx x) {
        cplx val = pref(x);
        for (const auto& [c, e] : f) val *= sigma(e == 1 ? c * x : c / x, p);
        return val;
    };

    // Radius: largest log-distance to the pole sets within [0.35, 2.8].
    const double aq = std::abs(q);
    const double span = std::log(50.0);
    std::vector<double> logs;
    for (const auto& [c, e] : f) {
        const double l0 = e == 1 ? -std::log(std::abs(c)) : std::log(std::abs(c));
        for (int k = 0; k < 10000; ++k) {
            const double l = e == 1 ? l0 - k * std::log(aq) : l0 + k * std::log(aq);
            if (std::abs(l) < span) logs.push_back(l);
            if ((e == 1 && l > span) || (e == -1 && l < -span)) break;
        }
    }
    double best_r = 0.0, best_gap = -1.0;
    const int ncand = 701;
    const double a = std::log(0.35), b = std::log(2.8);
    for (int i = 0; i < ncand; ++i) {
        const double t = a + (b - a) * i / (ncand - 1);
        double g = std::numeric_limits<double>::infinity();
        for (double l : logs) g = std::min(g, std::abs(t - l));
        if (g > best_gap + 1e-12) {
            best_gap = g;
            best_r = std::exp(t);
        }
    }
    if (best_gap < 1e-6) throw ContourInfeasible("separated_integral: poles leave no usable circle");
    int nodes = std::max(min_nodes, static_cast<int>(std::ceil(40.0 / best_gap)));
    nodes = std::min(nodes, 1 << 16);
    nodes = (nodes + 15) / 16 * 16;

    cplx val = circle_integral(integrand, CircleContour{best_r, nodes});

    // Misplaced poles. Both cases contribute +rho_k G(x_k).
    std::vector<Pole> fix;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto [c, e] = f[i];
        for (int k = 0; k < 10000; ++k) {
            const cplx xk = e == 1 ? ipow(q, -k) / c : c * ipow(q, k);
            if (e == 1 && std::abs(xk) >= best_r) break;
            if (e == -1 && std::abs(xk) <= best_r) break;
            fix.push_back({i, k, xk, e == 1});
        }
    }
    for (const auto& pl : fix) {
        cplx g;
        try {
            g = pref(pl.x);
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (j == pl.factor) continue;
                const auto [c, e] = f[j];
                g *= sigma(e == 1 ? c * pl.x : c / pl.x, p);
            }
        } catch (const PoleError&) {
            throw ContourInfeasible("separated_integral: colliding poles (higher order)");
        }
        val += qspecial::sigma_pole_residue(pl.k, q, p.trunc_tol) * g;
    }
    if (report) *report = {best_r, nodes, static_cast<int>(fix.size()), best_gap};
    return val;
}

Annulus pentagon_annulus(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b,
                         const QParams& p) {
    Annulus an{0.0, std::numeric_limits<double>::infinity()};
    for (int j = 0; j < 3; ++j) {
        an.lo = std::max(an.lo, std::abs(p.q / b[j]));
        an.hi = std::min(an.hi, 1.0 / std::abs(a[j]));
    }
    return an;
}

PentagonResult pentagon_check(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b,
                              const QParams& p, const CircleContour& c) {
    const cplx ratio = b[0] * b[1] * b[2] / (a[0] * a[1] * a[2]);
    const cplx q2 = p.q * p.q;
    if (std::abs(ratio - q2) > 1e-12 * std::max(1.0, std::abs(q2)))
        throw ConstraintError("pentagon_check: b1 b2 b3 / (a1 a2 a3) != q^2");
    const Annulus an = pentagon_annulus(a, b, p);
    if (!an.feasible()) throw ContourInfeasible("pentagon_check: empty annulus");
    CircleContour cc = c;
    if (cc.radius <= 0) cc.radius = an.mid();
    if (!an.contains(cc.radius)) throw ContourInfeasible("pentagon_check: radius outside annulus");

    auto f = [&](cplx v) {
        cplx r{1.0, 0.0};
        for (int j = 0; j < 3; ++j) r *= sigma(a[j] * v, p) / sigma(b[j] * v, p);
        return r;
    };
    PentagonResult out;
    out.lhs = circle_integral(f, cc) / kappa_const(p);
    cplx rhs{1.0, 0.0};
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) rhs /= sigma(b[j] / a[k], p);
    out.rhs = rhs;
    out.relerr = relerr(out.lhs, out.rhs);
    return out;
}

Annulus sixj_annulus(cplx v1, cplx v2, cplx v3, cplx x, cplx y, const QParams& p) {
    const cplx V = v1 * v2 * v3;
    Annulus an;
    an.lo = std::max({std::abs(v2), std::abs(p.q) / std::abs(V), std::abs(y) / std::abs(x)});
    an.hi = std::min({1.0 / std::abs(v1), std::abs(y) / std::abs(v3), 1.0 / std::abs(x)});
    return an;
}

double sixj_check(cplx v1, cplx v2, cplx v3, cplx x, cplx y, const QParams& p,
                  const CircleContour& c) {
    const Annulus an = sixj_annulus(v1, v2, v3, x, y, p);
    cplx lhs;
    if (an.feasible()) {
        CircleContour cc = c;
        if (cc.radius <= 0) cc.radius = an.mid();
        if (!an.contains(cc.radius)) throw ContourInfeasible("sixj_check: radius outside annulus");
        auto f = [&](cplx xp) {
            return kappa_cg(xp * v1, v2 / xp, p) * kappa_cg(y * v1 * v2, xp / y * v3, p) *
                   kappa_cg(y / (x * xp), x * xp, p);
        };
        lhs = circle_integral(f, cc);
    } else {
        // No circle separates the pole families: deform through residues.
        const cplx V = v1 * v2 * v3;
        const std::vector<SigmaFactor> fs{{v1, 1, 1},    {v2, -1, 1}, {v3 / y, 1, 1},
                                          {V, 1, -1},    {y / x, -1, 1}, {x, 1, 1}};
        const cplx pref = sigma(y * v1 * v2, p) / (sigma(v1 * v2, p) * sigma(y, p));
        lhs = separated_integral(fs, [pref](cplx) { return pref; }, p, c.nodes);
    }
    lhs /= kappa_const(p);
    const cplx rhs = kappa_cg(y / x * v1, v2 * v3 / y, p) * kappa_cg(x * v2, v3 / x, p);
    return relerr(lhs, rhs);
}

InversionResult inversion_check(cplx x, cplx y, int mode_m, const QParams& p,
                                const CircleContour& c) {
    if (std::abs(mode_m) > 20) throw DomainError("inversion_check: |m| must be <= 20");
    const int m = mode_m;
    // Pairing over x'' with t = x' x'' leaves x'^{-m} g_m(y); then u = x x' gives x^m h_m(y).
    const cplx g = separated_integral({{1.0 / y, 1, 1}, {1.0, -1, 1}},
                                      [&](cplx t) { return ipow(t, m); }, p, c.nodes) /
                   sigma(1.0 / y, p);
    const cplx h = separated_integral({{y, -1, 1}, {1.0, 1, 1}},
                                      [&](cplx u) { return ipow(u, -m); }, p, c.nodes) /
                   sigma(y, p);
    const cplx ks = kappa_const(p);
    InversionResult out;
    out.pairing = ipow(x, m) * g * h / ks;
    out.expected = ks * ipow(x, m);
    out.relerr = relerr(out.pairing, out.expected);
    out.resolution_warning = c.nodes < 4 * std::abs(m);
    return out;
}

}  // namespace fba::quadrature
