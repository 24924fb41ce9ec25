#include "fba/baxterflow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fba::baxterflow {

using qspecial::bracket;
using qspecial::jfun;
using qspecial::qpoch;
using qspecial::theta_h;

TransferPoly::TransferPoly(int n_, int m, cplx v) : n(n_), m_charge(m), v_total(v) {
    if (n < 1) throw DomainError("TransferPoly: n must be positive");
    coeffs.assign(static_cast<std::size_t>(n + 1), cplx{});
    const cplx e = v + 1.0 / v;
    coeffs.back() = e;
    coeffs.front() = (n % 2 == 0 ? 1.0 : -1.0) * e;
}

cplx TransferPoly::t(int j) const {
    if (j < -n || j > n || (j + n) % 2 != 0) return {};
    return coeffs[static_cast<std::size_t>((j + n) / 2)];
}

void TransferPoly::set_t(int j, cplx value) {
    if (j < -n || j > n || (j + n) % 2 != 0)
        throw DomainError("TransferPoly: index violates the parity constraint");
    coeffs[static_cast<std::size_t>((j + n) / 2)] = value;
}

cplx TransferPoly::operator()(cplx z) const {
    cplx acc{};
    const cplx z2 = z * z;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z2 + coeffs[i];
    return acc * ipow(z, -n);
}

std::vector<int> TransferPoly::interior() const {
    std::vector<int> idx;
    for (int j = -n + 2; j <= n - 2; j += 2) idx.push_back(j);
    return idx;
}

double TransferPoly::edge_deviation() const {
    const cplx e = v_total + 1.0 / v_total;
    return std::max(std::abs(t(n) - e), std::abs(t(-n) - (n % 2 == 0 ? 1.0 : -1.0) * e));
}

std::vector<cplx> tropical_roots(int n, cplx s) {
    std::vector<cplx> w;
    for (int k = 0; k < n; ++k) {
        const cplx zeta = std::polar(1.0, 2.0 * kPi * (k + 0.5) / n);
        w.push_back((s - zeta) / (1.0 - s * zeta));
    }
    return w;
}

TransferPoly tropical_transfer(int n, cplx s) {
    // (-z)^n T(z) = (1 - s^{2n}) prod (1 - z^2/w^2) + (1 - s^2 z^2)^n + (s^2 - z^2)^n, as a polynomial in u = z^2.
    const auto w = tropical_roots(n, s);
    std::vector<cplx> poly{1.0};
    auto mul = [](const std::vector<cplx>& a, cplx c0, cplx c1) {
        std::vector<cplx> r(a.size() + 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] += a[i] * c0;
            r[i + 1] += a[i] * c1;
        }
        return r;
    };
    for (cplx wk : w) poly = mul(poly, 1.0, -1.0 / (wk * wk));
    const cplx s2 = s * s;
    std::vector<cplx> a{1.0}, b{1.0};
    for (int i = 0; i < n; ++i) {
        a = mul(a, 1.0, -s2);
        b = mul(b, s2, -1.0);
    }
    const cplx f = 1.0 - ipow(s, 2 * n);
    TransferPoly T(n, 0, 1.0);
    const double sg = n % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i <= n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        T.coeffs[ui] = sg * (f * poly[ui] + a[ui] + b[ui]);
    }
    return T;
}

int default_depth(cplx z, const QParams& p, int K) {
    if (K > 0) return K;
    const double lq = std::log(std::abs(p.q));
    const double need = (0.5 * std::log(p.trunc_tol) - std::log(std::max(std::abs(z), 1e-300))) / lq;
    return std::max(4, static_cast<int>(std::ceil(need)) + 2);
}

std::pair<cplx, cplx> chi_plus_pair(cplx z, const TransferPoly& T, const QParams& p, int K) {
    if (!finite(z)) throw DomainError("chi_plus: non-finite argument");
    if (z == cplx{}) return {cplx{1.0}, cplx{1.0}};  // normalization; T(w) is singular at w = 0
    const int depth = default_depth(z, p, K);
    const int n = T.n;
    const cplx qm2 = std::pow(p.q, 0.5 * T.m_charge);
    const cplx qm = ipow(p.q, T.m_charge);
    const cplx s2 = p.s * p.s, q2 = p.q * p.q;
    cplx x0{1.0}, x1{1.0};
    for (int k = depth; k >= 0; --k) {
        const cplx w = ipow(p.q, k) * z;
        const cplx w2 = w * w;
        const cplx a = ipow(-w, n) * qm2 * T(w);
        const cplx b = -qm * ipow((1.0 - s2 * w2) * (1.0 - q2 * w2 / s2), n);
        const cplx y0 = a * x0 + b * x1;
        x1 = x0;
        x0 = y0;
    }
    if (!finite(x0) || !finite(x1)) throw ConvergenceError("chi_plus: non-finite product");
    return {x1, x0};
}

std::pair<cplx, cplx> chi_minus_pair(cplx z, const TransferPoly& T, const QParams& p, int K) {
    if (!finite(z) || z == cplx{}) throw DomainError("chi_minus: bad argument");
    const int depth = default_depth(1.0 / z, p, K);
    const int n = T.n;
    const cplx qm2 = std::pow(p.q, 0.5 * T.m_charge);
    const cplx qm = ipow(p.q, T.m_charge);
    const cplx s2 = p.s * p.s, q2 = p.q * p.q;
    cplx x0{1.0}, x1{1.0};
    for (int k = depth; k >= 0; --k) {
        const cplx w = z * ipow(p.q, -k);
        const cplx iw2 = 1.0 / (w * w);
        const cplx a = ipow(w, -n) * qm2 * T(w);
        const cplx b = -qm * ipow((1.0 - s2 * iw2) * (1.0 - q2 * iw2 / s2), n);
        const cplx y0 = a * x0 + b * x1;
        x1 = x0;
        x0 = y0;
    }
    if (!finite(x0) || !finite(x1)) throw ConvergenceError("chi_minus: non-finite product");
    return {x1, x0};
}

cplx chi_plus_eval(cplx z, const TransferPoly& T, const QParams& p, int K) {
    return chi_plus_pair(z, T, p, K).first;
}

cplx chi_minus_eval(cplx z, const TransferPoly& T, const QParams& p, int K) {
    return chi_minus_pair(z, T, p, K).first;
}

std::vector<cplx> chi_plus_series(const TransferPoly& T, const QParams& p, int kmax) {
    const int n = T.n;
    const cplx qm2 = std::pow(p.q, 0.5 * T.m_charge);
    const cplx qm = ipow(p.q, T.m_charge);
    const double sg = n % 2 == 0 ? 1.0 : -1.0;
    std::vector<cplx> tau(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) tau[static_cast<std::size_t>(i)] = qm2 * sg * T.t(2 * i - n);
    // beta: coefficients in u = z^2 of (1 - s^2 u)^n (1 - q^2 u / s^2)^n
    std::vector<cplx> beta{1.0};
    const cplx r1 = p.s * p.s, r2 = p.q * p.q / (p.s * p.s);
    for (int f = 0; f < 2 * n; ++f) {
        const cplx r = f < n ? r1 : r2;
        std::vector<cplx> nb(beta.size() + 1);
        for (std::size_t i = 0; i < beta.size(); ++i) {
            nb[i] += beta[i];
            nb[i + 1] -= r * beta[i];
        }
        beta = nb;
    }
    for (auto& b : beta) b *= qm;
    std::vector<cplx> c{1.0};
    for (int k = 1; k <= kmax; ++k) {
        cplx acc{};
        for (int i = 1; i <= k && i <= 2 * n; ++i) {
            const cplx ti = i <= n ? tau[static_cast<std::size_t>(i)] : cplx{};
            acc += (ti - beta[static_cast<std::size_t>(i)] * ipow(p.q, 2 * (k - i))) *
                   c[static_cast<std::size_t>(k - i)];
        }
        const cplx den = ipow(p.q, -2 * k) - tau[0] + beta[0] * ipow(p.q, 2 * k);
        c.push_back(acc / den);
    }
    return c;
}

double HolomorphicPair::truncation_gap(cplx z) const {
    const int k1 = default_depth(z, p, K);
    const int k2 = default_depth(1.0 / z, p, K);
    const double a = std::abs(chi_plus_eval(z, T, p, k1) - chi_plus_eval(z, T, p, k1 + 8));
    const double b = std::abs(chi_minus_eval(z, T, p, k2) - chi_minus_eval(z, T, p, k2 + 8));
    return std::max(a, b);
}

cplx wronskian_chi(cplx z, const HolomorphicPair& hp) {
    const auto [cp, cpq] = chi_plus_pair(z, hp.T, hp.p, hp.K);
    const auto [cmq, cm] = chi_minus_pair(z / hp.p.q, hp.T, hp.p, hp.K);
    const int n = hp.T.n, m = hp.T.m_charge;
    const cplx br = ipow(bracket(z / hp.p.s) * bracket(hp.p.q / (hp.p.s * z)), n);
    return cpq * cm - ipow(hp.p.q, n + m) * br * cp * cmq;
}

cplx c_ratio(cplx z, const HolomorphicPair& hp) {
    const int n = hp.T.n, m = hp.T.m_charge;
    const cplx cm = hp.chi_minus(z);
    if (cm == cplx{}) throw DomainError("c_ratio: chi- vanishes");
    return ipow(-z, n) * ipow(z, m) * ipow(jfun(hp.p.s, z, hp.p), n) * hp.chi_plus(z) / cm;
}

cplx fundamental_rep(cplx w, cplx q) {
    const double aq = std::abs(q);
    const double lo = std::sqrt(aq), hi = 1.0 / std::sqrt(aq);
    for (int i = 0; i < 200 && std::abs(w) <= lo; ++i) w /= q;
    for (int i = 0; i < 200 && std::abs(w) > hi; ++i) w *= q;
    return w;
}

std::vector<cplx> find_wronskian_zeros(const HolomorphicPair& hp, const std::vector<cplx>& seeds) {
    std::vector<cplx> out;
    for (cplx z : seeds) {
        bool done = false;
        for (int it = 0; it < 60; ++it) {
            const cplx h = 1e-6 * std::max(1.0, std::abs(z));
            const cplx f = wronskian_chi(z, hp);
            const cplx d = (wronskian_chi(z + h, hp) - wronskian_chi(z - h, hp)) / (2.0 * h);
            if (d == cplx{}) break;
            const cplx dz = f / d;
            z -= dz;
            if (std::abs(dz) < 1e-14 * std::abs(z)) {
                done = true;
                break;
            }
        }
        if (!done && std::abs(wronskian_chi(z, hp)) > 1e-10)
            throw ConvergenceError("find_wronskian_zeros: Newton did not converge");
        out.push_back(fundamental_rep(z, hp.p.q));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i] - out[j]) < 1e-8) throw ZeroCollision("find_wronskian_zeros: two seeds gave the same zero");
    return out;
}

BetheEval bethe_evaluate(const TransferPoly& T, const QParams& p, const std::vector<cplx>& seeds,
                         int K) {
    HolomorphicPair hp{T, p, K};
    BetheEval ev;
    ev.roots = find_wronskian_zeros(hp, seeds.empty() ? tropical_roots(T.n, p.s) : seeds);
    for (cplx w : ev.roots) ev.c_values.push_back(c_ratio(w, hp));
    const cplx last = ev.c_values.back();
    for (std::size_t j = 0; j + 1 < ev.c_values.size(); ++j) ev.residuals.push_back(ev.c_values[j] / last - 1.0);
    return ev;
}

std::vector<double> bethe_residual(const TransferPoly& T, const QParams& p, int K,
                                   const std::vector<cplx>& seeds) {
    const auto ev = bethe_evaluate(T, p, seeds, K);
    std::vector<double> r;
    for (cplx x : ev.residuals) r.push_back(std::abs(x));
    return r;
}

namespace {

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (cplx x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

BetheSolution solve_ground(int n, const QParams& p, const SolveOptions& opt) {
    if (n < 2) throw DomainError("solve_ground: n must be >= 2");
    const double aq = std::abs(p.q);
    if (!(aq > 0.0 && aq <= 0.3)) throw DomainError("solve_ground: need 0 < |q| <= 0.3");
    p.validate();

    std::vector<cplx> schedule;
    if (aq <= opt.q_start || opt.q_steps <= 1) {
        schedule.push_back(p.q);
    } else {
        for (int i = 0; i < opt.q_steps; ++i) {
            const double e = 1.0 - static_cast<double>(i) / (opt.q_steps - 1);
            schedule.push_back(p.q * std::pow(opt.q_start / aq, e));
        }
        schedule.back() = p.q;
    }

    TransferPoly T = tropical_transfer(n, p.s);
    std::vector<cplx> seeds = tropical_roots(n, p.s);
    const auto idx = T.interior();
    const int nu = static_cast<int>(idx.size());
    cplx last_good{};
    int total_iter = 0;
    BetheEval ev;
    QParams pk = p;
    for (cplx qk : schedule) {
        pk.q = qk;
        try {
            ev = bethe_evaluate(T, pk, seeds, opt.K);
            double r = max_abs(ev.residuals);
            int it = 0;
            while (r >= opt.tol) {
                if (++it > opt.max_iter) throw ConvergenceError("Newton iteration limit");
                Eigen::MatrixXcd J(nu, nu);
                Eigen::VectorXcd rv(nu);
                for (int a = 0; a < nu; ++a) rv(a) = ev.residuals[static_cast<std::size_t>(a)];
                for (int a = 0; a < nu; ++a) {
                    TransferPoly Tp = T;
                    const int j = idx[static_cast<std::size_t>(a)];
                    const double h = opt.fd_step * std::max(1.0, std::abs(T.t(j)));
                    Tp.set_t(j, T.t(j) + h);
                    const auto evp = bethe_evaluate(Tp, pk, ev.roots, opt.K);
                    for (int b = 0; b < nu; ++b)
                        J(b, a) = (evp.residuals[static_cast<std::size_t>(b)] - rv(b)) / h;
                }
                const Eigen::VectorXcd dx = J.fullPivLu().solve(-rv);
                double lam = 1.0;
                bool accepted = false;
                while (lam >= 1.0 / 1024) {
                    TransferPoly Tn = T;
                    for (int a = 0; a < nu; ++a) {
                        const int j = idx[static_cast<std::size_t>(a)];
                        Tn.set_t(j, T.t(j) + lam * dx(a));
                    }
                    try {
                        auto evn = bethe_evaluate(Tn, pk, ev.roots, opt.K);
                        const double rn = max_abs(evn.residuals);
                        if (rn < r) {
                            T = Tn;
                            ev = std::move(evn);
                            r = rn;
                            accepted = true;
                            break;
                        }
                    } catch (const Error&) {
                    }
                    lam *= 0.5;
                }
                if (!accepted) throw ConvergenceError("damped Newton step failed to reduce the residual");
            }
            total_iter += it;
        } catch (const Error& e) {
            throw HomotopyFailure(std::string("solve_ground: ") + e.what(), last_good);
        }
        seeds = ev.roots;
        last_good = qk;
    }

    BetheSolution sol;
    sol.p = p;
    sol.T = T;
    sol.w = ev.roots;
    sol.C = ev.c_values.back();
    for (cplx x : ev.residuals) sol.residuals.push_back(std::abs(x));
    sol.newton_iterations = total_iter;
    certify(sol);
    return sol;
}

EntireH build_H(const BetheSolution& sol, const QParams& p) {
    const int n = sol.T.n;
    const int m = sol.T.m_charge;
    const auto w = sol.w;
    const auto T = sol.T;
    const cplx C = sol.C;
    auto Vm = [w, p](cplx z) {
        cplx r{1.0};
        for (cplx wk : w) r *= qpoch(z / wk, p.q, p.trunc_tol) * qpoch(p.q * wk / z, p.q, p.trunc_tol);
        return r;
    };
    EntireH out;
    out.H_plus = [=](cplx z) {
        const cplx f = qpoch(p.s / z, p.q, p.trunc_tol) * qpoch(-p.q / (p.s * z), p.q, p.trunc_tol);
        return ipow(-z, n) * ipow(z, m) * ipow(f, n) / Vm(z) * chi_plus_eval(z, T, p);
    };
    out.H_minus = [=](cplx z) {
        const cplx f = qpoch(p.s * z, p.q, p.trunc_tol) * qpoch(-p.q * z / p.s, p.q, p.trunc_tol);
        return ipow(f, n) / Vm(z) * chi_minus_eval(z, T, p);
    };
    auto hp = out.H_plus;
    auto hm = out.H_minus;
    out.H = [hp, hm, C](cplx z) { return hp(z) - C * hm(z); };
    HolomorphicPair pair{T, p, 0};
    for (cplx wk : w) out.pole_residuals.push_back(std::abs(c_ratio(wk, pair) - C) / std::abs(C));
    return out;
}

double baxter_grid_residual(const std::function<cplx(cplx)>& F, const TransferPoly& T,
                            const QParams& p, double radius, int points) {
    const int n = T.n;
    const cplx q = p.q, s = p.s;
    const double sg = n % 2 == 0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (int j = 0; j < points; ++j) {
        const cplx z = std::polar(radius, 2.0 * kPi * (j + 0.37) / points);
        const cplx lhs = T(z) * F(z);
        const cplx up = sg * ipow((1.0 - s * z) * (1.0 + q * z / s), n) * F(q * z);
        const cplx dn = ipow((1.0 - s / z) * (1.0 + q / (s * z)), n) * F(z / q);
        const double scale = std::max({std::abs(lhs), std::abs(up), std::abs(dn)});
        worst = std::max(worst, std::abs(lhs - up - dn) / scale);
    }
    return worst;
}

WronskianFit wronskian_q_check(const std::function<cplx(cplx)>& H, const QParams& p, int n,
                               int points) {
    std::mt19937_64 rng(20240917ULL);
    std::uniform_real_distribution<double> du(-0.3, 0.3), dt(0.0, 2.0 * kPi);
    const cplx q = p.q, s = p.s;
    std::vector<cplx> L, R;
    for (int i = 0; i < points; ++i) {
        const double u = du(rng);
        const cplx z = std::polar(std::exp(u), dt(rng));
        const cplx l = ipow((1.0 - z / s) * (1.0 + q / (s * z)), n) * H(z / q) * H(-z) -
                       ipow((1.0 + z / s) * (1.0 - q / (s * z)), n) * H(z) * H(-z / q);
        const cplx r = ipow(theta_h(z / s, p) * theta_h(-s * z, p), n) -
                       ipow(theta_h(-z / s, p) * theta_h(s * z, p), n);
        L.push_back(l);
        R.push_back(r);
    }
    cplx num{}, mean{};
    double den = 0.0;
    std::vector<cplx> ratio;
    for (std::size_t i = 0; i < L.size(); ++i) {
        num += std::conj(R[i]) * L[i];
        den += std::norm(R[i]);
        ratio.push_back(L[i] / R[i]);
        mean += ratio.back();
    }
    mean /= static_cast<double>(ratio.size());
    double var = 0.0;
    for (cplx x : ratio) var += std::norm(x - mean);
    var /= static_cast<double>(ratio.size());
    WronskianFit fit;
    fit.W = num / den;
    fit.scatter = std::sqrt(var) / std::abs(mean);
    return fit;
}

WronskianFit wronskian_q_check(const BetheSolution& sol, const QParams& p) {
    const auto eh = build_H(sol, p);
    return wronskian_q_check(eh.H, p, sol.T.n);
}

void certify(BetheSolution& sol) {
    const auto eh = build_H(sol, sol.p);
    sol.certificates.baxter_grid_residual = baxter_grid_residual(eh.H, sol.T, sol.p);
    sol.certificates.pole_residuals = eh.pole_residuals;
    const auto fit = wronskian_q_check(eh.H, sol.p, sol.T.n);
    sol.certificates.wronskian_scatter = fit.scatter;
    sol.wronskian_const = fit.W;
}

}  // namespace fba::baxterflow
