#include "fba/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fba::thermo {

using qspecial::log_qpoch;
using qspecial::log_sigma;

namespace {

constexpr double kSmallTerm = 1e-18;

cplx mean_of(const std::vector<cplx>& v) {
    // Fixed-order pairwise mean.
    std::vector<cplx> a = v;
    while (a.size() > 1) {
        std::vector<cplx> b((a.size() + 1) / 2);
        for (std::size_t i = 0; i < a.size() / 2; ++i) b[i] = a[2 * i] + a[2 * i + 1];
        if (a.size() % 2) b.back() = a.back();
        a.swap(b);
    }
    return a.empty() ? cplx{} : a[0] / static_cast<double>(v.size());
}

std::vector<cplx> unit_nodes(int n) {
    std::vector<cplx> w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * (j + 0.5) / n);
    return w;
}

}  // namespace

DensityModel DensityModel::make(cplx s, cplx q, double tail) {
    const double rho = std::max(std::abs(s), std::abs(q / s));
    if (!(rho < 1.0) || !(std::abs(q) < 1.0)) throw TailError("density: need max(|s|, |q/s|) < 1");
    // Tail of sum_m rho^m (w^m + w^-m) / |1 + (-q)^m| below `tail`.
    const double c = 2.0 / ((1.0 - std::abs(q)) * (1.0 - rho));
    const int M = static_cast<int>(std::ceil(std::log(tail / c) / std::log(rho))) + 1;
    if (M > 100000) throw TailError("density: series converges too slowly");
    return {s, q, std::max(M, 1)};
}

QParams DensityModel::params() const {
    QParams p;
    p.q = q;
    p.s = s;
    return p;
}

cplx density_coeff(int m, const DensityModel& dm) {
    return (ipow(dm.s, m) + ipow(-dm.q / dm.s, m)) / (1.0 + ipow(-dm.q, m));
}

cplx density_complex(cplx w, const DensityModel& dm) {
    cplx acc{1.0};
    for (int m = 1; m <= dm.M; ++m) acc += density_coeff(m, dm) * (ipow(w, m) + ipow(w, -m));
    return acc;
}

double density(cplx w, const DensityModel& dm) {
    const cplx v = density_complex(w, dm);
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
        throw DomainError("density: non-real value (complex parameters or |w| != 1)");
    return v.real();
}

double density_tropical(cplx w, cplx s) {
    const cplx v = 1.0 + s * w / (1.0 - s * w) + (s / w) / (1.0 - s / w);
    return v.real();
}

double density_constant_mode(const DensityModel& dm, int nodes) {
    std::vector<cplx> vals;
    for (cplx w : unit_nodes(nodes)) vals.push_back(density_complex(w, dm));
    return mean_of(vals).real();
}

double density_functional_residual(const DensityModel& dm, const quadrature::CircleContour& c,
                                   const std::function<cplx(cplx)>& Pin) {
    const QParams p = dm.params();
    const int N = std::max(c.nodes, 64);
    const auto ws = unit_nodes(N);
    std::vector<cplx> Pw;
    for (cplx w : ws) Pw.push_back(Pin ? Pin(w) : density_complex(w, dm));
    // Fourier coefficients of P on the nodes: Phat[k] = <P w^{-k}>.
    const int kmax = N / 2 - 1;
    std::vector<cplx> Pplus(static_cast<std::size_t>(kmax + 1)), Pminus(static_cast<std::size_t>(kmax + 1));
    for (int k = 1; k <= kmax; ++k) {
        std::vector<cplx> a, b;
        for (std::size_t j = 0; j < ws.size(); ++j) {
            a.push_back(Pw[j] * ipow(ws[j], -k));
            b.push_back(Pw[j] * ipow(ws[j], k));
        }
        Pplus[static_cast<std::size_t>(k)] = mean_of(a);
        Pminus[static_cast<std::size_t>(k)] = mean_of(b);
    }
    const cplx q2 = p.q * p.q;
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
        const cplx z = std::polar(1.0, 2.0 * kPi * (i + 0.3) / 16);
        // Sawtooth log(-z/w) = sum_k ((w/z)^k - (z/w)^k)/k, integrated mode by mode.
        cplx saw{};
        for (int k = 1; k <= kmax; ++k)
            saw += (Pminus[static_cast<std::size_t>(k)] * ipow(z, -k) - Pplus[static_cast<std::size_t>(k)] * ipow(z, k)) / static_cast<double>(k);
        std::vector<cplx> g;
        for (std::size_t j = 0; j < ws.size(); ++j) {
            const cplx x2 = (ws[j] / z) * (ws[j] / z);
            cplx acc{};
            cplx qk = q2;
            while (std::abs(qk) > kSmallTerm) {
                acc += std::log(1.0 - qk / x2) - std::log(1.0 - qk * x2);
                qk *= q2;
            }
            g.push_back(Pw[j] * acc);
        }
        const cplx val = log_sigma(p.s * z, p) - log_sigma(p.s / z, p) + saw + mean_of(g);
        worst = std::max(worst, std::abs(val));
    }
    return worst;
}

cplx partition_per_site(cplx z, const DensityModel& dm) {
    const cplx q = dm.q, s = dm.s;
    const double rho = std::abs(q / s) * std::max(std::abs(z), 1.0 / std::abs(z));
    if (!(rho < 1.0)) throw TailError("partition_per_site: series diverges at this z");
    cplx acc{};
    for (int m = 1; m < 100000; ++m) {
        const cplx mq = ipow(-q, m);
        const cplx term = mq * (ipow(s, -m) - ipow(s, m)) * (ipow(z, m) + ipow(z, -m)) /
                          (static_cast<double>(m) * (1.0 - ipow(q, m)) * (1.0 + mq));
        acc += term;
        if (std::pow(rho, m) < 1e-18 && std::abs(term) < 1e-18) return acc;
    }
    throw TailError("partition_per_site: tail not below tolerance");
}

cplx partition_integral(cplx z, const DensityModel& dm, int nodes) {
    const QParams p = dm.params();
    const auto ws = unit_nodes(nodes);
    const double r = std::abs(z);
    std::vector<cplx> vals;
    if (std::abs(r - 1.0) < 1e-12) {
        for (cplx w : ws)
            vals.push_back(density_complex(w, dm) *
                           (log_qpoch(-p.q * w / z, p.q, p.trunc_tol) - log_qpoch(p.q * z / w, p.q, p.trunc_tol)));
        cplx sing{};
        for (int k = 1; k <= dm.M; ++k) sing += density_coeff(k, dm) * ipow(z, k) / static_cast<double>(k);
        return -log_sigma(p.s * z, p) + mean_of(vals) + sing;
    }
    if (!(r > std::abs(p.q) && r < 1.0)) throw DomainError("partition_integral: need |q| < |z| <= 1");
    for (cplx w : ws) vals.push_back(density_complex(w, dm) * log_sigma(z / w, p));
    return -log_sigma(p.s * z, p) + mean_of(vals);
}

cplx theta_ratio(cplx x, const QParams& p) {
    const cplx q2 = p.q * p.q;
    return qspecial::qpoch(q2 * x * x, q2, p.trunc_tol) / qspecial::qpoch(q2 / (x * x), q2, p.trunc_tol);
}

cplx theta_ratio_sigma_form(cplx x, const QParams& p) {
    return -qspecial::sigma(1.0 / x, p) / (x * qspecial::sigma(x, p));
}

double EmpiricalDensity::operator()(double phi) const {
    const std::size_t n = phi_mid.size();
    if (n == 0) return 0.0;
    const double two_pi = 2.0 * kPi;
    if (bandwidth > 0.0) {
        const double kappa = 1.0 / (bandwidth * bandwidth);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double wgt = std::exp(kappa * (std::cos(phi - phi_mid[i]) - 1.0));
            num += wgt * value[i];
            den += wgt;
        }
        return num / den;
    }
    double x = std::fmod(phi - phi_mid[0], two_pi);
    if (x < 0) x += two_pi;
    x += phi_mid[0];
    std::size_t i = 0;
    while (i + 1 < n && phi_mid[i + 1] <= x) ++i;
    const std::size_t j = (i + 1) % n;
    double span = phi_mid[j] - phi_mid[i];
    if (span <= 0) span += two_pi;
    const double t = (x - phi_mid[i]) / span;
    return (1.0 - t) * value[i] + t * value[j];
}

EmpiricalDensity empirical_density(const std::vector<cplx>& roots, double bandwidth) {
    const std::size_t n = roots.size();
    if (n < 2) throw DomainError("empirical_density: need at least two roots");
    std::vector<double> ph;
    for (cplx w : roots) {
        if (std::abs(std::abs(w) - 1.0) > 1e-6) throw DomainError("empirical_density: roots must be unimodular");
        double a = std::arg(w);
        if (a < 0) a += 2.0 * kPi;
        ph.push_back(a);
    }
    std::sort(ph.begin(), ph.end());
    EmpiricalDensity ed;
    ed.bandwidth = bandwidth;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = ph[k];
        double b = k + 1 < n ? ph[k + 1] : ph[0] + 2.0 * kPi;
        const double d = b - a;
        if (d < 1e-12) throw DomainError("empirical_density: duplicate roots");
        ed.phi_mid.push_back(0.5 * (a + b));
        ed.value.push_back(2.0 * kPi / (static_cast<double>(n) * d));
    }
    return ed;
}

}  // namespace fba::thermo
