#include "fba/qspecial.hpp"

#include <cmath>
#include <limits>

namespace fba::qspecial {

namespace {

constexpr int kMaxFactors = 200000;
constexpr double kPoleThreshold = 1e3 * std::numeric_limits<double>::epsilon();

void check_base(cplx base) {
    if (!(std::abs(base) < 1.0)) throw DivergenceError("q-Pochhammer base must satisfy |base| < 1");
}

}  // namespace

void QParams::validate() const {
    const double aq = std::abs(q), as = std::abs(s);
    if (!(aq < 1.0)) throw DomainError("|q| must be < 1");
    if (!(aq < as && as < 1.0)) throw DomainError("need |q| < |s| < 1");
    if (!(trunc_tol > 0.0)) throw DomainError("trunc_tol must be positive");
    if (quad_nodes < 16) throw DomainError("quad_nodes must be >= 16");
}

cplx bracket(cplx x) {
    if (x == cplx{}) throw DomainError("bracket: x = 0");
    return x - 1.0 / x;
}

std::pair<cplx, TruncationReport> qpoch_inf(cplx x, cplx base, double tol) {
    check_base(base);
    TruncationReport rep;
    cplx prod{1.0, 0.0};
    cplx term = x;
    int k = 0;
    while (std::abs(term) >= tol && k < kMaxFactors) {
        prod *= 1.0 - term;
        term *= base;
        ++k;
    }
    rep.terms_used = k;
    rep.last_term_magnitude = std::abs(term);
    rep.converged = rep.last_term_magnitude <= tol;
    return {prod, rep};
}

cplx qpoch(cplx x, cplx base, double tol) { return qpoch_inf(x, base, tol).first; }

cplx log_qpoch(cplx x, cplx base, double tol) {
    check_base(base);
    cplx acc{};
    cplx term = x;
    for (int k = 0; std::abs(term) >= tol && k < kMaxFactors; ++k) {
        acc += std::log(1.0 - term);
        term *= base;
    }
    return acc;
}

cplx sigma(cplx v, const QParams& p, double nudge) {
    if (nudge != 0.0) v *= std::exp(-nudge);
    if (v == cplx{}) throw DomainError("sigma: v = 0");
    check_base(p.q);
    cplx den{1.0, 0.0};
    cplx term = v;
    for (int k = 0; std::abs(term) >= p.trunc_tol && k < kMaxFactors; ++k) {
        const cplx f = 1.0 - term;
        if (std::abs(f) < kPoleThreshold) throw PoleError("sigma: argument on pole set q^{-k}");
        den *= f;
        term *= p.q;
    }
    return qpoch(-p.q / v, p.q, p.trunc_tol) / den;
}

cplx log_sigma(cplx v, const QParams& p) {
    if (v == cplx{}) throw DomainError("log_sigma: v = 0");
    return log_qpoch(-p.q / v, p.q, p.trunc_tol) - log_qpoch(v, p.q, p.trunc_tol);
}

cplx sigma_pole_residue(int k, cplx q, double tol) {
    cplx den = qpoch(q, q, tol);
    cplx qi{1.0, 0.0};
    for (int i = 1; i <= k; ++i) {
        qi /= q;
        den *= 1.0 - qi;
    }
    return qpoch(-ipow(q, k + 1), q, tol) / den;
}

cplx kappa_const(const QParams& p) {
    return qpoch(-p.q, p.q, p.trunc_tol) / qpoch(p.q, p.q, p.trunc_tol);
}

cplx kappa_cg(cplx v1, cplx v2, const QParams& p) {
    return sigma(v1, p) * sigma(v2, p) / sigma(v1 * v2, p);
}

cplx jfun(cplx s, cplx v, const QParams& p) { return sigma(s * v, p) / sigma(s / v, p); }

cplx efun(cplx s, cplx v, const QParams& p) { return bracket(v / s) * bracket(p.q / (s * v)); }

cplx theta_h(cplx z, const QParams& p) {
    if (z == cplx{}) throw DomainError("theta_h: z = 0");
    return qpoch(z, p.q, p.trunc_tol) * qpoch(p.q / z, p.q, p.trunc_tol);
}

}  // namespace fba::qspecial
