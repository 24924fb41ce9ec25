#pragma once

#include <utility>

#include "fba/common.hpp"

namespace fba::qspecial {

struct QParams {
    cplx q{0.1, 0.0};
    cplx s{0.5, 0.0};
    double trunc_tol = 1e-17;
    int quad_nodes = 512;

    // Throws DomainError unless |q| < |s| < 1, trunc_tol > 0, quad_nodes >= 16.
    void validate() const;
};

struct TruncationReport {
    int terms_used = 0;
    double last_term_magnitude = 0.0;
    bool converged = false;
};

// x - 1/x
cplx bracket(cplx x);

// (x; base)_inf, truncated at the first k with |base|^k |x| < tol.
std::pair<cplx, TruncationReport> qpoch_inf(cplx x, cplx base, double tol);
cplx qpoch(cplx x, cplx base, double tol = 1e-17);

// Sum of principal logarithms of the factors of (x; base)_inf.
cplx log_qpoch(cplx x, cplx base, double tol = 1e-17);

// sigma(v) = (-q/v; q) / (v; q). `nudge` evaluates at v e^{-nudge}.
cplx sigma(cplx v, const QParams& p, double nudge = 0.0);
cplx log_sigma(cplx v, const QParams& p);

// Near w = q^{-k}: sigma(w) ~ rho_k / (1 - q^k w).
cplx sigma_pole_residue(int k, cplx q, double tol = 1e-17);

cplx kappa_const(const QParams& p);
cplx kappa_cg(cplx v1, cplx v2, const QParams& p);

cplx jfun(cplx s, cplx v, const QParams& p);
cplx efun(cplx s, cplx v, const QParams& p);

// (z; q)(q/z; q)
cplx theta_h(cplx z, const QParams& p);

}  // namespace fba::qspecial
