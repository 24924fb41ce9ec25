#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fba/qspecial.hpp"

namespace fba::baxterflow {

using qspecial::QParams;

// T(z) = sum_j t_j z^j over j = -n, -n+2, ..., n.
struct TransferPoly {
    int n = 2;
    int m_charge = 0;
    cplx v_total{1.0, 0.0};
    std::vector<cplx> coeffs;  // coeffs[i] = t_{-n+2i}, i = 0..n

    TransferPoly() = default;
    TransferPoly(int n, int m, cplx v);  // edges pinned, interior zero

    cplx t(int j) const;
    void set_t(int j, cplx value);
    cplx operator()(cplx z) const;
    // Indices j of the n-1 free interior coefficients.
    std::vector<int> interior() const;
    // max(|t_n - (v+1/v)|, |t_{-n} - (-1)^n (v+1/v)|)
    double edge_deviation() const;
};

// Ground state at q = 0 for v = 1.
std::vector<cplx> tropical_roots(int n, cplx s);
TransferPoly tropical_transfer(int n, cplx s);

// Depth used when K <= 0: enough that |q^K z|^2 < trunc_tol.
int default_depth(cplx z, const QParams& p, int K);

// Returns (chi+(z), chi+(z/q)).
std::pair<cplx, cplx> chi_plus_pair(cplx z, const TransferPoly& T, const QParams& p, int K = 0);
// Returns (chi-(z), chi-(q z)).
std::pair<cplx, cplx> chi_minus_pair(cplx z, const TransferPoly& T, const QParams& p, int K = 0);
cplx chi_plus_eval(cplx z, const TransferPoly& T, const QParams& p, int K = 0);
cplx chi_minus_eval(cplx z, const TransferPoly& T, const QParams& p, int K = 0);

// Taylor coefficients of chi+ in z^2 (k = 0..kmax) from the coefficient recursion.
std::vector<cplx> chi_plus_series(const TransferPoly& T, const QParams& p, int kmax);

struct HolomorphicPair {
    TransferPoly T;
    QParams p;
    int K = 0;

    cplx chi_plus(cplx z) const { return chi_plus_eval(z, T, p, K); }
    cplx chi_minus(cplx z) const { return chi_minus_eval(z, T, p, K); }
    // |chi(K) - chi(K+8)| at z, both halves.
    double truncation_gap(cplx z) const;
};

cplx wronskian_chi(cplx z, const HolomorphicPair& hp);
cplx c_ratio(cplx z, const HolomorphicPair& hp);

// Representative modulus in (|q|^{1/2}, |q|^{-1/2}].
cplx fundamental_rep(cplx w, cplx q);

std::vector<cplx> find_wronskian_zeros(const HolomorphicPair& hp, const std::vector<cplx>& seeds);

struct BetheEval {
    std::vector<cplx> residuals;  // C(w_j)/C(w_n) - 1
    std::vector<cplx> roots;
    std::vector<cplx> c_values;
};

BetheEval bethe_evaluate(const TransferPoly& T, const QParams& p, const std::vector<cplx>& seeds,
                         int K = 0);
std::vector<double> bethe_residual(const TransferPoly& T, const QParams& p, int K = 0,
                                   const std::vector<cplx>& seeds = {});

struct Certificates {
    double baxter_grid_residual = -1.0;
    std::vector<double> pole_residuals;
    double wronskian_scatter = -1.0;
};

struct BetheSolution {
    QParams p;
    TransferPoly T;
    std::vector<cplx> w;
    cplx C;
    std::vector<double> residuals;
    cplx wronskian_const;
    Certificates certificates;
    int newton_iterations = 0;
};

struct SolveOptions {
    int q_steps = 12;
    double q_start = 1e-6;
    double tol = 1e-12;
    int max_iter = 50;
    double fd_step = 1e-7;
    int K = 0;
};

// Certificates are filled on return.
BetheSolution solve_ground(int n, const QParams& p, const SolveOptions& opt = {});

struct EntireH {
    std::function<cplx(cplx)> H;
    std::function<cplx(cplx)> H_plus;
    std::function<cplx(cplx)> H_minus;
    std::vector<double> pole_residuals;
};

EntireH build_H(const BetheSolution& sol, const QParams& p);

// Relative residual of the TH equation for F on 64 points of |z| = radius.
double baxter_grid_residual(const std::function<cplx(cplx)>& F, const TransferPoly& T,
                            const QParams& p, double radius = 0.9, int points = 64);

struct WronskianFit {
    cplx W;
    double scatter = 0.0;
};

WronskianFit wronskian_q_check(const std::function<cplx(cplx)>& H, const QParams& p, int n,
                               int points = 32);
WronskianFit wronskian_q_check(const BetheSolution& sol, const QParams& p);

// Fills sol.certificates and sol.wronskian_const.
void certify(BetheSolution& sol);

}  // namespace fba::baxterflow
