#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fba/qspecial.hpp"

namespace fba::quadrature {

using qspecial::QParams;

struct CircleContour {
    double radius = 1.0;  // <= 0 selects the geometric mean of the admissible annulus
    int nodes = 512;
};

struct Annulus {
    double lo = 0.0;
    double hi = 0.0;
    bool feasible() const { return lo < hi; }
    double mid() const;
    bool contains(double r) const { return lo < r && r < hi; }
};

// Mean of f over `nodes` equispaced points of the circle, i.e. (1/2 pi i) \oint f(v) dv/v.
// Pairwise summation in a fixed order.
cplx circle_integral(const std::function<cplx(cplx)>& f, const CircleContour& c);

// A factor sigma(c * x^e)^power with e, power in {+1, -1}.
struct SigmaFactor {
    cplx c;
    int e = 1;
    int power = 1;
};

struct SeparatedReport {
    double radius = 0.0;
    int nodes = 0;
    int residues = 0;
    double log_gap = 0.0;
};

// (1/2 pi i) \oint dx/x pref(x) prod sigma(c x^e)^power over the contour that keeps the
// poles of every sigma(c x) outside and those of every sigma(c/x) inside (after writing
// 1/sigma(w) = sigma(-q/w)). Realized as a circle plus residues of misplaced simple poles.
// `pref` must be analytic on C \ {0}.
cplx separated_integral(const std::vector<SigmaFactor>& factors,
                        const std::function<cplx(cplx)>& pref, const QParams& p,
                        int min_nodes = 512, SeparatedReport* report = nullptr);

struct PentagonResult {
    cplx lhs;
    cplx rhs;
    double relerr = 0.0;
};

Annulus pentagon_annulus(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b,
                         const QParams& p);
PentagonResult pentagon_check(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b,
                              const QParams& p, const CircleContour& c);

// When this annulus is empty the check falls back to separated_integral.
Annulus sixj_annulus(cplx v1, cplx v2, cplx v3, cplx x, cplx y, const QParams& p);
double sixj_check(cplx v1, cplx v2, cplx v3, cplx x, cplx y, const QParams& p,
                  const CircleContour& c);

struct InversionResult {
    cplx pairing;
    cplx expected;
    double relerr = 0.0;
    bool resolution_warning = false;  // nodes < 4|m|
};

// Pairs the double kernel against x''^m over the unit circle; the exact answer is kappa_s x^m.
// y is the (unimodular) kernel parameter.
InversionResult inversion_check(cplx x, cplx y, int mode_m, const QParams& p,
                                const CircleContour& c);

}  // namespace fba::quadrature
