#pragma once

#include <functional>
#include <vector>

#include "fba/quadrature.hpp"

namespace fba::thermo {

using qspecial::QParams;

struct DensityModel {
    cplx s;
    cplx q;
    int M = 0;  // number of Fourier terms kept

    // Picks M so the geometric tail is below `tail`; throws TailError if it cannot.
    static DensityModel make(cplx s, cplx q, double tail = 1e-12);
    QParams params() const;
};

// (s^m + (-q/s)^m) / (1 + (-q)^m)
cplx density_coeff(int m, const DensityModel& dm);
cplx density_complex(cplx w, const DensityModel& dm);
// Real part of the series on |w| = 1; throws DomainError if the imaginary part exceeds 1e-12.
double density(cplx w, const DensityModel& dm);
// q -> 0 closed form 1 + s w/(1 - s w) + (s/w)/(1 - s/w).
double density_tropical(cplx w, cplx s);
// Constant Fourier mode of the series, by quadrature.
double density_constant_mode(const DensityModel& dm, int nodes = 1024);

// max over 16 points z on |z| = 1 of | log sigma(sz)/sigma(s/z) + <P(w) log sigma(w/z)/sigma(z/w)> |.
// P defaults to the series; any other P may be supplied.
double density_functional_residual(const DensityModel& dm, const quadrature::CircleContour& c,
                                   const std::function<cplx(cplx)>& P = {});

cplx partition_per_site(cplx z, const DensityModel& dm);
// -log sigma(sz) + <P(w) log sigma(z/w)> over |w| = 1. For |z| = 1 the factor (1 - z/w)^{-1}
// is integrated mode by mode; for |q| < |z| < 1 everything is done by quadrature.
cplx partition_integral(cplx z, const DensityModel& dm, int nodes = 1024);

// (q^2 x^2; q^2) / (q^2 x^-2; q^2) and its sigma form -x^{-1} sigma(1/x) / sigma(x).
cplx theta_ratio(cplx x, const QParams& p);
cplx theta_ratio_sigma_form(cplx x, const QParams& p);

struct EmpiricalDensity {
    std::vector<double> phi_mid;
    std::vector<double> value;
    double bandwidth = 0.0;
    // Periodic linear interpolation of the midpoint values, or von Mises smoothing if bandwidth > 0.
    double operator()(double phi) const;
};

EmpiricalDensity empirical_density(const std::vector<cplx>& roots, double bandwidth = 0.0);

}  // namespace fba::thermo
