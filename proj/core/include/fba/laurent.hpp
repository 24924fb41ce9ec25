#pragma once

#include <map>
#include <vector>

#include "fba/common.hpp"

namespace fba {

// Finite Laurent polynomial sum_k c_k z^k, dense between low() and high().
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(cplx constant);  // NOLINT(google-explicit-constructor)
    LaurentPoly(int low, std::vector<cplx> coeffs);

    static LaurentPoly monomial(cplx c, int k);
    // prod_j (1 + r_j z)
    static LaurentPoly from_linear_factors(const std::vector<cplx>& r);

    bool empty() const { return c_.empty(); }
    int low() const { return lo_; }
    int high() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    cplx coeff(int k) const;
    void set(int k, cplx v);
    std::map<int, cplx> coeff_map() const;

    cplx operator()(cplx z) const;

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(cplx a);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
    friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }

    LaurentPoly pow(int e) const;
    LaurentPoly shifted(int k) const;  // z^k * this
    LaurentPoly scaled_arg(cplx a) const;  // p(a z)
    LaurentPoly inverted_arg() const;  // p(1/z)

    double max_abs() const;
    // Drops edge coefficients with modulus <= tol.
    LaurentPoly trimmed(double tol = 0.0) const;

private:
    int lo_ = 0;
    std::vector<cplx> c_;
};

// max_k |a_k - b_k|
double max_coeff_deviation(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace fba
