#include "fba/laurent.hpp"

#include <algorithm>

namespace fba {

LaurentPoly::LaurentPoly(cplx constant) : lo_(0), c_{constant} {}

LaurentPoly::LaurentPoly(int low, std::vector<cplx> coeffs) : lo_(low), c_(std::move(coeffs)) {}

LaurentPoly LaurentPoly::monomial(cplx c, int k) { return LaurentPoly(k, {c}); }

LaurentPoly LaurentPoly::from_linear_factors(const std::vector<cplx>& r) {
    LaurentPoly p(1.0);
    for (cplx x : r) p = p * LaurentPoly(0, {1.0, x});
    return p;
}

cplx LaurentPoly::coeff(int k) const {
    if (c_.empty() || k < lo_ || k > high()) return {};
    return c_[static_cast<std::size_t>(k - lo_)];
}

void LaurentPoly::set(int k, cplx v) {
    if (c_.empty()) {
        lo_ = k;
        c_ = {v};
        return;
    }
    if (k < lo_) {
        c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - k), cplx{});
        lo_ = k;
    } else if (k > high()) {
        c_.resize(static_cast<std::size_t>(k - lo_ + 1), cplx{});
    }
    c_[static_cast<std::size_t>(k - lo_)] = v;
}

std::map<int, cplx> LaurentPoly::coeff_map() const {
    std::map<int, cplx> m;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != cplx{}) m[lo_ + static_cast<int>(i)] = c_[i];
    return m;
}

cplx LaurentPoly::operator()(cplx z) const {
    if (c_.empty()) return {};
    cplx acc{};
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
    return acc * ipow(z, lo_);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (int k = o.low(); !o.empty() && k <= o.high(); ++k) set(k, coeff(k) + o.coeff(k));
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (int k = o.low(); !o.empty() && k <= o.high(); ++k) set(k, coeff(k) - o.coeff(k));
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(cplx a) {
    for (auto& x : c_) x *= a;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return LaurentPoly(a.lo_ + b.lo_, std::move(out));
}

LaurentPoly LaurentPoly::pow(int e) const {
    if (e < 0) throw DomainError("LaurentPoly::pow: negative exponent");
    LaurentPoly r(1.0);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

LaurentPoly LaurentPoly::shifted(int k) const { return LaurentPoly(lo_ + k, c_); }

LaurentPoly LaurentPoly::scaled_arg(cplx a) const {
    LaurentPoly r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] *= ipow(a, lo_ + static_cast<int>(i));
    return r;
}

LaurentPoly LaurentPoly::inverted_arg() const {
    std::vector<cplx> rc(c_.rbegin(), c_.rend());
    return LaurentPoly(-high(), std::move(rc));
}

double LaurentPoly::max_abs() const {
    double m = 0.0;
    for (auto x : c_) m = std::max(m, std::abs(x));
    return m;
}

LaurentPoly LaurentPoly::trimmed(double tol) const {
    std::size_t b = 0, e = c_.size();
    while (b < e && std::abs(c_[b]) <= tol) ++b;
    while (e > b && std::abs(c_[e - 1]) <= tol) --e;
    if (b == e) return {};
    return LaurentPoly(lo_ + static_cast<int>(b),
                       std::vector<cplx>(c_.begin() + static_cast<long>(b), c_.begin() + static_cast<long>(e)));
}

double max_coeff_deviation(const LaurentPoly& a, const LaurentPoly& b) {
    int lo = 0, hi = -1;
    if (!a.empty()) { lo = a.low(); hi = a.high(); }
    if (!b.empty()) {
        lo = a.empty() ? b.low() : std::min(lo, b.low());
        hi = a.empty() ? b.high() : std::max(hi, b.high());
    }
    double d = 0.0;
    for (int k = lo; k <= hi; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
    return d;
}

}  // namespace fba
