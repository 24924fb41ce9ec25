#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fba {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error { public: using Error::Error; };
class PoleError : public Error { public: using Error::Error; };
class DivergenceError : public Error { public: using Error::Error; };
class ConstraintError : public Error { public: using Error::Error; };
class ContourInfeasible : public Error { public: using Error::Error; };
class NonFiniteSample : public Error { public: using Error::Error; };
class ConvergenceError : public Error { public: using Error::Error; };
class ZeroCollision : public Error { public: using Error::Error; };
class TailError : public Error { public: using Error::Error; };
class SizeCapError : public Error { public: using Error::Error; };

class HomotopyFailure : public Error {
public:
    HomotopyFailure(const std::string& what, cplx last_good_q)
        : Error(what), last_good_q_(last_good_q) {}
    cplx last_good_q() const noexcept { return last_good_q_; }

private:
    cplx last_good_q_;
};

// Integer power of a complex number, exact for small |k| (no log/exp round trip).
inline cplx ipow(cplx x, int k) {
    cplx r{1.0, 0.0};
    cplx b = k < 0 ? 1.0 / x : x;
    unsigned e = k < 0 ? static_cast<unsigned>(-k) : static_cast<unsigned>(k);
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace fba
