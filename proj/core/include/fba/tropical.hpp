#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fba/laurent.hpp"

namespace fba::tropical {

enum class Sector { UnitaryV, DualQ };

// Value q^{q_half/2} z^{z_half/2} poly(z). The q power is metadata only: seeds live at order q^0.
struct ScaledPoly {
    LaurentPoly poly;
    int q_half = 0;
    int z_half = 0;
};

struct SeedState {
    int n = 0;
    int m = 0;
    Sector sector = Sector::UnitaryV;
    cplx s;
    cplx v{1.0, 0.0};
    ScaledPoly H0;
    ScaledPoly H0_down;  // H0(z/q)
    ScaledPoly H0_up;    // H0(q z)
    cplx K;
    cplx Kprime;
    cplx k_branch{1.0, 0.0};
    std::vector<int> subset;
    ScaledPoly T0;
    cplx W0;            // value of q^{-W0_q_half/2} W0
    int W0_q_half = 0;
    bool has_W0 = false;
    std::vector<cplx> roots;  // one-particle seeds
    cplx C;                   // one-particle connection constant
    cplx chain_lhs, chain_rhs;  // even seeds: the two product forms of q^m W0 (1 - k^n s^n)
};

SeedState ground_seed(int n, cplx v, cplx s);

// H0(z/q^k) and H0(q^k z) of a ground seed (k >= 1); q_half = -n k (k-1).
std::pair<ScaledPoly, ScaledPoly> perimeter_coeffs(int k, const SeedState& seed);

cplx one_particle_C(int n, cplx s, int j);
// z (z - s)^n + C (1 - s z)^n
LaurentPoly one_particle_P(int n, cplx s, cplx C);
SeedState one_particle_seed(int n, cplx s, int j);

enum class Branch { One, OmegaHalf };
cplx branch_value(int n, Branch b);
SeedState even_seed(int n, int m, cplx s, std::vector<int> subset, Branch branch);

struct SeedReport {
    double baxter_dev = 0.0;
    std::optional<double> wronskian_dev;  // empty when not applicable
    double gluing_dev = 0.0;
    double transfer_shape_dev = 0.0;  // parity + pinned edges of T0
    double chain_dev = 0.0;
    bool pass = false;
    std::string note;
};

// Coefficientwise checks, deviations scaled by max(1, largest coefficient).
SeedReport verify_seed(const SeedState& seed, double tol = 1e-12);

}  // namespace fba::tropical
