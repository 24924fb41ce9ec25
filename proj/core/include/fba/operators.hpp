#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fba/qspecial.hpp"

namespace fba::operators {

using qspecial::QParams;

using Point = std::vector<cplx>;
using Field = std::function<cplx(const Point&)>;

// Multiplicative factor evaluated at v_site * q^offset:
//   LamV -> [lambda v], LamInvV -> [lambda / v], E -> E(s, v).
enum class AtomKind { LamV, LamInvV, E };

struct Atom {
    AtomKind kind;
    int site;
    int offset;
    cplx lambda;
};

struct ShiftTerm {
    cplx coeff{1.0, 0.0};
    std::vector<Atom> atoms;
    std::vector<int> shifts;  // (u_k^{shift_k} psi)(v) = psi(.., q^{shift_k} v_k, ..)
};

class OperatorExpr {
public:
    OperatorExpr() = default;
    OperatorExpr(int n, const QParams& p) : n_(n), p_(p) {}

    static OperatorExpr identity(int n, const QParams& p);
    static OperatorExpr zero(int n, const QParams& p) { return OperatorExpr(n, p); }
    static OperatorExpr shift(int n, int site, int power, const QParams& p);
    static OperatorExpr atom(int n, const Atom& a, const QParams& p);

    int chain_length() const { return n_; }
    const std::vector<ShiftTerm>& terms() const { return terms_; }
    const QParams& params() const { return p_; }

    // Operator product (this acts after o).
    OperatorExpr operator*(const OperatorExpr& o) const;
    OperatorExpr operator+(const OperatorExpr& o) const;
    OperatorExpr operator-(const OperatorExpr& o) const;
    OperatorExpr scaled(cplx a) const;

    cplx coeff_value(const ShiftTerm& t, const Point& v) const;

private:
    int n_ = 0;
    QParams p_;
    std::vector<ShiftTerm> terms_;
};

using OpMatrix = std::array<std::array<OperatorExpr, 2>, 2>;

// Sites are 0-based.
OpMatrix lax(cplx lambda, int site, int n, const QParams& p);
OpMatrix multiply(const OpMatrix& a, const OpMatrix& b);
// L_0(lambda) L_1(lambda) ... L_{n-1}(lambda); 2 <= n <= 6.
OpMatrix monodromy(int n, cplx lambda, const QParams& p);

cplx apply(const OperatorExpr& op, const Field& f, const Point& point);
// Sum of the moduli of the individual terms of apply(); the scale for residuals.
double apply_magnitude(const OperatorExpr& op, const Field& f, const Point& point);

struct EpsilonPair {
    int eps = 1;
    int eps_prime = 1;
};
EpsilonPair epsilon_seq(int n);

// kappa(x v1, v2 / x)
cplx omega2(cplx x, cplx v1, cplx v2, const QParams& p);

// Single contour integral over the separating contour; `m_charge` multiplies by (v1 v2 v3)^m.
cplx omega3(cplx y1, cplx y2, const std::array<cplx, 3>& v, const QParams& p,
            int min_nodes = 512, int m_charge = 0);
// The same state written right to left (carries J(s,y1) J(s,y2)).
cplx omega3_rl(cplx y1, cplx y2, const std::array<cplx, 3>& v, const QParams& p,
               int min_nodes = 512);

}  // namespace fba::operators
