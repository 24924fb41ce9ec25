#include "fba/operators.hpp"

#include "fba/quadrature.hpp"

namespace fba::operators {

using qspecial::bracket;
using qspecial::efun;
using qspecial::jfun;
using qspecial::kappa_cg;
using qspecial::kappa_const;
using qspecial::sigma;

OperatorExpr OperatorExpr::identity(int n, const QParams& p) {
    OperatorExpr e(n, p);
    e.terms_.push_back({1.0, {}, std::vector<int>(static_cast<std::size_t>(n), 0)});
    return e;
}

OperatorExpr OperatorExpr::shift(int n, int site, int power, const QParams& p) {
    OperatorExpr e = identity(n, p);
    e.terms_[0].shifts.at(static_cast<std::size_t>(site)) = power;
    return e;
}

OperatorExpr OperatorExpr::atom(int n, const Atom& a, const QParams& p) {
    OperatorExpr e = identity(n, p);
    e.terms_[0].atoms.push_back(a);
    return e;
}

OperatorExpr OperatorExpr::operator*(const OperatorExpr& o) const {
    if (o.n_ != n_) throw DomainError("OperatorExpr: chain length mismatch");
    OperatorExpr r(n_, p_);
    r.terms_.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            ShiftTerm t;
            t.coeff = a.coeff * b.coeff;
            t.atoms = a.atoms;
            for (Atom at : b.atoms) {
                at.offset += a.shifts[static_cast<std::size_t>(at.site)];
                t.atoms.push_back(at);
            }
            t.shifts.resize(a.shifts.size());
            for (std::size_t k = 0; k < a.shifts.size(); ++k) t.shifts[k] = a.shifts[k] + b.shifts[k];
            r.terms_.push_back(std::move(t));
        }
    }
    return r;
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& o) const {
    if (o.n_ != n_) throw DomainError("OperatorExpr: chain length mismatch");
    OperatorExpr r = *this;
    r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
    return r;
}

OperatorExpr OperatorExpr::operator-(const OperatorExpr& o) const { return *this + o.scaled(-1.0); }

OperatorExpr OperatorExpr::scaled(cplx a) const {
    OperatorExpr r = *this;
    for (auto& t : r.terms_) t.coeff *= a;
    return r;
}

cplx OperatorExpr::coeff_value(const ShiftTerm& t, const Point& v) const {
    cplx c = t.coeff;
    for (const auto& a : t.atoms) {
        const cplx x = v[static_cast<std::size_t>(a.site)] * ipow(p_.q, a.offset);
        switch (a.kind) {
            case AtomKind::LamV: c *= bracket(a.lambda * x); break;
            case AtomKind::LamInvV: c *= bracket(a.lambda / x); break;
            case AtomKind::E: c *= efun(p_.s, x, p_); break;
        }
    }
    return c;
}

OpMatrix lax(cplx lambda, int site, int n, const QParams& p) {
    if (lambda == cplx{}) throw DomainError("lax: lambda = 0");
    if (site < 0 || site >= n) throw DomainError("lax: site out of range");
    OpMatrix L;
    L[0][0] = OperatorExpr::atom(n, {AtomKind::LamV, site, 0, lambda}, p);
    L[0][1] = OperatorExpr::shift(n, site, 1, p);
    L[1][0] = OperatorExpr::atom(n, {AtomKind::E, site, 0, lambda}, p) *
              OperatorExpr::shift(n, site, -1, p);
    L[1][1] = OperatorExpr::atom(n, {AtomKind::LamInvV, site, 0, lambda}, p);
    return L;
}

OpMatrix multiply(const OpMatrix& a, const OpMatrix& b) {
    OpMatrix r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

OpMatrix monodromy(int n, cplx lambda, const QParams& p) {
    if (n < 2) throw DomainError("monodromy: n must be >= 2");
    if (n > 6) throw SizeCapError("monodromy: n capped at 6");
    OpMatrix M = lax(lambda, 0, n, p);
    for (int k = 1; k < n; ++k) M = multiply(M, lax(lambda, k, n, p));
    return M;
}

namespace {

template <class Acc>
void for_each_term(const OperatorExpr& op, const Field& f, const Point& point, Acc acc) {
    if (static_cast<int>(point.size()) != op.chain_length())
        throw DomainError("apply: point dimension mismatch");
    const cplx q = op.params().q;
    Point shifted(point.size());
    for (const auto& t : op.terms()) {
        for (std::size_t k = 0; k < point.size(); ++k) shifted[k] = point[k] * ipow(q, t.shifts[k]);
        acc(op.coeff_value(t, point) * f(shifted));
    }
}

}  // namespace

cplx apply(const OperatorExpr& op, const Field& f, const Point& point) {
    cplx acc{};
    for_each_term(op, f, point, [&](cplx v) { acc += v; });
    return acc;
}

double apply_magnitude(const OperatorExpr& op, const Field& f, const Point& point) {
    double acc = 0.0;
    for_each_term(op, f, point, [&](cplx v) { acc += std::abs(v); });
    return acc;
}

EpsilonPair epsilon_seq(int n) {
    if (n < 2) throw DomainError("epsilon_seq: n must be >= 2");
    EpsilonPair e{1, 1};
    for (int k = 2; k < n; ++k) {
        const int sign = (k + 1) % 2 == 0 ? 1 : -1;
        e = {e.eps_prime, sign * e.eps};
    }
    return e;
}

cplx omega2(cplx x, cplx v1, cplx v2, const QParams& p) { return kappa_cg(x * v1, v2 / x, p); }

cplx omega3(cplx y1, cplx y2, const std::array<cplx, 3>& v, const QParams& p, int min_nodes,
            int m_charge) {
    const cplx Y = y1 * y2;
    const cplx V = v[0] * v[1] * v[2];
    // kappa(x v1, v2/x) kappa(Y v1 v2, x v3 / Y) J(s, x) sigma(y1/x) sigma(y2/x)
    const std::vector<quadrature::SigmaFactor> fac = {
        {v[0], 1, 1}, {v[1], -1, 1}, {v[2] / Y, 1, 1}, {V, 1, -1},
        {p.s, 1, 1},  {p.s, -1, -1}, {y1, -1, 1},      {y2, -1, 1}};
    const cplx pre = sigma(Y * v[0] * v[1], p) / (sigma(v[0] * v[1], p) * kappa_const(p));
    const cplx val = quadrature::separated_integral(fac, [](cplx) { return cplx{1.0, 0.0}; }, p, min_nodes);
    return pre * val * ipow(V, m_charge);
}

cplx omega3_rl(cplx y1, cplx y2, const std::array<cplx, 3>& v, const QParams& p, int min_nodes) {
    const cplx Y = y1 * y2;
    const cplx V = v[0] * v[1] * v[2];
    // kappa(Y v1 / x, v2 v3 / Y) kappa(x v2, v3 / x) sigma(s/x)/sigma(s x) sigma(x/y1) sigma(x/y2)
    const std::vector<quadrature::SigmaFactor> fac = {
        {Y * v[0], -1, 1}, {V, -1, -1},       {v[1], 1, 1},       {v[2], -1, 1},
        {p.s, -1, 1},      {p.s, 1, -1},      {1.0 / y1, 1, 1},   {1.0 / y2, 1, 1}};
    const cplx pre = sigma(v[1] * v[2] / Y, p) / (sigma(v[1] * v[2], p) * kappa_const(p)) *
                     jfun(p.s, y1, p) * jfun(p.s, y2, p);
    const cplx val = quadrature::separated_integral(fac, [](cplx) { return cplx{1.0, 0.0}; }, p, min_nodes);
    return pre * val;
}

}  // namespace fba::operators
