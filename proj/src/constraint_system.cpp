#include "sosround/constraint_system.hpp"

#include <algorithm>
#include <cmath>

#include "sosround/errors.hpp"

namespace sosround {

int ConstraintSystem::degree() const {
    int d = 0;
    for (const auto& p : equalities) d = std::max(d, p.degree());
    for (const auto& q : inequalities) d = std::max(d, q.degree());
    return d;
}

namespace {

// In-place Walsh-Hadamard transform: out[m] = sum_t (-1)^{|t & m|} in[t].
void hadamard(std::vector<double>& a) {
    for (std::size_t h = 1; h < a.size(); h <<= 1)
        for (std::size_t i = 0; i < a.size(); i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                double x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
}

// Deposit the low bits of `local` onto the positions listed in `vars`.
VarSet expand(std::uint64_t local, const std::vector<int>& vars) {
    VarSet s;
    for (std::size_t b = 0; b < vars.size(); ++b)
        if ((local >> b) & 1u) s = s.with(vars[b]);
    return s;
}

}  // namespace

SatisfactionReport satisfies(const PseudoExpectation& pe, const ConstraintSystem& sys, double tol) {
    if (sys.degree() > pe.degree())
        throw DegreeError("system degree " + std::to_string(sys.degree()) + " exceeds pseudo-expectation degree " +
                          std::to_string(pe.degree()));
    SatisfactionReport rep;
    const int d = pe.degree();

    for (std::size_t c = 0; c < sys.equalities.size(); ++c) {
        const auto& p = sys.equalities[c];
        if (p.is_zero()) continue;
        for (VarSet s : subsets_up_to(pe.n(), d - p.degree())) {
            double v = 0.0;
            for (const auto& [u, coef] : p.terms()) v += coef * pe[s ^ u];
            if (std::abs(v) > rep.max_eq_residual) {
                rep.max_eq_residual = std::abs(v);
                rep.worst_eq = static_cast<int>(c);
                rep.worst_eq_set = s;
            }
        }
    }

    std::vector<double> a;
    for (std::size_t c = 0; c < sys.inequalities.size(); ++c) {
        const auto& q = sys.inequalities[c];
        if (q.is_zero()) continue;
        for (VarSet s : subsets_up_to(pe.n(), d - q.degree())) {
            auto vars = s.indices();
            std::size_t m = std::size_t{1} << vars.size();
            a.assign(m, 0.0);
            for (std::size_t t = 0; t < m; ++t) {
                VarSet ts = expand(t, vars);
                double v = 0.0;
                for (const auto& [u, coef] : q.terms()) v += coef * pe[ts ^ u];
                a[t] = v;
            }
            hadamard(a);
            for (std::size_t neg = 0; neg < m; ++neg) {
                double viol = -a[neg];
                if (viol > rep.max_ineq_violation) {
                    rep.max_ineq_violation = viol;
                    rep.worst_ineq = static_cast<int>(c);
                    rep.worst_ineq_set = s;
                    rep.worst_ineq_negative = expand(neg, vars);
                }
            }
        }
    }
    rep.ok = rep.max_eq_residual <= tol && rep.max_ineq_violation <= tol;
    return rep;
}

}  // namespace sosround
