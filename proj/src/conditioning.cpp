#include "sosround/conditioning.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sosround/errors.hpp"

namespace sosround {

void HollowParams::validate() const {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("HollowParams: tau must lie in (0, 1)");
    if (!(tau * tau < gamma && gamma < 1.0)) throw std::invalid_argument("HollowParams: need tau^2 < gamma < 1");
    if (ell < 1) throw std::invalid_argument("HollowParams: ell must be >= 1");
}

double HollowParams::threshold(int n) const {
    double g = gamma - tau * tau;
    return n / (ell * g * g);
}

double potential(const PseudoExpectation& pe) {
    double s = 0.0;
    for (int i = 1; i <= pe.n(); ++i) s += pe.mean(i) * pe.mean(i);
    return s;
}

std::vector<int> undecided(const PseudoExpectation& pe, double tau) {
    std::vector<int> v;
    for (int i = 1; i <= pe.n(); ++i)
        if (std::abs(pe.mean(i)) < tau) v.push_back(i);
    return v;
}

namespace {

int far_count_in(const PseudoExpectation& pe, int i, const std::vector<int>& v, double gamma) {
    int c = 0;
    for (int j : v)
        if (std::abs(pe.pair(i, j)) > gamma) ++c;
    return c;
}

}  // namespace

int far_count(const PseudoExpectation& pe, int i, double tau, double gamma) {
    return far_count_in(pe, i, undecided(pe, tau), gamma);
}

std::pair<double, double> step_gain_identity(const PseudoExpectation& pe, int i, int j, double cond_tol) {
    double mi = pe.mean(i), mj = pe.mean(j);
    if (1.0 - std::abs(mi) <= cond_tol) throw ConditioningError("step_gain_identity: X_" + std::to_string(i) + " is deterministic");
    auto minus = condition(pe, i, -1, cond_tol);
    auto plus = condition(pe, i, +1, cond_tol);
    double a = minus.mean(j), b = plus.mean(j);
    double lhs = 0.5 * (1.0 - mi) * a * a + 0.5 * (1.0 + mi) * b * b - mj * mj;
    double cov = pe.pair(i, j) - mi * mj;
    double rhs = cov * cov / (1.0 - mi * mi);
    return {lhs, rhs};
}

std::optional<int> find_bad_vertex(const PseudoExpectation& pe, const HollowParams& p, double threshold) {
    auto v = undecided(pe, p.tau);
    std::optional<int> best;
    int best_count = 0;
    for (int i : v) {
        int c = far_count_in(pe, i, v, p.gamma);
        if (c > threshold && (!best || c > best_count)) {
            best = i;
            best_count = c;
        }
    }
    return best;
}

std::pair<PseudoExpectation, ConditioningTrace> hollowize(const PseudoExpectation& pe, const HollowParams& p,
                                                          double cond_tol) {
    p.validate();
    if (!pe.complete() && p.ell >= pe.degree())
        throw std::invalid_argument("hollowize: ell must be below the degree " + std::to_string(pe.degree()));
    const double threshold = p.threshold(pe.n());
    ConditioningTrace trace;
    PseudoExpectation cur = pe;
    while (auto bad = find_bad_vertex(cur, p, threshold)) {
        if (static_cast<int>(trace.steps.size()) == p.ell)
            throw NullStepError("hollowize: budget of " + std::to_string(p.ell) + " steps exhausted with bad vertex X_" +
                                std::to_string(*bad));
        const int i = *bad;
        ConditioningStep step;
        step.var = i;
        step.bad_count = far_count(cur, i, p.tau, p.gamma);
        step.potential_before = potential(cur);
        std::optional<PseudoExpectation> best;
        for (int b : {+1, -1}) {
            if (1.0 + b * cur.mean(i) <= cond_tol) continue;
            auto next = condition(cur, i, b, cond_tol);
            double phi = potential(next);
            if (!best || phi > step.potential_after) {
                step.sign = b;
                step.potential_after = phi;
                best = std::move(next);
            }
        }
        cur = std::move(*best);
        trace.steps.push_back(step);
    }
    trace.final_degree = cur.degree();
    return {std::move(cur), std::move(trace)};
}

}  // namespace sosround
