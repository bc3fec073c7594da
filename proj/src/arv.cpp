#include "sosround/arv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "sosround/errors.hpp"
#include "sosround/random.hpp"

namespace sosround {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd random_direction(Rng& rng, int dim) {
    Eigen::VectorXd g(dim);
    for (int k = 0; k < dim; ++k) g(k) = rng.normal();
    return g;
}

// Indices (into proj) of the k largest projections plus any tied with the k-th.
std::vector<int> top_k(const std::vector<double>& proj, int k) {
    std::vector<int> order(proj.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return proj[a] > proj[b]; });
    k = std::min<int>(k, static_cast<int>(order.size()));
    if (k == 0) return {};
    double scale = 1.0;
    for (double v : proj) scale = std::max(scale, std::abs(v));
    double boundary = proj[order[k - 1]];
    std::vector<int> out(order.begin(), order.begin() + k);
    for (std::size_t r = k; r < order.size() && proj[order[r]] >= boundary - 1e-9 * scale; ++r) out.push_back(order[r]);
    return out;
}

// Greedy maximal matching of close pairs (a in L, b in R, close(a, b)); both endpoints are removed.
void matching_delete(std::vector<int>& L, std::vector<int>& R, const std::function<bool(int, int)>& close) {
    std::vector<char> deadL(L.size(), 0), deadR(R.size(), 0);
    for (std::size_t a = 0; a < L.size(); ++a)
        for (std::size_t b = 0; b < R.size() && !deadL[a]; ++b)
            if (!deadR[b] && close(L[a], R[b])) {
                deadL[a] = 1;
                deadR[b] = 1;
            }
    std::vector<int> l2, r2;
    for (std::size_t a = 0; a < L.size(); ++a)
        if (!deadL[a]) l2.push_back(L[a]);
    for (std::size_t b = 0; b < R.size(); ++b)
        if (!deadR[b]) r2.push_back(R[b]);
    L.swap(l2);
    R.swap(r2);
}

int side_size(double min_frac, int m) { return static_cast<int>(std::ceil(2.0 * min_frac * m)); }

double min_side(double min_frac, int m) { return min_frac * m; }

}  // namespace

void ArvParams::validate() const {
    if (!(delta_target > 0.0 && delta_target <= 4.0)) throw std::invalid_argument("ArvParams: delta_target must lie in (0, 4]");
    if (!(min_frac > 0.0 && min_frac < 0.5)) throw std::invalid_argument("ArvParams: min_frac must lie in (0, 0.5)");
    if (max_retries < 1 || directions_per_level < 1) throw std::invalid_argument("ArvParams: retry counts must be positive");
    if (!(c_shrink > 0.0 && c_shrink < 1.0)) throw std::invalid_argument("ArvParams: c_shrink must lie in (0, 1)");
}

double arv_delta_target(int m, double c_delta) { return c_delta / std::sqrt(std::log2(std::max(1, m)) + 2.0); }

double measured_separation(const MetricView& view, const std::vector<int>& T, const std::vector<int>& Tp) {
    return set_distance(view, T, Tp);
}

double measured_antipodal_separation(const MetricView& view, const std::vector<int>& T, const std::vector<int>& Tp) {
    double best = set_distance(view, T, Tp);
    auto within = [&](const std::vector<int>& s) {
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) best = std::min(best, view.signed_dist(s[a], -s[b]));
    };
    within(T);
    within(Tp);
    return best;
}

SeparatedSets separated_sets(const MetricView& view, const std::vector<int>& candidates, const ArvParams& p) {
    p.validate();
    const int m = static_cast<int>(candidates.size());
    if (m < 4) throw ArvError("separated_sets: need at least 4 candidates, got " + std::to_string(m));
    Eigen::MatrixXd gv = gram_vectors(view.pe());
    const int k = side_size(p.min_frac, m);
    double delta = p.delta_target;
    for (int attempt = 0; attempt < p.max_retries; ++attempt) {
        if (attempt > 0 && attempt % p.directions_per_level == 0) delta *= 0.5;
        Rng rng(p.seed + attempt);
        Eigen::VectorXd g = random_direction(rng, static_cast<int>(gv.cols()));
        std::vector<double> proj(m), neg(m);
        for (int a = 0; a < m; ++a) {
            proj[a] = gv.row(candidates[a]).dot(g);
            neg[a] = -proj[a];
        }
        std::vector<int> L, R;
        for (int a : top_k(proj, k)) L.push_back(candidates[a]);
        for (int a : top_k(neg, k)) R.push_back(candidates[a]);
        matching_delete(L, R, [&](int x, int y) { return view.dist(x, y) < delta; });
        if (L.size() < min_side(p.min_frac, m) || R.size() < min_side(p.min_frac, m) || L.empty() || R.empty()) continue;
        SeparatedSets out;
        std::sort(L.begin(), L.end());
        std::sort(R.begin(), R.end());
        out.T = std::move(L);
        out.Tp = std::move(R);
        out.achieved_delta = measured_separation(view, out.T, out.Tp);
        out.retries_used = attempt;
        return out;
    }
    throw ArvError("separated_sets: no separated pair of sides after " + std::to_string(p.max_retries) + " attempts");
}

SeparatedSets separated_sets_antipodal(const PseudoExpectation& pe, const std::vector<int>& candidates,
                                       const ArvParams& p) {
    p.validate();
    const int m = static_cast<int>(candidates.size());
    if (m < 4) throw ArvError("separated_sets_antipodal: need at least 4 candidates, got " + std::to_string(m));
    MetricView view(pe);
    Eigen::MatrixXd gv = gram_vectors(pe);
    // Doubled point set: signed vertices ±i with vectors ±v_i.
    std::vector<int> pts;
    for (int i : candidates) {
        pts.push_back(i);
        pts.push_back(-i);
    }
    const int k = side_size(p.min_frac, static_cast<int>(pts.size()));
    double delta = p.delta_target;
    for (int attempt = 0; attempt < p.max_retries; ++attempt) {
        if (attempt > 0 && attempt % p.directions_per_level == 0) delta *= 0.5;
        Rng rng(p.seed + attempt);
        Eigen::VectorXd g = random_direction(rng, static_cast<int>(gv.cols()));
        std::vector<double> proj(pts.size());
        for (std::size_t a = 0; a < pts.size(); ++a) {
            int x = pts[a];
            proj[a] = (x > 0 ? 1.0 : -1.0) * gv.row(std::abs(x)).dot(g);
        }
        std::vector<int> L;
        for (int a : top_k(proj, k)) L.push_back(pts[a]);
        // R = -L; a close pair (x, -y) removes both x and y from L.
        std::vector<int> R;
        for (int x : L) R.push_back(-x);
        matching_delete(L, R, [&](int x, int ny) { return view.signed_dist(x, ny) < delta; });
        // Keep only points whose partner survived on the other side, preserving the pairing.
        std::vector<int> keep;
        for (int x : L)
            if (std::find(R.begin(), R.end(), -x) != R.end()) keep.push_back(x);
        SeparatedSets out;
        for (int x : keep) (x > 0 ? out.T : out.Tp).push_back(std::abs(x));
        if (out.T.size() + out.Tp.size() < min_side(p.min_frac, m) * 2 || keep.empty()) continue;
        std::sort(out.T.begin(), out.T.end());
        std::sort(out.Tp.begin(), out.Tp.end());
        out.achieved_delta = measured_antipodal_separation(view, out.T, out.Tp);
        if (!(out.achieved_delta >= delta)) continue;
        out.retries_used = attempt;
        return out;
    }
    throw ArvError("separated_sets_antipodal: no separated sides after " + std::to_string(p.max_retries) + " attempts");
}

DirectedSeparation separated_sets_directed(const DirectedMetricView& view, const SymmetricDigraph& g,
                                           const std::vector<int>& m_set, const ArvParams& p) {
    p.validate();
    const double vol_m = volume(view, g, m_set);
    if (!(vol_m > 0.0)) throw ArvError("separated_sets_directed: the point set has zero volume");
    Eigen::MatrixXd gv = gram_vectors(view.pe());
    const int m = static_cast<int>(m_set.size());
    const int k0 = std::max(1, side_size(p.min_frac, m));
    double delta = p.delta_target;
    for (int attempt = 0; attempt < p.max_retries; ++attempt) {
        if (attempt > 0 && attempt % p.directions_per_level == 0) delta *= 0.5;
        Rng rng(p.seed + attempt);
        Eigen::VectorXd dir = random_direction(rng, static_cast<int>(gv.cols()));
        std::vector<double> proj(m);
        for (int a = 0; a < m; ++a) {
            int x = m_set[a];
            proj[a] = (x > 0 ? 1.0 : -1.0) * gv.row(std::abs(x)).dot(dir);
        }
        std::optional<DirectedSeparation> best;
        for (int k = k0; k <= std::max(k0, m / 2); ++k) {
            std::vector<int> S;
            for (int a : top_k(proj, k)) S.push_back(m_set[a]);
            std::vector<int> negS;
            for (int x : S) negS.push_back(-x);
            matching_delete(S, negS, [&](int x, int y) { return view.ddir(x, y) < delta; });
            std::vector<int> keep;
            for (int x : S)
                if (std::find(negS.begin(), negS.end(), -x) != negS.end()) keep.push_back(x);
            if (keep.empty()) continue;
            std::vector<char> used(2 * view.n() + 1, 0);
            for (int x : keep) used[x + view.n()] = used[-x + view.n()] = 1;
            std::vector<int> rest;
            for (int x : m_set)
                if (!used[x + view.n()]) rest.push_back(x);
            double ratio = volume(view, g, rest) / vol_m;
            if (ratio > 1.0 - p.c_shrink) continue;
            std::vector<int> neg;
            for (int x : keep) neg.push_back(-x);
            double sep = view.ddir_sets(keep, neg);
            if (!(sep >= delta)) continue;
            if (!best || ratio < best->vol_ratio) {
                std::sort(keep.begin(), keep.end());
                best = DirectedSeparation{keep, sep, ratio, attempt};
            }
        }
        if (best) return *best;
    }
    throw ArvError("separated_sets_directed: volume target not met after " + std::to_string(p.max_retries) + " attempts");
}

}  // namespace sosround
