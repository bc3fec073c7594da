#include "sosround/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sosround/errors.hpp"

namespace sosround {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_degree2(const PseudoExpectation& pe) {
    if (pe.degree() < 2 && !pe.complete()) throw DegreeError("metric views need a degree >= 2 pseudo-expectation");
}

}  // namespace

MetricView::MetricView(const PseudoExpectation& pe) : pe_(&pe) { require_degree2(pe); }

double MetricView::dist(int i, int j) const {
    if (i == j) return 0.0;
    if (i == 0) return 2.0 - 2.0 * pe_->mean(j);
    if (j == 0) return 2.0 - 2.0 * pe_->mean(i);
    return 2.0 - 2.0 * pe_->pair(i, j);
}

double MetricView::signed_dist(int x, int y) const {
    if (x == y) return 0.0;
    int s = (x > 0) == (y > 0) ? 1 : -1;
    return 2.0 - 2.0 * s * pe_->pair(std::abs(x), std::abs(y));
}

std::vector<int> MetricView::vertices() const {
    std::vector<int> v(n());
    for (int i = 0; i < n(); ++i) v[i] = i + 1;
    return v;
}

DirectedMetricView::DirectedMetricView(const PseudoExpectation& pe) : pe_(&pe) { require_degree2(pe); }

double DirectedMetricView::raw(int x, int y) const {
    if (x == y) return 0.0;
    double sx = x > 0 ? 1.0 : -1.0, sy = y > 0 ? 1.0 : -1.0;
    int i = std::abs(x), j = std::abs(y);
    return 1.0 + sx * pe_->mean(i) - sy * pe_->mean(j) - sx * sy * pe_->pair(i, j);
}

double DirectedMetricView::ddir(int x, int y) const { return std::max(0.0, raw(x, y)); }

double DirectedMetricView::ddir_to(int x, const std::vector<int>& s) const {
    double best = kInf;
    for (int y : s) best = std::min(best, ddir(x, y));
    return best;
}

double DirectedMetricView::ddir_from(const std::vector<int>& s, int y) const {
    double best = kInf;
    for (int x : s) best = std::min(best, ddir(x, y));
    return best;
}

double DirectedMetricView::ddir_sets(const std::vector<int>& s, const std::vector<int>& t) const {
    double best = kInf;
    for (int x : s) best = std::min(best, ddir_to(x, t));
    return best;
}

std::vector<int> DirectedMetricView::points() const {
    std::vector<int> p;
    for (int i = n(); i >= 1; --i) p.push_back(-i);
    for (int i = 1; i <= n(); ++i) p.push_back(i);
    return p;
}

ClampStats directed_clamp_stats(const DirectedMetricView& view) {
    ClampStats st;
    auto pts = view.points();
    for (int x : pts)
        for (int y : pts) {
            if (x == y) continue;
            ++st.pairs;
            double r = view.raw(x, y);
            if (r < 0.0) ++st.clamped;
            st.min_raw = std::min(st.min_raw, r);
        }
    return st;
}

std::vector<int> ball(const MetricView& view, int x, double rad, const std::vector<int>& points) {
    std::vector<int> out;
    for (int y : points)
        if (view.dist(x, y) < rad) out.push_back(y);
    return out;
}

std::vector<int> ball(const MetricView& view, int x, double rad) { return ball(view, x, rad, view.vertices()); }

HollownessProfile hollowness_profile(const MetricView& view, double rad) {
    HollownessProfile hp;
    hp.ball_sizes.assign(view.n() + 1, 0);
    auto pts = view.vertices();
    for (int x : pts) {
        hp.ball_sizes[x] = static_cast<int>(ball(view, x, rad, pts).size());
        hp.max_size = std::max(hp.max_size, hp.ball_sizes[x]);
    }
    return hp;
}

double spread(const MetricView& view, const std::vector<int>& subset) {
    double s = 0.0;
    for (int x : subset)
        for (int y : subset) s += view.dist(x, y);
    return s;
}

double set_distance(const MetricView& view, const std::vector<int>& a, const std::vector<int>& b) {
    double best = kInf;
    for (int x : a)
        for (int y : b) best = std::min(best, view.dist(x, y));
    return best;
}

double volume(const DirectedMetricView& view, const SymmetricDigraph& g, const std::vector<int>& m_set) {
    std::vector<char> in(2 * view.n() + 1, 0);
    auto slot = [&](int x) { return x + view.n(); };
    for (int x : m_set) in[slot(x)] = 1;
    for (int x : m_set)
        if (!in[slot(-x)]) throw std::invalid_argument("volume: point set is not symmetric");
    double v = 0.0;
    for (auto [x, y] : g.arcs)
        if (in[slot(x)] && in[slot(y)]) v += view.ddir(x, y);
    return v;
}

double check_negative_type(const MetricView& view, double psd_tol) {
    Eigen::MatrixXd g = gram_vectors(view.pe(), psd_tol);
    double worst = 0.0;
    for (int a = 0; a <= view.n(); ++a)
        for (int b = a + 1; b <= view.n(); ++b)
            worst = std::max(worst, std::abs((g.row(a) - g.row(b)).squaredNorm() - view.dist(a, b)));
    return worst;
}

double max_triangle_violation(const MetricView& view, TriangleFamily family) {
    std::vector<int> pts;
    if (family == TriangleFamily::Anchored) pts.push_back(0);
    for (int i = 1; i <= view.n(); ++i) {
        pts.push_back(i);
        if (family == TriangleFamily::Antipodal) pts.push_back(-i);
    }
    const std::size_t m = pts.size();
    std::vector<double> d(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            d[a * m + b] = family == TriangleFamily::Antipodal ? view.signed_dist(pts[a], pts[b]) : view.dist(pts[a], pts[b]);
    double worst = 0.0;
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
            for (std::size_t z = 0; z < m; ++z) worst = std::max(worst, d[x * m + z] - d[x * m + y] - d[y * m + z]);
    return worst;
}

std::string distance_csv(const MetricView& view) {
    std::ostringstream os;
    os.precision(12);
    os << "point";
    for (int b = 0; b <= view.n(); ++b) os << ',' << (b == 0 ? std::string("anchor") : std::to_string(b));
    os << '\n';
    for (int a = 0; a <= view.n(); ++a) {
        os << (a == 0 ? std::string("anchor") : std::to_string(a));
        for (int b = 0; b <= view.n(); ++b) os << ',' << view.dist(a, b);
        os << '\n';
    }
    return os.str();
}

}  // namespace sosround
