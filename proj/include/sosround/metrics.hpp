#pragma once

#include <string>
#include <vector>

#include "sosround/instances.hpp"
#include "sosround/pseudo_expectation.hpp"

namespace sosround {

// d(i, j) = pE[(X_i - X_j)^2] on points 1..n; point 0 is the anchor ∅ with d(i, ∅) = pE[(X_i - 1)^2].
class MetricView {
public:
    explicit MetricView(const PseudoExpectation& pe);
    explicit MetricView(PseudoExpectation&&) = delete;  // the view keeps a pointer

    int n() const { return pe_->n(); }
    const PseudoExpectation& pe() const { return *pe_; }
    double dist(int i, int j) const;
    // Antipodal distance on signed points: pE[(val_x - val_y)^2] with val_{-i} = -X_i.
    double signed_dist(int x, int y) const;
    // Point 0 excluded.
    std::vector<int> vertices() const;

private:
    const PseudoExpectation* pe_;
};

// d^dir(x, y) = pE[(1 + val_x)(1 - val_y)] on signed points in [-n] ∪ [n], clamped at 0.
class DirectedMetricView {
public:
    explicit DirectedMetricView(const PseudoExpectation& pe);
    explicit DirectedMetricView(PseudoExpectation&&) = delete;

    int n() const { return pe_->n(); }
    const PseudoExpectation& pe() const { return *pe_; }
    double raw(int x, int y) const;
    double ddir(int x, int y) const;
    // d(x, S) = min over y in S; infinity for empty S.
    double ddir_to(int x, const std::vector<int>& s) const;
    double ddir_from(const std::vector<int>& s, int y) const;
    double ddir_sets(const std::vector<int>& s, const std::vector<int>& t) const;
    std::vector<int> points() const;  // -n..-1, 1..n

private:
    const PseudoExpectation* pe_;
};

struct ClampStats {
    long pairs = 0;
    long clamped = 0;     // raw value below 0
    double min_raw = 0.0;
    double fraction() const { return pairs ? static_cast<double>(clamped) / pairs : 0.0; }
};
// Over all ordered pairs of [-n] ∪ [n]; raw values in [-tol, 0) count as clamped, below -tol as well.
ClampStats directed_clamp_stats(const DirectedMetricView& view);

// Open ball {y in points : d(x, y) < rad}.
std::vector<int> ball(const MetricView& view, int x, double rad, const std::vector<int>& points);
std::vector<int> ball(const MetricView& view, int x, double rad);  // points = vertices

struct HollownessProfile {
    std::vector<int> ball_sizes;  // per vertex 1..n (index 0 unused)
    int max_size = 0;
};
HollownessProfile hollowness_profile(const MetricView& view, double rad);

// Sum over ordered pairs x, y in subset of d(x, y).
double spread(const MetricView& view, const std::vector<int>& subset);

// min over x in a, y in b of d(x, y); infinity when either is empty.
double set_distance(const MetricView& view, const std::vector<int>& a, const std::vector<int>& b);

// Sum of d^dir(x, y) over arcs with both endpoints in m_set. Throws std::invalid_argument if m_set
// is not closed under negation.
double volume(const DirectedMetricView& view, const SymmetricDigraph& g, const std::vector<int>& m_set);

// max |‖v_a - v_b‖^2 - d(a, b)| over points 0..n using Gram vectors.
double check_negative_type(const MetricView& view, double psd_tol = kPsdTol);

enum class TriangleFamily {
    Plain,      // points 1..n
    Anchored,   // points 0..n (anchor ∅ included)
    Antipodal,  // signed points ±1..±n under signed_dist
};
// max over triples of d(x, z) - d(x, y) - d(y, z), clipped at 0.
double max_triangle_violation(const MetricView& view, TriangleFamily family);

// Full distance matrix over points 0..n as CSV.
std::string distance_csv(const MetricView& view);

}  // namespace sosround
