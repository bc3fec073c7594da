#include "sosround/pseudo_expectation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sosround/errors.hpp"

namespace sosround {

PseudoExpectation::PseudoExpectation(int n, int d) : n_(n), d_(d), index_(MomentIndex::get(n, d)) {
    if (d < 0) throw DegreeError("negative degree");
    values_.assign(index_->size(), 0.0);
    values_[0] = 1.0;
}

PseudoExpectation::PseudoExpectation(int n, int d, std::vector<double> values)
    : n_(n), d_(d), index_(MomentIndex::get(n, d)), values_(std::move(values)) {
    if (d < 0) throw DegreeError("negative degree");
    if (static_cast<int>(values_.size()) != index_->size())
        throw Error("moment vector has " + std::to_string(values_.size()) + " entries, expected " +
                    std::to_string(index_->size()));
    if (std::abs(values_[0] - 1.0) > 1e-9) throw Error("normalization violated: pE[1] = " + std::to_string(values_[0]));
    values_[0] = 1.0;
}

double PseudoExpectation::operator[](VarSet s) const {
    if (s.size() > d_ || s.max_var() > n_) throw DegreeError("moment " + s.to_string() + " outside degree " + std::to_string(d_));
    return values_[index_->find(s)];
}

PseudoExpectation PseudoExpectation::truncated(int d) const {
    if (d > d_) throw DegreeError("cannot raise degree by truncation");
    auto idx = MomentIndex::get(n_, d);
    std::vector<double> v(values_.begin(), values_.begin() + idx->size());
    return PseudoExpectation(n_, d, std::move(v));
}

double evaluate(const PseudoExpectation& pe, const MultilinearPoly& p) {
    if (p.degree() > pe.degree()) throw DegreeError("polynomial degree " + std::to_string(p.degree()) + " exceeds " +
                                                    std::to_string(pe.degree()));
    double total = 0.0;
    for (const auto& [s, c] : p.terms()) total += c * pe[s];
    return total;
}

PseudoExpectation condition(const PseudoExpectation& pe, int i, int b, double cond_tol) {
    if (i < 1 || i > pe.n()) throw std::out_of_range("condition: variable out of range");
    if (b != 1 && b != -1) throw std::invalid_argument("condition: b must be +1 or -1");
    if (!pe.complete() && pe.degree() <= 2)
        throw DegreeError("condition: degree must exceed 2 (got " + std::to_string(pe.degree()) + ")");
    double den = 1.0 + b * pe.mean(i);
    if (den <= cond_tol)
        throw ConditioningError("condition: X_" + std::to_string(i) + " is (near-)deterministically " + std::to_string(-b));
    int d_out = pe.complete() ? pe.degree() : pe.degree() - 1;
    auto idx = MomentIndex::get(pe.n(), d_out);
    std::vector<double> v(idx->size());
    VarSet xi = VarSet::single(i);
    for (int k = 0; k < idx->size(); ++k) {
        VarSet s = idx->at(k);
        v[k] = (pe[s] + b * pe[s ^ xi]) / den;
    }
    v[0] = 1.0;
    return PseudoExpectation(pe.n(), d_out, std::move(v));
}

Eigen::MatrixXd moment_matrix(const PseudoExpectation& pe, int k) {
    if (k < 0 || 2 * k > pe.degree())
        throw DegreeError("moment_matrix: need 2k <= d (k=" + std::to_string(k) + ", d=" + std::to_string(pe.degree()) + ")");
    auto basis = subsets_up_to(pe.n(), k);
    int N = static_cast<int>(basis.size());
    Eigen::MatrixXd m(N, N);
    for (int a = 0; a < N; ++a)
        for (int c = a; c < N; ++c) m(a, c) = m(c, a) = pe[basis[a] ^ basis[c]];
    return m;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Eigen::MatrixXd gram_vectors(const PseudoExpectation& pe, double psd_tol) {
    if (pe.degree() < 2) throw DegreeError("gram_vectors: degree must be at least 2");
    Eigen::MatrixXd m = moment_matrix(pe, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double lo = es.eigenvalues()(0);
    if (lo < -psd_tol) throw PsdError("gram_vectors: moment matrix has eigenvalue " + std::to_string(lo));
    // Roundoff-level eigenvalues are dropped so that identical points get identical rows.
    const double cut = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
    Eigen::VectorXd s = es.eigenvalues().unaryExpr([cut](double e) { return e <= cut ? 0.0 : std::sqrt(e); });
    return es.eigenvectors() * s.asDiagonal();
}

InvariantReport check_invariants(const PseudoExpectation& pe) {
    InvariantReport r;
    r.normalization_error = std::abs(pe.values()[0] - 1.0);
    for (double v : pe.values()) r.max_moment_excess = std::max(r.max_moment_excess, std::abs(v) - 1.0);
    int k = std::min(pe.degree() / 2, pe.n());
    r.psd_violation = std::max(0.0, -min_eigenvalue(moment_matrix(pe, k)));
    return r;
}

std::string serialize(const PseudoExpectation& pe) {
    std::ostringstream os;
    os << "# n=" << pe.n() << " d=" << pe.degree() << '\n';
    char buf[64];
    const auto& idx = pe.index();
    for (int k = 0; k < idx.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", pe.values()[k]);
        os << idx.at(k).to_string() << " : " << buf << '\n';
    }
    return os.str();
}

PseudoExpectation deserialize(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int n = -1, d = -1;
    std::vector<std::pair<VarSet, double>> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(), "# n=%d d=%d", &n, &d) != 2) throw ParseError("bad header: " + line);
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("missing ':' in line: " + line);
        std::istringstream lhs(line.substr(0, colon));
        VarSet s;
        std::string tok;
        while (lhs >> tok) {
            if (tok == "-") continue;
            int v = std::stoi(tok);
            if (v < 1 || v > 64) throw ParseError("variable out of range: " + tok);
            s = s.with(v);
        }
        entries.emplace_back(s, std::stod(line.substr(colon + 1)));
    }
    if (n < 0) throw ParseError("missing '# n=.. d=..' header");
    auto idx = MomentIndex::get(n, d);
    std::vector<double> v(idx->size(), 0.0);
    std::vector<char> seen(idx->size(), 0);
    for (auto [s, x] : entries) {
        int k = idx->find(s);
        if (k < 0) throw ParseError("moment " + s.to_string() + " outside the declared degree");
        v[k] = x;
        seen[k] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw ParseError("moment table incomplete");
    return PseudoExpectation(n, d, std::move(v));
}

}  // namespace sosround
