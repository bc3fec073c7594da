#include "sosround/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <limits>
#include <map>
#include <mutex>

#include "sosround/errors.hpp"

namespace sosround::sdp {

void SparseRows::append(std::vector<std::pair<int, double>> entries) {
    std::sort(entries.begin(), entries.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::size_t k = 0;
    while (k < entries.size()) {
        int c = entries[k].first;
        double v = 0.0;
        while (k < entries.size() && entries[k].first == c) v += entries[k++].second;
        if (v != 0.0) {
            col.push_back(c);
            val.push_back(v);
        }
    }
    start.push_back(static_cast<int>(col.size()));
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nullspace basis Q of the equality rows (in variable space) and the least-norm particular solution.
struct EqualityBasis {
    bool identity = true;
    MatrixXd Q;
    VectorXd z0;
    bool consistent = true;
};

// Exact byte serialization of the equality rows.
std::string rows_key(const SparseRows& r, int nv, int n, int d) {
    std::string key;
    auto put = [&](const void* p, std::size_t len) { key.append(static_cast<const char*>(p), len); };
    put(&nv, sizeof nv);
    put(&n, sizeof n);
    put(&d, sizeof d);
    put(r.start.data(), r.start.size() * sizeof(int));
    put(r.col.data(), r.col.size() * sizeof(int));
    put(r.val.data(), r.val.size() * sizeof(double));
    return key;
}

EqualityBasis equality_basis(const SparseRows& eq, int nv, int n, int d) {
    EqualityBasis eb;
    if (eq.rows() == 0) {
        eb.z0 = VectorXd::Zero(nv);
        return eb;
    }
    static std::mutex mu;
    static std::vector<std::pair<std::string, EqualityBasis>> cache;
    std::string key = rows_key(eq, nv, n, d);
    {
        std::lock_guard<std::mutex> lock(mu);
        for (auto& [k, v] : cache)
            if (k == key) return v;
    }
    // E z = -e with z over variables (moment j -> variable j-1, lam column is zero).
    MatrixXd EtE = MatrixXd::Zero(nv, nv);
    VectorXd Ete = VectorXd::Zero(nv);
    for (int r = 0; r < eq.rows(); ++r) {
        double e0 = 0.0;
        for (int k = eq.start[r]; k < eq.start[r + 1]; ++k)
            if (eq.col[k] == 0) e0 = eq.val[k];
        for (int k = eq.start[r]; k < eq.start[r + 1]; ++k) {
            int ck = eq.col[k];
            if (ck == 0) continue;
            Ete(ck - 1) += eq.val[k] * e0;
            for (int q = eq.start[r]; q < eq.start[r + 1]; ++q) {
                int cq = eq.col[q];
                if (cq == 0) continue;
                EtE(ck - 1, cq - 1) += eq.val[k] * eq.val[q];
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(EtE);
    const VectorXd& ev = es.eigenvalues();
    double top = std::max(1.0, ev(nv - 1));
    double cut = 1e-9 * top;
    int nr = 0;
    while (nr < nv && ev(nr) <= cut) ++nr;
    eb.identity = false;
    eb.Q = es.eigenvectors().leftCols(nr);
    eb.z0 = VectorXd::Zero(nv);
    for (int j = nr; j < nv; ++j) {
        const auto v = es.eigenvectors().col(j);
        eb.z0 -= v * (v.dot(Ete) / ev(j));
    }
    // Consistency: ||E z0 + e||.
    double res = 0.0, scale = 1.0;
    for (int r = 0; r < eq.rows(); ++r) {
        double acc = 0.0;
        for (int k = eq.start[r]; k < eq.start[r + 1]; ++k) {
            int c = eq.col[k];
            acc += eq.val[k] * (c == 0 ? 1.0 : eb.z0(c - 1));
            scale = std::max(scale, std::abs(eq.val[k]));
        }
        res = std::max(res, std::abs(acc));
    }
    eb.consistent = res <= 1e-7 * scale;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() >= 8) cache.erase(cache.begin());
    cache.emplace_back(key, eb);
    return eb;
}

// Largest alpha with M + alpha*D ⪰ 0, given the Cholesky factor of M.
double psd_step(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& D) {
    MatrixXd A = llt.matrixL().solve(D);
    MatrixXd At = A.transpose();
    MatrixXd T = llt.matrixL().solve(At);
    T = 0.5 * (T + T.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues()(0);
    return lo < 0 ? -1.0 / lo : kInf;
}

double lp_step(const VectorXd& x, const VectorXd& dx) {
    double a = kInf;
    for (int i = 0; i < x.size(); ++i)
        if (dx(i) < 0) a = std::min(a, -x(i) / dx(i));
    return a;
}

class Solver {
public:
    Solver(const MomentProblem& p, const Options& o) : prob_(p), opt_(o) {
        idx_ = MomentIndex::get(p.n, p.d);
        m_ = idx_->size();
        nv_ = m_;  // m - 1 moment variables plus lam
        L_ = nv_ - 1;
        basis_ = subsets_up_to(p.n, p.d / 2);
        N_ = static_cast<int>(basis_.size());
        pvar_.assign(static_cast<std::size_t>(N_) * N_, nv_);
        std::vector<std::vector<std::pair<int, int>>> ent(nv_);
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) {
                if (a == b) continue;
                int k = idx_->find(basis_[a] ^ basis_[b]);
                if (k <= 0) throw SolverError("moment index missing for PSD entry");
                pvar_[a * N_ + b] = k - 1;
                ent[k - 1].emplace_back(a, b);
            }
        ent_start_.push_back(0);
        for (int v = 0; v < L_; ++v) {
            for (auto e : ent[v]) ent_.push_back(e);
            ent_start_.push_back(static_cast<int>(ent_.size()));
        }
        p_ = prob_.ineq.rows();
        if (static_cast<int>(prob_.lam_weight.size()) != p_) throw SolverError("lam_weight size mismatch");
        for (int c : prob_.ineq.col)
            if (c >= m_) throw SolverError("inequality column out of range");
        for (int c : prob_.eq.col)
            if (c >= m_) throw SolverError("equality column out of range");
    }

    Result run();

private:
    // PSD block V^T (M(y) - lam I) V, with V = I when no kernel is known.
    MatrixXd reduce(const MatrixXd& A) const { return face_ ? MatrixXd(V_.transpose() * A * V_) : A; }
    MatrixXd expand(const MatrixXd& A) const { return face_ ? MatrixXd(V_ * A * V_.transpose()) : A; }
    MatrixXd build_S(const VectorXd& z) const {
        MatrixXd S(N_, N_);
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) S(a, b) = (a == b) ? 1.0 - z(L_) : z(pvar_[a * N_ + b]);
        return reduce(S);
    }
    MatrixXd F_map(const VectorXd& dz) const {
        MatrixXd D(N_, N_);
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) D(a, b) = (a == b) ? -dz(L_) : dz(pvar_[a * N_ + b]);
        return reduce(D);
    }
    VectorXd F_adj(const MatrixXd& Ar) const {
        MatrixXd A = expand(Ar);
        VectorXd out = VectorXd::Zero(nv_);
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) {
                if (a == b) out(L_) -= A(a, b);
                else out(pvar_[a * N_ + b]) += A(a, b);
            }
        return out;
    }
    void build_face() {
        if (prob_.kernel.empty()) return;
        MatrixXd Kv = MatrixXd::Zero(N_, static_cast<int>(prob_.kernel.size()));
        for (std::size_t j = 0; j < prob_.kernel.size(); ++j)
            for (auto [k, c] : prob_.kernel[j]) {
                if (k < 0 || k >= N_) throw SolverError("kernel vector index out of range");
                Kv(k, static_cast<int>(j)) = c;
            }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Kv * Kv.transpose());
        const VectorXd& ev = es.eigenvalues();
        const double cut = 1e-9 * std::max(1.0, ev(N_ - 1));
        int nr = 0;
        while (nr < N_ && ev(nr) <= cut) ++nr;
        if (nr == N_) return;
        V_ = es.eigenvectors().leftCols(nr);
        face_ = true;
        Nr_ = nr;
    }
    // Row values g_r . y - w_r lam (with y_0 = 1) or the linear part only.
    VectorXd G_map(const VectorXd& z, bool with_constant) const {
        const auto& R = prob_.ineq;
        VectorXd s(p_);
        for (int r = 0; r < p_; ++r) {
            double acc = -prob_.lam_weight[r] * z(L_);
            for (int k = R.start[r]; k < R.start[r + 1]; ++k) {
                int c = R.col[k];
                acc += R.val[k] * (c == 0 ? (with_constant ? 1.0 : 0.0) : z(c - 1));
            }
            s(r) = acc;
        }
        return s;
    }
    VectorXd G_adj(const VectorXd& v) const {
        const auto& R = prob_.ineq;
        VectorXd out = VectorXd::Zero(nv_);
        for (int r = 0; r < p_; ++r) {
            for (int k = R.start[r]; k < R.start[r + 1]; ++k) {
                int c = R.col[k];
                if (c != 0) out(c - 1) += R.val[k] * v(r);
            }
            out(L_) -= prob_.lam_weight[r] * v(r);
        }
        return out;
    }
    VectorXd project(const VectorXd& v) const { return eb_.identity ? v : VectorXd(eb_.Q.transpose() * v); }
    VectorXd lift(const VectorXd& w) const { return eb_.identity ? w : VectorXd(eb_.Q * w); }

    void schur(const MatrixXd& Sinv, const MatrixXd& X, const VectorXd& D, MatrixXd& K) const;

    const MomentProblem& prob_;
    Options opt_;
    std::shared_ptr<const MomentIndex> idx_;
    int m_ = 0, nv_ = 0, L_ = 0, N_ = 0, p_ = 0;
    std::vector<VarSet> basis_;
    std::vector<int> pvar_;
    std::vector<std::pair<int, int>> ent_;
    std::vector<int> ent_start_;
    EqualityBasis eb_;
    bool face_ = false;
    MatrixXd V_;
    int Nr_ = 0;
};

void Solver::schur(const MatrixXd& Sinv_r, const MatrixXd& X_r, const VectorXd& D, MatrixXd& K) const {
    // V^T A_k V terms expand to A_k against V Sinv V^T and V X V^T; the lam block is -I in both spaces.
    const MatrixXd Sinv = expand(Sinv_r);
    const MatrixXd X = expand(X_r);
    K.setZero(nv_, nv_);
    std::vector<double> buf(nv_ + 1);
    auto accumulate = [&](int c, int d, double coef) {
        const double* sc = Sinv.col(c).data();
        const double* xd = X.col(d).data();
        for (int a = 0; a < N_; ++a) {
            double xa = coef * xd[a];
            if (xa == 0.0) continue;
            const int* pv = &pvar_[a * N_];
            for (int b = 0; b < N_; ++b) buf[pv[b]] += xa * sc[b];
            buf[L_] -= xa * sc[a];
        }
    };
    for (int l = 0; l < nv_; ++l) {
        std::fill(buf.begin(), buf.end(), 0.0);
        if (l == L_) {
            for (int c = 0; c < N_; ++c) accumulate(c, c, -1.0);
        } else {
            for (int e = ent_start_[l]; e < ent_start_[l + 1]; ++e) accumulate(ent_[e].first, ent_[e].second, 1.0);
        }
        std::memcpy(K.col(l).data(), buf.data(), sizeof(double) * nv_);
    }
    const auto& R = prob_.ineq;
    std::vector<int> vars;
    std::vector<double> coefs;
    double* kd = K.data();
    for (int r = 0; r < p_; ++r) {
        vars.clear();
        coefs.clear();
        for (int k = R.start[r]; k < R.start[r + 1]; ++k)
            if (R.col[k] != 0) {
                vars.push_back(R.col[k] - 1);
                coefs.push_back(R.val[k]);
            }
        vars.push_back(L_);
        coefs.push_back(-prob_.lam_weight[r]);
        double dr = D(r);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            double ci = dr * coefs[i];
            double* colp = kd + static_cast<std::size_t>(vars[i]) * nv_;
            for (std::size_t j = 0; j < vars.size(); ++j) colp[vars[j]] += ci * coefs[j];
        }
    }
    K = 0.5 * (K + K.transpose()).eval();
}

Result Solver::run() {
    Result res;
    eb_ = equality_basis(prob_.eq, nv_, prob_.n, prob_.d);
    if (!eb_.consistent) {
        res.outcome = Outcome::Infeasible;
        res.converged = true;
        res.lam = res.lam_upper = -kInf;
        return res;
    }
    const int nr = eb_.identity ? nv_ : static_cast<int>(eb_.Q.cols());
    Nr_ = N_;
    build_face();
    VectorXd c = VectorXd::Zero(nv_);
    c(L_) = -1.0;

    // Primal start: equality-feasible z0, lam strictly below every slack.
    VectorXd z = eb_.z0;
    z(L_) = 0.0;
    {
        MatrixXd M = build_S(z);
        double lo = Eigen::SelfAdjointEigenSolver<MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues()(0);
        VectorXd s = G_map(z, true);
        for (int r = 0; r < p_; ++r) lo = std::min(lo, s(r) / prob_.lam_weight[r]);
        z(L_) = lo - 1.0;
    }
    MatrixXd X = MatrixXd::Identity(Nr_, Nr_);
    VectorXd u = VectorXd::Ones(p_);
    const double nbar = static_cast<double>(Nr_ + p_);

    bool done = false;
    int it = 0;
    for (; it <= opt_.max_iters; ++it) {
        MatrixXd S = build_S(z);
        VectorXd s = G_map(z, true);
        Eigen::LLT<MatrixXd> lltS(S);
        if (lltS.info() != Eigen::Success) break;
        MatrixXd Sinv = lltS.solve(MatrixXd::Identity(Nr_, Nr_));
        Sinv = 0.5 * (Sinv + Sinv.transpose()).eval();

        VectorXd rd = c - F_adj(X) - G_adj(u);
        double dres = project(rd).norm();
        double gap = (X.cwiseProduct(S)).sum() + u.dot(s);
        double mu = gap / nbar;
        double lam = z(L_);
        res.lam = lam;
        res.lam_upper = lam + gap;
        res.dual_residual = dres;
        res.iterations = it;
        if (opt_.record_trace) {
            TraceRow tr;
            tr.iter = it;
            tr.dual_residual = dres;
            tr.gap = gap;
            tr.lam = lam;
            tr.min_eig = Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues()(0) + lam;
            res.trace.push_back(tr);
        }
        bool conv = gap <= opt_.gap_tol * (1.0 + std::abs(lam)) && dres <= opt_.dual_tol;
        if (conv) {
            res.converged = true;
            done = true;
        } else if (opt_.early_stop) {
            if (lam >= -opt_.lam_tol) done = true;
            else if (lam + gap < -opt_.lam_tol && dres <= 1e-8 && gap <= opt_.infeasible_rel_gap * std::abs(lam)) done = true;
        }
        if (done || it == opt_.max_iters) {
            VectorXd dobj_y = VectorXd::Zero(p_);
            const auto& R = prob_.ineq_dobj;
            if (R.rows() == p_) {
                for (int r = 0; r < p_; ++r) {
                    double acc = 0.0;
                    for (int k = R.start[r]; k < R.start[r + 1]; ++k) {
                        int cc = R.col[k];
                        acc += R.val[k] * (cc == 0 ? 1.0 : z(cc - 1));
                    }
                    dobj_y(r) = acc;
                }
                res.dlam_dobj = u.dot(dobj_y);
            }
            break;
        }

        VectorXd Dv = u.cwiseQuotient(s);
        MatrixXd K;
        schur(Sinv, X, Dv, K);
        MatrixXd Kr = eb_.identity ? K : MatrixXd(eb_.Q.transpose() * K * eb_.Q);
        Eigen::LLT<MatrixXd> lltK(Kr);
        double reg = 0.0;
        double dmax = Kr.diagonal().cwiseAbs().maxCoeff();
        while (lltK.info() != Eigen::Success) {
            reg = reg == 0.0 ? 1e-14 * (1.0 + dmax) : reg * 100.0;
            if (reg > 1e-4 * (1.0 + dmax)) break;
            lltK.compute(Kr + reg * MatrixXd::Identity(nr, nr));
        }
        if (lltK.info() != Eigen::Success) break;

        auto direction = [&](const MatrixXd& SinvRc, const VectorXd& rc, VectorXd& dz, MatrixXd& dS, VectorXd& ds,
                             MatrixXd& dX, VectorXd& du) {
            VectorXd rhs = F_adj(SinvRc) + G_adj(rc.cwiseQuotient(s)) - rd;
            VectorXd w = lltK.solve(project(rhs));
            dz = lift(w);
            dS = F_map(dz);
            ds = G_map(dz, false);
            dX = SinvRc - Sinv * dS * X;
            dX = 0.5 * (dX + dX.transpose()).eval();
            du = (rc - u.cwiseProduct(ds)).cwiseQuotient(s);
        };

        Eigen::LLT<MatrixXd> lltX(X);
        if (lltX.info() != Eigen::Success) break;

        // Predictor.
        VectorXd dz, ds, du;
        MatrixXd dS, dX;
        direction(-X, -s.cwiseProduct(u), dz, dS, ds, dX, du);
        double ap = std::min({1.0, psd_step(lltS, dS), lp_step(s, ds)});
        double ad = std::min({1.0, psd_step(lltX, dX), lp_step(u, du)});
        double mu_aff = (((X + ad * dX).cwiseProduct(S + ap * dS)).sum() + (u + ad * du).dot(s + ap * ds)) / nbar;
        double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        // Corrector.
        MatrixXd SinvRc = sigma * mu * Sinv - X - Sinv * dS * dX;
        VectorXd rc = VectorXd::Constant(p_, sigma * mu) - s.cwiseProduct(u) - ds.cwiseProduct(du);
        direction(SinvRc, rc, dz, dS, ds, dX, du);
        double eta = gap < 1e-6 ? 0.99 : 0.95;
        ap = std::min(1.0, eta * std::min(psd_step(lltS, dS), lp_step(s, ds)));
        ad = std::min(1.0, eta * std::min(psd_step(lltX, dX), lp_step(u, du)));
        z += ap * dz;
        X += ad * dX;
        u += ad * du;
    }
    res.iterations = it;
    res.y.assign(m_, 0.0);
    res.y[0] = 1.0;
    for (int k = 1; k < m_; ++k) res.y[k] = z(k - 1);
    double eqres = 0.0;
    for (int r = 0; r < prob_.eq.rows(); ++r) {
        double acc = 0.0;
        for (int k = prob_.eq.start[r]; k < prob_.eq.start[r + 1]; ++k) acc += prob_.eq.val[k] * res.y[prob_.eq.col[k]];
        eqres = std::max(eqres, std::abs(acc));
    }
    res.eq_residual = eqres;
    for (auto& tr : res.trace) tr.primal_residual = eqres;
    if (res.lam >= -opt_.lam_tol) res.outcome = Outcome::Feasible;
    else if (res.lam_upper < -opt_.lam_tol && res.dual_residual <= 1e-8) res.outcome = Outcome::Infeasible;
    else res.outcome = Outcome::Indeterminate;
    return res;
}

}  // namespace

Result solve(const MomentProblem& prob, const Options& opt) {
    if (prob.d < 2 || prob.d % 2) throw SolverError("moment problem degree must be even and >= 2");
    Solver s(prob, opt);
    return s.run();
}

}  // namespace sosround::sdp
