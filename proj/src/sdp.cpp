#include "gramian/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

namespace gramian {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

double min_eig(const Eigen::MatrixXd &a) {
    if (a.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double max_eig(const Eigen::MatrixXd &a) {
    if (a.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(a.rows() - 1);
}

Eigen::MatrixXd sym(const Eigen::MatrixXd &a) { return 0.5 * (a + a.transpose()); }

// Largest step in (0, 1] keeping L L' + alpha * D positive definite, damped by 0.98.
double step_length(const Eigen::LLT<Eigen::MatrixXd> &chol, const Eigen::MatrixXd &d) {
    const Eigen::MatrixXd linv_d = chol.matrixL().solve(d);
    const Eigen::MatrixXd t = chol.matrixL().solve(linv_d.transpose());
    const double lmin = min_eig(sym(t));
    if (lmin >= 0.0)
        return 1.0;
    return std::min(1.0, 0.98 * (-1.0 / lmin));
}

double backtrack(const Eigen::MatrixXd &x, const Eigen::MatrixXd &d, double alpha) {
    for (int k = 0; k < 30; ++k, alpha *= 0.8) {
        Eigen::LLT<Eigen::MatrixXd> c(sym(x + alpha * d));
        if (c.info() == Eigen::Success)
            return alpha;
    }
    return 0.0;
}

// Orthonormal-coordinate vector of a symmetric sparse matrix (off-diagonals scaled by sqrt 2).
Eigen::VectorXd svec(const Sparse &a, int n) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n * (n + 1) / 2);
    for (int k = 0; k < a.outerSize(); ++k)
        for (Sparse::InnerIterator it(a, k); it; ++it) {
            const auto i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
            if (i > j)
                continue;
            const int idx = j * (j + 1) / 2 + i;
            v(idx) = (i == j) ? it.value() : std::sqrt(2.0) * it.value();
        }
    return v;
}

struct Reduced {
    std::vector<int> kept;
    bool consistent = true;
};

Reduced remove_dependent(const SdpProblem &p, double tol) {
    const int m = p.num_constraints();
    const int dim = p.size * (p.size + 1) / 2;
    Eigen::MatrixXd a(dim, m);
    for (int i = 0; i < m; ++i)
        a.col(i) = svec(p.constraints[static_cast<std::size_t>(i)], p.size);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    const auto rank = static_cast<int>(qr.rank());
    Reduced out;
    for (int i = 0; i < rank; ++i)
        out.kept.push_back(static_cast<int>(qr.colsPermutation().indices()(i)));
    std::sort(out.kept.begin(), out.kept.end());
    if (rank == m)
        return out;

    Eigen::MatrixXd ak(dim, rank);
    Eigen::VectorXd bk(rank);
    for (int j = 0; j < rank; ++j) {
        ak.col(j) = a.col(out.kept[static_cast<std::size_t>(j)]);
        bk(j) = p.rhs(out.kept[static_cast<std::size_t>(j)]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qk(ak);
    for (int i = 0; i < m; ++i) {
        if (std::binary_search(out.kept.begin(), out.kept.end(), i))
            continue;
        const Eigen::VectorXd c = qk.solve(a.col(i));
        if (std::abs(p.rhs(i) - c.dot(bk)) > tol * (1.0 + std::abs(p.rhs(i)) + c.cwiseAbs().dot(bk.cwiseAbs())))
            out.consistent = false;
    }
    return out;
}

Eigen::VectorXd apply_constraints(const std::vector<Sparse> &a, const Eigen::MatrixXd &x) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = inner(a[i], x);
    return v;
}

// Split points k of the spectrum of X (k leading eigenvalues kept), ordered by the relative
// gap lambda_k / lambda_{k+1}, largest first. Only gaps of at least 1e2 are listed.
std::vector<Eigen::Index> spectral_splits(const Eigen::VectorXd &lam_desc) {
    const auto n = lam_desc.size();
    std::vector<std::pair<double, Eigen::Index>> gaps;
    for (Eigen::Index i = 0; i + 1 < n && lam_desc(i) > 1e-12 * lam_desc(0); ++i) {
        const double ratio = lam_desc(i) / std::max(lam_desc(i + 1), 1e-300 * lam_desc(0));
        if (ratio >= 1e2)
            gaps.emplace_back(ratio, i + 1);
    }
    std::sort(gaps.begin(), gaps.end(), [](const auto &l, const auto &r) { return l.first > r.first; });
    std::vector<Eigen::Index> out;
    for (const auto &g : gaps)
        out.push_back(g.second);
    return out;
}

// Range polish for optimal faces that are not strictly complementary, where the path stalls
// with a few eigenvalues of X decaying slowly. Writes X = V V' with V the k leading scaled
// eigenvectors and iterates V <- least-norm solution of the linearized constraints; fixed points
// satisfy (I - A'y) V = 0, so callers still compare the objective with a dual bound.
std::optional<Eigen::MatrixXd> polish_range(const std::vector<Sparse> &a, const Eigen::VectorXd &b,
                                            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> &es,
                                            Eigen::Index k, double feas_tol) {
    const auto n = es.eigenvalues().size();
    const auto m = static_cast<Eigen::Index>(a.size());
    if (n * k < m)
        return std::nullopt;
    Eigen::MatrixXd v = es.eigenvectors().rightCols(k) * es.eigenvalues().tail(k).cwiseMax(0.0).cwiseSqrt().asDiagonal();
    auto residual = [&](const Eigen::MatrixXd &xx) {
        const Eigen::VectorXd rp = b - apply_constraints(a, xx);
        return (rp.array().abs() / (1.0 + b.array().abs())).maxCoeff();
    };
    Eigen::MatrixXd jac(m, n * k);
    double last = residual(v * v.transpose());
    for (int it = 0; it < 30; ++it) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const Eigen::MatrixXd av = 2.0 * (a[static_cast<std::size_t>(i)] * v);
            jac.row(i) = Eigen::Map<const Eigen::RowVectorXd>(av.data(), n * k);
        }
        const Eigen::VectorXd rhs = b + apply_constraints(a, v * v.transpose());
        const Eigen::VectorXd next = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(jac).solve(rhs);
        const Eigen::MatrixXd vn = Eigen::Map<const Eigen::MatrixXd>(next.data(), n, k);
        const double step = (vn - v).norm();
        v = vn;
        const double res = residual(v * v.transpose());
        // Diverging: the split does not match the rank of a nearby feasible point.
        if (!std::isfinite(res) || res > 1e3 * std::max(last, feas_tol))
            return std::nullopt;
        last = res;
        if (step <= 1e-14 * (1.0 + v.norm()))
            break;
    }
    if (last > feas_tol)
        return std::nullopt;
    return sym(v * v.transpose());
}

} // namespace

void SdpProblem::validate() const {
    if (size < 1)
        throw std::invalid_argument("SdpProblem: size must be positive");
    if (constraints.empty())
        throw std::invalid_argument("SdpProblem: no constraints");
    if (cost.rows() != size || cost.cols() != size)
        throw std::invalid_argument("SdpProblem: cost shape mismatch");
    if ((cost - cost.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("SdpProblem: cost not symmetric");
    if (rhs.size() != num_constraints())
        throw std::invalid_argument("SdpProblem: rhs length mismatch");
    for (const auto &a : constraints) {
        if (a.rows() != size || a.cols() != size)
            throw std::invalid_argument("SdpProblem: constraint shape mismatch");
        const Sparse diff = a - Sparse(a.transpose());
        if (diff.norm() > 1e-12 * (1.0 + a.norm()))
            throw std::invalid_argument("SdpProblem: constraint not symmetric");
    }
}

std::string to_string(SdpStatus s) {
    switch (s) {
    case SdpStatus::optimal:
        return "optimal";
    case SdpStatus::primal_infeasible:
        return "primal_infeasible";
    case SdpStatus::numerical_failure:
        return "dual_unbounded_or_numerical_failure";
    }
    return "unknown";
}

double inner(const Sparse &a, const Eigen::MatrixXd &b) {
    double s = 0.0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (Sparse::InnerIterator it(a, k); it; ++it)
            s += it.value() * b(it.row(), it.col());
    return s;
}

Eigen::MatrixXd adjoint(const std::vector<Sparse> &a, const Eigen::VectorXd &y, int size) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size, size);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double yi = y(static_cast<Eigen::Index>(i));
        if (yi == 0.0)
            continue;
        for (int k = 0; k < a[i].outerSize(); ++k)
            for (Sparse::InnerIterator it(a[i], k); it; ++it)
                out(it.row(), it.col()) += yi * it.value();
    }
    return out;
}

SdpSolution solve_sdp(const SdpProblem &p, const SdpOptions &opts) {
    p.validate();
    const int n = p.size;
    const int m_all = p.num_constraints();

    SdpSolution sol;
    sol.y = Eigen::VectorXd::Zero(m_all);
    const Reduced red = remove_dependent(p, std::max(opts.feas_tol, 1e-10));
    sol.dropped_constraints = m_all - static_cast<int>(red.kept.size());
    if (!red.consistent) {
        sol.status = SdpStatus::primal_infeasible;
        sol.X = Eigen::MatrixXd::Zero(n, n);
        sol.S = p.cost;
        sol.message = "inconsistent linearly dependent constraints";
        return sol;
    }

    std::vector<Sparse> a;
    Eigen::VectorXd b(static_cast<Eigen::Index>(red.kept.size()));
    for (std::size_t i = 0; i < red.kept.size(); ++i) {
        a.push_back(p.constraints[static_cast<std::size_t>(red.kept[i])]);
        b(static_cast<Eigen::Index>(i)) = p.rhs(red.kept[i]);
    }
    const auto m = static_cast<Eigen::Index>(a.size());
    const Eigen::MatrixXd &c = p.cost;
    const double c_norm = c.norm();

    // Gram matrix <A_i, A_j>: well conditioned after dependent rows are gone, used to put each
    // primal direction back onto A(dx) = rp when the Schur solve has lost accuracy.
    Eigen::MatrixXd svecs(n * (n + 1) / 2, m);
    for (Eigen::Index i = 0; i < m; ++i)
        svecs.col(i) = svec(a[static_cast<std::size_t>(i)], n);
    const Eigen::LLT<Eigen::MatrixXd> gram(svecs.transpose() * svecs);

    const double tau = opts.initial_scale > 0.0 ? opts.initial_scale : 1.0 + b.cwiseAbs().maxCoeff();
    Eigen::MatrixXd X = tau * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd S = X;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    auto finish = [&](SdpStatus status, std::string msg, int iter) {
        sol.status = status;
        sol.message = std::move(msg);
        sol.iterations = iter;
        sol.X = sym(X);
        sol.S = sym(S);
        for (Eigen::Index i = 0; i < m; ++i)
            sol.y(red.kept[static_cast<std::size_t>(i)]) = y(i);
        sol.primal_objective = (c.array() * sol.X.array()).sum();
        sol.dual_objective = b.dot(y);
        sol.gap = (sol.X.array() * sol.S.array()).sum();
        const Eigen::VectorXd rp = b - apply_constraints(a, sol.X);
        sol.primal_residual = (rp.array().abs() / (1.0 + b.array().abs())).maxCoeff();
        sol.dual_residual = (c - adjoint(a, y, n) - sol.S).norm() / (1.0 + c_norm);
        return sol;
    };

    // On a stall, polish the primal onto a dominant range V, then move y by the least-norm
    // correction that makes (C - A'y) V = 0. Accepted only as a feasible pair with a closed gap.
    auto fail = [&](std::string msg, int iter) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(X));
        const Eigen::MatrixXd s_now = c - adjoint(a, y, n);
        for (const Eigen::Index k : spectral_splits(es.eigenvalues().reverse())) {
            const auto xp = polish_range(a, b, es, k, opts.feas_tol);
            if (!xp)
                continue;
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(*xp);
            const Eigen::MatrixXd v = ep.eigenvectors().rightCols(k);
            Eigen::MatrixXd g(n * k, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                const Eigen::MatrixXd av = a[static_cast<std::size_t>(i)] * v;
                g.col(i) = Eigen::Map<const Eigen::VectorXd>(av.data(), n * k);
            }
            const Eigen::MatrixXd sv = s_now * v;
            const Eigen::VectorXd y2 =
                y + Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(g).solve(
                        Eigen::Map<const Eigen::VectorXd>(sv.data(), n * k));
            const Eigen::MatrixXd s2 = sym(c - adjoint(a, y2, n));
            const double pobj = (c.array() * xp->array()).sum();
            const double dobj = b.dot(y2);
            const double s2_min = min_eig(s2);
            if (opts.verbose)
                std::fprintf(stderr, "polish k %ld pobj %+.10e dobj %+.10e min eig S %.2e\n", static_cast<long>(k),
                             pobj, dobj, s2_min);
            if (s2_min >= -opts.feas_tol * (1.0 + s2.norm()) &&
                std::abs(pobj - dobj) <= opts.gap_tol * (1.0 + std::abs(pobj))) {
                X = *xp;
                y = y2;
                S = s2;
                return finish(SdpStatus::optimal, "converged after range polish (" + msg + ")", iter);
            }
        }
        return finish(SdpStatus::numerical_failure, std::move(msg), iter);
    };

    int stalled = 0;
    double best_gap = INFINITY;
    int since_best = 0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const Eigen::VectorXd rp = b - apply_constraints(a, X);
        const Eigen::MatrixXd aty = adjoint(a, y, n);
        const Eigen::MatrixXd rd = c - aty - S;
        const double gap = (X.array() * S.array()).sum();
        const double mu = gap / n;
        const double pobj = (c.array() * X.array()).sum();
        const double dobj = b.dot(y);
        const double pres = (rp.array().abs() / (1.0 + b.array().abs())).maxCoeff();
        const double dres = rd.norm() / (1.0 + c_norm);

        if (opts.verbose)
            std::fprintf(stderr, "%3d pobj %+.10e dobj %+.10e pres %.2e dres %.2e gap %.2e\n", iter, pobj, dobj, pres,
                         dres, gap);
        if (pres <= opts.feas_tol && dres <= opts.feas_tol && gap <= opts.gap_tol * (1.0 + std::abs(pobj)))
            return finish(SdpStatus::optimal, "converged", iter);
        if (gap < 0.9 * best_gap) {
            best_gap = gap;
            since_best = 0;
        } else if (++since_best >= 15 && pres <= opts.feas_tol && dres <= opts.feas_tol) {
            return fail("duality gap stalled", iter);
        }

        // Approximate Farkas ray: b'y > 0 with Σ y_i A_i nearly negative semidefinite.
        if (dobj > 0.0) {
            const double lmax = max_eig(aty);
            if (lmax <= dobj / opts.infeasibility_bound)
                return finish(SdpStatus::primal_infeasible,
                              "dual ray certifies no feasible X with trace below the infeasibility bound", iter);
        }

        Eigen::LLT<Eigen::MatrixXd> cx(X), cs(S);
        if (cx.info() != Eigen::Success || cs.info() != Eigen::Success)
            return finish(SdpStatus::numerical_failure, "iterate lost positive definiteness", iter);
        const Eigen::MatrixXd sinv = cs.solve(eye);

        // Schur complement M_ij = tr(A_i X A_j S^-1).
        Eigen::MatrixXd schur(m, m);
        std::vector<Eigen::MatrixXd> xas;
        xas.reserve(static_cast<std::size_t>(m));
        for (Eigen::Index j = 0; j < m; ++j) {
            const Eigen::MatrixXd xa = X * a[static_cast<std::size_t>(j)];
            const Eigen::MatrixXd t = xa * sinv;
            for (Eigen::Index i = 0; i < m; ++i)
                schur(i, j) = inner(a[static_cast<std::size_t>(i)], t);
        }
        schur = sym(schur);
        Eigen::LDLT<Eigen::MatrixXd> schur_f(schur);
        if (schur_f.info() != Eigen::Success)
            return fail("Schur complement factorization failed", iter);

        const Eigen::MatrixXd xrds = X * rd * sinv;
        const Eigen::VectorXd a_xrds = apply_constraints(a, xrds);

        auto direction = [&](double sigma_mu, const Eigen::MatrixXd *corr, Eigen::MatrixXd &dx, Eigen::VectorXd &dy,
                             Eigen::MatrixXd &ds) {
            Eigen::MatrixXd base = sigma_mu * sinv - X;
            if (corr)
                base -= *corr;
            const Eigen::VectorXd rhs = rp - apply_constraints(a, base) + a_xrds;
            dy = schur_f.solve(rhs);
            ds = rd - adjoint(a, dy, n);
            dx = sym(base - X * ds * sinv);
            // Refinement against the residual of A(dx) = rp actually produced by dx.
            for (int k = 0; k < 3; ++k) {
                const Eigen::VectorXd err = rp - apply_constraints(a, dx);
                if (err.norm() <= 1e-15 * (1.0 + rp.norm()))
                    break;
                const Eigen::VectorXd fix = schur_f.solve(err);
                dy += fix;
                const Eigen::MatrixXd dfix = adjoint(a, fix, n);
                ds -= dfix;
                dx += sym(X * dfix * sinv);
            }
            dx += adjoint(a, gram.solve(rp - apply_constraints(a, dx)), n);
        };

        Eigen::MatrixXd dx, ds;
        Eigen::VectorXd dy;
        direction(0.0, nullptr, dx, dy, ds);
        const double ap_aff = step_length(cx, dx);
        const double ad_aff = step_length(cs, ds);
        const double mu_aff = ((X + ap_aff * dx).array() * (S + ad_aff * ds).array()).sum() / n;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        const Eigen::MatrixXd corr = dx * ds * sinv;
        direction(sigma * mu, &corr, dx, dy, ds);
        double ap = step_length(cx, dx);
        double ad = step_length(cs, ds);
        if (!dx.allFinite() || !ds.allFinite() || !dy.allFinite())
            return fail("non-finite search direction", iter);

        // Rounding can leave the damped step on the boundary; back off until Cholesky succeeds.
        ap = backtrack(X, dx, ap);
        ad = backtrack(S, ds, ad);
        if (ap <= 0.0 || ad <= 0.0)
            return finish(SdpStatus::numerical_failure, "iterate lost positive definiteness", iter);
        X = sym(X + ap * dx);
        y += ad * dy;
        S = sym(S + ad * ds);

        stalled = (std::max(ap, ad) < 1e-8) ? stalled + 1 : 0;
        if (stalled >= 5)
            return fail("step lengths stalled", iter + 1);
    }
    return fail("iteration limit reached", opts.max_iter);
}

OptimalityReport check_optimality_pair(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, const Eigen::MatrixXd &S,
                                       const SdpProblem &p, double tol) {
    if (X.rows() != p.size || S.rows() != p.size || y.size() != p.num_constraints())
        throw std::invalid_argument("check_optimality_pair: shape mismatch");
    OptimalityReport r;
    const Eigen::VectorXd rp = p.rhs - apply_constraints(p.constraints, X);
    r.primal_residual = (rp.array().abs() / (1.0 + p.rhs.array().abs())).maxCoeff();
    r.dual_residual = (p.cost - adjoint(p.constraints, y, p.size) - S).norm() / (1.0 + p.cost.norm());
    r.complementarity = (X.array() * S.array()).sum();
    r.min_eig_x = min_eig(sym(X));
    r.min_eig_s = min_eig(sym(S));
    r.optimal_pair = r.primal_residual <= tol && r.dual_residual <= tol && r.min_eig_x >= -tol * (1.0 + X.norm()) &&
                     r.min_eig_s >= -tol * (1.0 + S.norm()) && r.complementarity <= tol * (1.0 + X.trace());
    return r;
}

} // namespace gramian
