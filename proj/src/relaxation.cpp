#include "gramian/relaxation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gramian {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

Sparse class_matrix(int size, const std::vector<std::pair<int, int>> &entries, const Eigen::VectorXd &coords) {
    std::vector<Eigen::Triplet<double>> trip;
    const double r2 = std::sqrt(2.0);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto [i, j] = entries[k];
        const double v = coords(static_cast<Eigen::Index>(k));
        if (v == 0.0)
            continue;
        if (i == j) {
            trip.emplace_back(i, i, v);
        } else {
            trip.emplace_back(i, j, v / r2);
            trip.emplace_back(j, i, v / r2);
        }
    }
    Sparse out(size, size);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace

std::size_t OrthBasis::num_z() const {
    std::size_t total = 0;
    for (const auto &c : classes)
        total += c.z.size();
    return total;
}

OrthBasis build_orth_basis(int n, int d) {
    if (n < 1 || d < 1)
        throw std::invalid_argument("build_orth_basis: need n >= 1 and d >= 1");
    OrthBasis ob;
    ob.n = n;
    ob.d = d;
    ob.basis = MonomialBasis(n, d + 1);
    ob.sums = MonomialBasis(n, 2 * d + 2);
    ob.classes.resize(ob.sums.size());
    for (std::size_t k = 0; k < ob.sums.size(); ++k)
        ob.classes[k].alpha = ob.sums[k];

    const int size = ob.size();
    for (int i = 0; i < size; ++i)
        for (int j = i; j < size; ++j) {
            auto &cls = ob.classes[ob.sums.index_of(ob.basis[static_cast<std::size_t>(i)] +
                                                     ob.basis[static_cast<std::size_t>(j)])];
            cls.entries.emplace_back(i, j);
            cls.multiplicity += (i == j) ? 1 : 2;
        }

    for (auto &cls : ob.classes) {
        const auto k = static_cast<Eigen::Index>(cls.entries.size());
        // Y_α in orthonormal class coordinates: 1 on diagonal entries, sqrt 2 off the diagonal.
        Eigen::VectorXd w(k);
        for (Eigen::Index e = 0; e < k; ++e) {
            const auto [i, j] = cls.entries[static_cast<std::size_t>(e)];
            w(e) = (i == j) ? 1.0 : std::sqrt(2.0);
        }
        cls.y = class_matrix(size, cls.entries, w);
        if (k == 1)
            continue;
        // Householder H maps u = w / |w| to -e_1 (u_1 > 0); its remaining columns span u⊥.
        const Eigen::VectorXd u = w / w.norm();
        Eigen::VectorXd v = u;
        v(0) += 1.0;
        const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(k, k) - 2.0 * v * v.transpose() / v.squaredNorm();
        for (Eigen::Index c = 1; c < k; ++c) {
            Eigen::VectorXd col = h.col(c);
            Eigen::Index arg = 0;
            for (Eigen::Index e = 1; e < k; ++e)
                if (std::abs(col(e)) > std::abs(col(arg)) + 1e-12)
                    arg = e;
            if (col(arg) < 0.0)
                col = -col;
            cls.z.push_back(class_matrix(size, cls.entries, col));
        }
    }
    return ob;
}

std::size_t num_moment_constraints(const OrthBasis &basis) { return basis.sums.offset(2 * basis.d + 1); }

SdpProblem assemble_relaxation(const MomentSequence &m, const OrthBasis &basis) {
    if (m.n() != basis.n)
        throw std::invalid_argument("assemble_relaxation: variable count mismatch");
    if (m.max_degree() < 2 * basis.d)
        throw std::invalid_argument("assemble_relaxation: missing moments up to degree " + std::to_string(2 * basis.d));
    SdpProblem p;
    p.size = basis.size();
    p.cost = Eigen::MatrixXd::Identity(p.size, p.size);
    const std::size_t ny = num_moment_constraints(basis);
    p.rhs.resize(static_cast<Eigen::Index>(ny + basis.num_z()));
    Eigen::Index row = 0;
    for (std::size_t k = 0; k < ny; ++k) {
        const auto &cls = basis.classes[k];
        p.constraints.push_back(cls.y);
        p.rhs(row++) = cls.multiplicity * m(cls.alpha);
    }
    for (const auto &cls : basis.classes)
        for (const auto &z : cls.z) {
            p.constraints.push_back(z);
            p.rhs(row++) = 0.0;
        }
    return p;
}

double moments_scale(const MomentSequence &m, int d) {
    const double m0 = m(MultiIndex(std::vector<int>(static_cast<std::size_t>(m.n()), 0)));
    if (!(m0 > 0.0) || d < 1)
        return 1.0;
    double s = 0.0;
    for (int k = 0; k < m.n(); ++k) {
        std::vector<int> e(static_cast<std::size_t>(m.n()), 0);
        e[static_cast<std::size_t>(k)] = 2 * d;
        const double ratio = m(MultiIndex(std::move(e))) / m0;
        if (ratio > 0.0)
            s = std::max(s, std::pow(ratio, 1.0 / (2.0 * d)));
    }
    return (s > 0.0 && std::isfinite(s)) ? s : 1.0;
}

MomentSequence scale_moments(const MomentSequence &m, double s) {
    MomentSequence out = m;
    for (std::size_t i = 0; i < m.basis.size(); ++i)
        out.values(static_cast<Eigen::Index>(i)) /= std::pow(s, m.basis[i].degree());
    return out;
}

RelaxationReport solve_relaxation(const Polynomial &p, int d, const RelaxationOptions &opts,
                                  const std::optional<Decomposition> &reference) {
    if (p.degree_bound() > 2 * d)
        throw std::invalid_argument("solve_relaxation: polynomial degree exceeds 2d");
    if (p.coefficient(MultiIndex(std::vector<int>(static_cast<std::size_t>(p.n()), 0))) == 0.0)
        throw std::invalid_argument("solve_relaxation: polynomial has zero constant term");
    return solve_relaxation_moments(moments_from_poly(p, d), d, opts, &p, reference);
}

namespace {

// Orthonormal basis Q of the smallest face known in advance: every feasible X vanishes on the
// kernel of its fixed leading block M_d, so X = Q X~ Q'. The kernel is read off the equilibrated
// M_d, whose data are exact up to rounding.
Eigen::MatrixXd face_basis(const MomentSequence &m, int d, Eigen::Index size, double tol) {
    const Eigen::MatrixXd md = build_moment_matrix(m, d).matrix;
    Eigen::VectorXd dinv(md.rows());
    for (Eigen::Index i = 0; i < md.rows(); ++i)
        dinv(i) = md(i, i) > 0.0 ? 1.0 / std::sqrt(md(i, i)) : 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dinv.asDiagonal() * md * dinv.asDiagonal());
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::Index k = 0;
    while (k < md.rows() && es.eigenvalues()(k) <= tol * top)
        ++k;
    if (k == 0)
        return Eigen::MatrixXd::Identity(size, size);
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(size, k);
    kernel.topRows(md.rows()) = dinv.asDiagonal() * es.eigenvectors().leftCols(k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(size, size);
    return full.rightCols(size - k);
}

SdpSolution solve_on_face(const SdpProblem &prob, const Eigen::MatrixXd &q, const SdpOptions &opts) {
    if (q.cols() == prob.size)
        return solve_sdp(prob, opts);
    SdpProblem red;
    red.size = static_cast<int>(q.cols());
    red.cost = q.transpose() * prob.cost * q;
    red.rhs = prob.rhs;
    for (const auto &a : prob.constraints) {
        Eigen::MatrixXd qa = q.transpose() * a * q;
        qa = 0.5 * (qa + qa.transpose()).eval();
        red.constraints.push_back(qa.sparseView(1.0, 1e-15));
    }
    SdpSolution sol = solve_sdp(red, opts);
    sol.X = q * sol.X * q.transpose();
    sol.S = prob.cost - adjoint(prob.constraints, sol.y, prob.size);
    sol.gap = (sol.X.array() * sol.S.array()).sum();
    sol.primal_objective = (prob.cost.array() * sol.X.array()).sum();
    Eigen::VectorXd rp(prob.num_constraints());
    for (int i = 0; i < prob.num_constraints(); ++i)
        rp(i) = prob.rhs(i) - inner(prob.constraints[static_cast<std::size_t>(i)], sol.X);
    sol.primal_residual = (rp.array().abs() / (1.0 + prob.rhs.array().abs())).maxCoeff();
    return sol;
}

} // namespace

RelaxationReport solve_relaxation_moments(const MomentSequence &m, int d, const RelaxationOptions &opts,
                                          const Polynomial *p, const std::optional<Decomposition> &reference) {
    RelaxationReport rep;
    rep.n = m.n();
    rep.d = d;
    rep.scale = opts.rescale ? moments_scale(m, d) : 1.0;

    const OrthBasis ob = build_orth_basis(m.n(), d);
    const MomentSequence scaled_m = scale_moments(m, rep.scale);
    const SdpProblem prob = assemble_relaxation(scaled_m, ob);
    const Eigen::MatrixXd face = opts.facial_reduction ? face_basis(scaled_m, d, prob.size, opts.face_tol)
                                                       : Eigen::MatrixXd::Identity(prob.size, prob.size);
    rep.face_dimension = static_cast<int>(face.cols());
    const SdpSolution sol = solve_on_face(prob, face, opts.sdp);
    rep.status = sol.status;
    rep.solver_message = sol.message;
    rep.iterations = sol.iterations;
    rep.gap = sol.gap;
    rep.primal_residual = sol.primal_residual;
    rep.dual_residual = sol.dual_residual;
    const auto ny = static_cast<Eigen::Index>(num_moment_constraints(ob));
    rep.dual_y = sol.y.head(ny);
    rep.dual_z = sol.y.tail(sol.y.size() - ny);
    rep.dual_S = sol.S;

    rep.X_scaled = MomentMatrix{ob.basis, sol.X};
    Eigen::VectorXd dscale(sol.X.rows());
    for (Eigen::Index i = 0; i < dscale.size(); ++i)
        dscale(i) = std::pow(rep.scale, ob.basis[static_cast<std::size_t>(i)].degree());
    rep.X = MomentMatrix{ob.basis, dscale.asDiagonal() * sol.X * dscale.asDiagonal()};
    rep.trace = rep.X.matrix.trace();
    rep.trace_scaled = sol.X.trace();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.X.matrix, Eigen::EigenvaluesOnly);
    rep.eigen_sum = eig.eigenvalues().sum();
    rep.min_eigenvalue = eig.eigenvalues()(0);

    for (const auto &cls : ob.classes) {
        double lo = INFINITY, hi = -INFINITY, mean = 0.0;
        for (const auto &[i, j] : cls.entries) {
            const double v = sol.X(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
        }
        mean /= static_cast<double>(cls.entries.size());
        rep.moment_spread = std::max(rep.moment_spread, (hi - lo) / (1.0 + std::abs(mean)));
    }

    if (reference) {
        const MomentSequence ref = moments_from_decomposition(*reference, 2 * d + 2);
        rep.reference_trace = build_moment_matrix(ref, d + 1).matrix.trace();
    }

    if (sol.status == SdpStatus::primal_infeasible)
        return rep;

    const RankInfo ri = moment_rank(sol.X, opts.rank_tol);
    rep.rank = ri.rank;
    rep.equilibrated_singular_values = ri.singular_values;
    rep.flatness = check_flat_extension(rep.X_scaled.truncated(d), rep.X_scaled, opts.rank_tol);
    rep.rank_lower = rep.flatness.rank_lower;

    if (rep.flatness.flat && sol.status == SdpStatus::optimal) {
        try {
            ExtractionOptions eo;
            eo.rel_tol = opts.rank_tol;
            eo.seed = opts.seed;
            const Decomposition scaled = extract_points(rep.X_scaled, rep.rank, eo);
            rep.decomposition = Decomposition(scaled.points() * rep.scale, scaled.weights());
            if (p)
                rep.verification = verify_decomposition(*p, *rep.decomposition, opts.verify_tol);
        } catch (const std::exception &e) {
            rep.extraction_error = e.what();
        }
    }
    return rep;
}

} // namespace gramian
