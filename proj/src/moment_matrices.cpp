#include "gramian/moment_matrices.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace gramian {

MomentMatrix MomentMatrix::truncated(int lower) const {
    if (lower < 0 || lower > degree())
        throw std::invalid_argument("MomentMatrix::truncated: invalid degree");
    MonomialBasis b(n(), lower);
    const auto k = static_cast<Eigen::Index>(b.size());
    return {std::move(b), matrix.topLeftCorner(k, k)};
}

MomentMatrix build_moment_matrix(const MomentSequence &m, int degree) {
    if (degree < 0)
        throw std::invalid_argument("build_moment_matrix: negative degree");
    if (m.max_degree() < 2 * degree)
        throw std::invalid_argument("build_moment_matrix: missing moments above degree " +
                                    std::to_string(m.max_degree()));
    MonomialBasis basis(m.n(), degree);
    const auto size = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd a(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = i; j < size; ++j)
            a(i, j) = a(j, i) = m(basis[static_cast<std::size_t>(i)] + basis[static_cast<std::size_t>(j)]);
    return {std::move(basis), std::move(a)};
}

Eigen::MatrixXd build_vandermonde(const Eigen::MatrixXd &points, int degree) {
    const MonomialBasis basis(static_cast<int>(points.cols()), degree);
    Eigen::MatrixXd v(points.rows(), static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index t = 0; t < points.rows(); ++t) {
        v(t, 0) = 1.0;
        // Each monomial of positive degree is x_k times an earlier monomial.
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (int k = 0; k < basis.n(); ++k) {
                const std::size_t j = basis.shift(i, k);
                if (j != MonomialBasis::npos)
                    v(t, static_cast<Eigen::Index>(j)) = v(t, static_cast<Eigen::Index>(i)) * points(t, k);
            }
    }
    return v;
}

RankInfo numerical_rank(const Eigen::MatrixXd &a, double rel_tol) {
    RankInfo info;
    if (a.size() == 0) {
        info.singular_values.resize(0);
        return info;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    info.singular_values = svd.singularValues();
    const double top = info.singular_values.size() ? info.singular_values(0) : 0.0;
    if (top <= 0.0)
        return info;
    for (Eigen::Index i = 0; i < info.singular_values.size(); ++i)
        if (info.singular_values(i) > rel_tol * top)
            ++info.rank;
    return info;
}

Eigen::MatrixXd equilibrate(const Eigen::MatrixXd &a, double floor) {
    const double top = a.rows() ? a.diagonal().maxCoeff() : 0.0;
    Eigen::VectorXd scale(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        scale(i) = a(i, i) > floor * top && a(i, i) > 0.0 ? 1.0 / std::sqrt(a(i, i)) : 1.0;
    return scale.asDiagonal() * a * scale.asDiagonal();
}

RankInfo moment_rank(const Eigen::MatrixXd &m, double rel_tol) {
    return numerical_rank(equilibrate(m, rel_tol), rel_tol);
}

FlatnessVerdict check_flat_extension(const MomentMatrix &lower, const MomentMatrix &upper, double rel_tol) {
    if (lower.n() != upper.n() || lower.degree() > upper.degree())
        throw std::invalid_argument("check_flat_extension: upper matrix does not extend lower");
    const Eigen::Index k = lower.matrix.rows();
    const double scale = std::max(1.0, lower.matrix.cwiseAbs().maxCoeff());
    // Shared entries must agree to working precision; rel_tol governs rank decisions only.
    const double mismatch = (upper.matrix.topLeftCorner(k, k) - lower.matrix).cwiseAbs().maxCoeff();
    if (mismatch > 1e-9 * scale)
        throw std::invalid_argument("check_flat_extension: extension mismatch on shared block");

    FlatnessVerdict v;
    v.rank_lower = moment_rank(lower, rel_tol).rank;
    v.rank_upper = moment_rank(upper, rel_tol).rank;
    const MomentMatrix uniform = rescale_moments(upper, std::max(1.0, moment_scale(upper)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(equilibrate(uniform.matrix, rel_tol), Eigen::EigenvaluesOnly);
    const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    v.min_eigenvalue = top > 0.0 ? eig.eigenvalues().minCoeff() / top : eig.eigenvalues().minCoeff();
    v.positive_semidefinite = eig.eigenvalues().minCoeff() >= -rel_tol * top;
    v.flat = v.positive_semidefinite && v.rank_lower == v.rank_upper;
    return v;
}

KernelBasis kernel_extension(const Eigen::MatrixXd &vd, const Eigen::MatrixXd &vd1, double rel_tol) {
    const Eigen::Index r = vd.rows();
    if (vd1.rows() != r || vd1.cols() < vd.cols())
        throw std::invalid_argument("kernel_extension: Vandermonde shapes are inconsistent");
    const Eigen::Index dim_low = vd.cols();
    const Eigen::Index s = vd1.cols() - dim_low;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vd, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    int rank_low = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0))
            ++rank_low;
    if (rank_low < r)
        throw NumericalError("kernel_extension: V_d has rank " + std::to_string(rank_low) + " below the " +
                             std::to_string(r) + " points");
    if (numerical_rank(vd1, rel_tol).rank > rank_low)
        throw NumericalError("kernel_extension: rank grows from V_d to V_{d+1}");

    KernelBasis kb;
    kb.rank = rank_low;
    kb.low = svd.matrixV().rightCols(dim_low - r);

    // Minimum-norm solution of V_d F = W through the thin SVD of the full-row-rank V_d.
    const Eigen::MatrixXd w = vd1.rightCols(s);
    const Eigen::MatrixXd ur = svd.matrixU().leftCols(r);
    const Eigen::MatrixXd vr = svd.matrixV().leftCols(r);
    kb.normal_forms = vr * sv.head(r).cwiseInverse().asDiagonal() * (ur.transpose() * w);
    const double residual = (vd * kb.normal_forms - w).norm();
    if (residual > 1e-8 * (1.0 + w.norm()))
        throw NumericalError("kernel_extension: normal forms do not reproduce the degree d+1 columns");

    kb.full = Eigen::MatrixXd::Zero(dim_low + s, kb.low.cols() + s);
    kb.full.topLeftCorner(dim_low, kb.low.cols()) = kb.low;
    kb.full.topRightCorner(dim_low, s) = -kb.normal_forms;
    kb.full.bottomRightCorner(s, s).setIdentity();
    return kb;
}

double moment_scale(const MomentMatrix &m) {
    const int e = m.degree();
    if (e < 1 || !(m.matrix(0, 0) > 0.0))
        return 1.0;
    double s = 0.0;
    for (int k = 0; k < m.n(); ++k) {
        std::vector<int> pure(static_cast<std::size_t>(m.n()), 0);
        pure[static_cast<std::size_t>(k)] = e;
        const auto idx = static_cast<Eigen::Index>(m.basis.index_of(MultiIndex(std::move(pure))));
        const double ratio = m.matrix(idx, idx) / m.matrix(0, 0);
        if (ratio > 0.0)
            s = std::max(s, std::pow(ratio, 1.0 / (2.0 * e)));
    }
    return (s > 0.0 && std::isfinite(s)) ? s : 1.0;
}

RankInfo moment_rank(const MomentMatrix &m, double rel_tol) {
    return moment_rank(rescale_moments(m, std::max(1.0, moment_scale(m))).matrix, rel_tol);
}

MomentMatrix rescale_moments(const MomentMatrix &m, double s) {
    Eigen::VectorXd inv(m.matrix.rows());
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        inv(i) = std::pow(s, -m.basis[static_cast<std::size_t>(i)].degree());
    return {m.basis, inv.asDiagonal() * m.matrix * inv.asDiagonal()};
}

Decomposition extract_points(const MomentMatrix &upper, int r, const ExtractionOptions &opts) {
    const int top = upper.degree();
    if (top < 1)
        throw std::invalid_argument("extract_points: moment matrix degree must be at least 1");
    if (r < 1)
        throw std::invalid_argument("extract_points: rank must be positive");
    const int n = upper.n();
    const double s = moment_scale(upper);
    const MomentMatrix scaled = rescale_moments(upper, s);
    const Eigen::MatrixXd &m = scaled.matrix;
    const auto dim_low = static_cast<Eigen::Index>(upper.basis.offset(top));
    if (r > dim_low)
        throw NumericalError("extract_points: rank exceeds the number of degree <= d monomials");

    // Basis monomials B (degree <= d) by column pivoting on the degree <= d columns.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(equilibrate(m, opts.rel_tol).leftCols(dim_low));
    std::vector<Eigen::Index> chosen;
    for (Eigen::Index i = 0; i < r; ++i)
        chosen.push_back(qr.colsPermutation().indices()(i));
    std::sort(chosen.begin(), chosen.end());

    Eigen::MatrixXd mb(m.rows(), r);
    for (Eigen::Index j = 0; j < r; ++j)
        mb.col(j) = m.col(chosen[static_cast<std::size_t>(j)]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> solver(mb);
    if (solver.rank() < r)
        throw NumericalError("extract_points: selected basis columns are rank deficient");

    // Multiplication matrices: columns of M at x_k * b expressed in the columns at b.
    std::vector<Eigen::MatrixXd> mult;
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd shifted(m.rows(), r);
        for (Eigen::Index j = 0; j < r; ++j)
            shifted.col(j) = m.col(static_cast<Eigen::Index>(upper.basis.shift(static_cast<std::size_t>(chosen[static_cast<std::size_t>(j)]), k)));
        mult.push_back(solver.solve(shifted));
    }

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < n; ++k)
        combo += normal(rng) * mult[static_cast<std::size_t>(k)];

    Eigen::EigenSolver<Eigen::MatrixXd> es(combo);
    if (es.info() != Eigen::Success)
        throw NumericalError("extract_points: eigenvalue computation failed");
    const Eigen::VectorXcd lambda = es.eigenvalues();
    const double lam_scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    if (lambda.imag().cwiseAbs().maxCoeff() > opts.rel_tol * lam_scale)
        throw NumericalError("extract_points: complex eigenvalues (no real Gramian decomposition at this rank)");
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = i + 1; j < r; ++j)
            if (std::abs(lambda(i).real() - lambda(j).real()) <= 1e-12 * lam_scale)
                throw NumericalError("extract_points: repeated eigenvalues (defective multiplication structure)");
    const Eigen::MatrixXd p = es.eigenvectors().real();
    const Eigen::PartialPivLU<Eigen::MatrixXd> plu(p);

    Eigen::MatrixXd points(r, n);
    for (int k = 0; k < n; ++k) {
        const Eigen::MatrixXd diag = plu.solve(mult[static_cast<std::size_t>(k)] * p);
        points.col(k) = diag.diagonal();
    }

    // Weights from the first row of M (moments up to degree d+1) in least squares.
    const Eigen::MatrixXd v = build_vandermonde(points, top);
    const Eigen::VectorXd first = m.row(0).transpose();
    Eigen::VectorXd weights = v.transpose().colPivHouseholderQr().solve(first);
    const double wmax = weights.cwiseAbs().maxCoeff();
    for (Eigen::Index t = 0; t < r; ++t)
        if (!(weights(t) > opts.rel_tol * wmax))
            throw NumericalError("extract_points: non-positive recovered weight");
    return Decomposition(points * s, weights);
}

} // namespace gramian
