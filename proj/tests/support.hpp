#pragma once

#include "gramian/certificates.hpp"

#include <Eigen/Dense>

#include <limits>
#include <random>
#include <vector>

namespace testing {

inline double rel_diff(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

// Small real points with positive weights, not integral.
inline gramian::Decomposition random_real_decomposition(int n, int r, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> coord(-2.0, 2.0), weight(0.5, 2.0);
    Eigen::MatrixXd pts(r, n);
    Eigen::VectorXd w(r);
    for (int t = 0; t < r; ++t) {
        for (int k = 0; k < n; ++k)
            pts(t, k) = coord(rng);
        w(t) = weight(rng);
    }
    return gramian::Decomposition(pts, w);
}

inline Eigen::MatrixXd random_symmetric(int size, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j <= i; ++j)
            a(i, j) = a(j, i) = g(rng);
    return a;
}

inline Eigen::SparseMatrix<double> to_sparse(const Eigen::MatrixXd &a) { return a.sparseView(); }

inline gramian::Decomposition planar_rank9(bool optimal) {
    const int a[9][2] = {{78, 87}, {-45, 78}, {-38, 32}, {91, -76}, {-18, 94}, {-22, -22}, {27, 99}, {52, -16}, {-58, -87}};
    const int b[9][2] = {{-43, -34}, {-18, -10}, {-19, 23}, {52, 72}, {-66, -76}, {48, -15}, {35, 45}, {-83, -72}, {51, 22}};
    Eigen::MatrixXd pts(9, 2);
    for (int t = 0; t < 9; ++t)
        for (int k = 0; k < 2; ++k)
            pts(t, k) = optimal ? a[t][k] : b[t][k];
    return gramian::Decomposition(pts, Eigen::VectorXd::Ones(9));
}

// Largest coordinatewise relative error after greedily pairing each expected point with the
// closest unused found point; infinity when the counts differ.
inline double point_match_error(const Eigen::MatrixXd &found, const Eigen::MatrixXd &expected) {
    if (found.rows() != expected.rows() || found.cols() != expected.cols())
        return std::numeric_limits<double>::infinity();
    std::vector<bool> used(static_cast<std::size_t>(found.rows()), false);
    double worst = 0;
    for (Eigen::Index i = 0; i < expected.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index arg = -1;
        for (Eigen::Index j = 0; j < found.rows(); ++j) {
            if (used[static_cast<std::size_t>(j)])
                continue;
            double e = 0;
            for (Eigen::Index k = 0; k < expected.cols(); ++k)
                e = std::max(e, std::abs(found(j, k) - expected(i, k)) / std::max(1.0, std::abs(expected(i, k))));
            if (e < best) {
                best = e;
                arg = j;
            }
        }
        used[static_cast<std::size_t>(arg)] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace testing
