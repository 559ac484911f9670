#include "gramian/sdp.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace gramian;

namespace {

SdpProblem single(const Eigen::MatrixXd &a, double b) {
    SdpProblem p;
    p.size = static_cast<int>(a.rows());
    p.cost = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    p.constraints = {testing::to_sparse(a)};
    p.rhs = Eigen::VectorXd::Constant(1, b);
    return p;
}

// Primal feasible through a PSD X0, dual strictly feasible at y = 0 since C is positive definite.
SdpProblem random_feasible(int size, int m, std::mt19937_64 &rng) {
    SdpProblem p;
    p.size = size;
    const Eigen::MatrixXd b = testing::random_symmetric(size, rng);
    const Eigen::MatrixXd x0 = b * b.transpose() / size;
    const Eigen::MatrixXd c = testing::random_symmetric(size, rng);
    p.cost = c * c.transpose() / size + Eigen::MatrixXd::Identity(size, size);
    p.rhs.resize(m);
    for (int i = 0; i < m; ++i) {
        const Eigen::MatrixXd a = testing::random_symmetric(size, rng);
        p.constraints.push_back(testing::to_sparse(a));
        p.rhs(i) = (a.cwiseProduct(x0)).sum();
    }
    return p;
}

} // namespace

TEST_CASE("forced diagonal entry") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 1;
    const SdpProblem p = single(a, 1);
    const SdpSolution s = solve_sdp(p);
    REQUIRE(s.status == SdpStatus::optimal);
    CHECK(s.primal_objective == doctest::Approx(1).epsilon(1e-7));
    CHECK((s.X - Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()).norm() <= 1e-6);

    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2);
    x(0, 0) = 1;
    Eigen::MatrixXd sl = Eigen::MatrixXd::Zero(2, 2);
    sl(1, 1) = 1;
    CHECK(check_optimality_pair(x, Eigen::VectorXd::Ones(1), sl, p, 1e-12).optimal_pair);
    const OptimalityReport bad = check_optimality_pair(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(1),
                                                       Eigen::MatrixXd::Identity(2, 2), p, 1e-6);
    CHECK_FALSE(bad.optimal_pair);
    CHECK(bad.complementarity == doctest::Approx(2));
}

TEST_CASE("off-diagonal constraint") {
    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 1, 0;
    const SdpSolution s = solve_sdp(single(a, 2));
    REQUIRE(s.status == SdpStatus::optimal);
    CHECK(s.primal_objective == doctest::Approx(2).epsilon(1e-7));
    CHECK((s.X - Eigen::MatrixXd::Ones(2, 2)).norm() <= 1e-6);
}

TEST_CASE("negative trace is infeasible") {
    const SdpSolution s = solve_sdp(single(Eigen::MatrixXd::Identity(2, 2), -1));
    CHECK(s.status == SdpStatus::primal_infeasible);
}

TEST_CASE("dependent constraints") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 1;
    SdpProblem p = single(a, 1);
    p.constraints.push_back(testing::to_sparse(2 * a));
    p.rhs = Eigen::Vector2d(1, 2);
    const SdpSolution s = solve_sdp(p);
    REQUIRE(s.status == SdpStatus::optimal);
    CHECK(s.dropped_constraints == 1);
    CHECK(s.y.size() == 2);
    CHECK(s.primal_objective == doctest::Approx(1).epsilon(1e-7));

    p.rhs = Eigen::Vector2d(1, 3);
    CHECK(solve_sdp(p).status == SdpStatus::primal_infeasible);
}

TEST_CASE("problem validation") {
    SdpProblem p = single(Eigen::MatrixXd::Identity(2, 2), 1);
    p.cost(0, 1) = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = single(Eigen::MatrixXd::Identity(2, 2), 1);
    p.constraints.clear();
    p.rhs.resize(0);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("random feasible problems: weak duality and complementarity") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 20; ++k) {
        const int size = 3 + k % 5, m = 2 + k % 7;
        const SdpProblem p = random_feasible(size, m, rng);
        const SdpSolution s = solve_sdp(p);
        CAPTURE(k);
        REQUIRE(s.status == SdpStatus::optimal);
        const OptimalityReport rep = check_optimality_pair(s.X, s.y, s.S, p, 1e-6);
        CHECK(rep.optimal_pair);
        // Weak duality at the returned iterate: <C,X> - b'y = <X,S> up to residuals.
        const double gap = s.primal_objective - s.dual_objective;
        CHECK(gap >= -1e-6 * (1 + std::abs(s.primal_objective)));
        CHECK(std::abs(gap - (s.X.cwiseProduct(s.S)).sum()) <= 1e-6 * (1 + std::abs(s.primal_objective)));
        CHECK(std::abs(gap) <= 1e-6 * (1 + std::abs(s.primal_objective)));
    }
}

TEST_CASE("solution does not depend on constraint order") {
    std::mt19937_64 rng(32);
    SdpProblem p = random_feasible(5, 6, rng);
    const SdpSolution a = solve_sdp(p);
    std::reverse(p.constraints.begin(), p.constraints.end());
    p.rhs.reverseInPlace();
    const SdpSolution b = solve_sdp(p);
    REQUIRE(a.status == SdpStatus::optimal);
    REQUIRE(b.status == SdpStatus::optimal);
    CHECK(a.primal_objective == doctest::Approx(b.primal_objective).epsilon(1e-6));
    CHECK(testing::rel_diff(a.X, b.X) <= 1e-4);
}

TEST_CASE("deterministic") {
    std::mt19937_64 rng(33);
    const SdpProblem p = random_feasible(4, 5, rng);
    const SdpSolution a = solve_sdp(p), b = solve_sdp(p);
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("iteration limit reports numerical failure") {
    std::mt19937_64 rng(34);
    SdpOptions o;
    o.max_iter = 2;
    const SdpSolution s = solve_sdp(random_feasible(5, 5, rng), o);
    CHECK(s.status == SdpStatus::numerical_failure);
    CHECK(to_string(s.status) == "dual_unbounded_or_numerical_failure");
    CHECK(s.X.rows() == 5);
}

TEST_CASE("adjoint and inner are consistent") {
    std::mt19937_64 rng(35);
    std::vector<Eigen::SparseMatrix<double>> a;
    for (int i = 0; i < 3; ++i)
        a.push_back(testing::to_sparse(testing::random_symmetric(4, rng)));
    const Eigen::Vector3d y(0.5, -1, 2);
    const Eigen::MatrixXd x = testing::random_symmetric(4, rng);
    double lhs = 0;
    for (int i = 0; i < 3; ++i)
        lhs += y(i) * inner(a[static_cast<std::size_t>(i)], x);
    CHECK(lhs == doctest::Approx(adjoint(a, y, 4).cwiseProduct(x).sum()).epsilon(1e-12));
}
