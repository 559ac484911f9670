#include "gramian/poly_tensor.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace gramian;

namespace {

Polynomial univariate(std::initializer_list<double> c) {
    Polynomial p = Polynomial::zero(1, static_cast<int>(c.size()) - 1);
    int k = 0;
    for (double v : c)
        p.set_coefficient(MultiIndex{k++}, v);
    return p;
}

Decomposition points1(std::initializer_list<double> z, std::initializer_list<double> w) {
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(z.size()), 1);
    Eigen::VectorXd wt(static_cast<Eigen::Index>(w.size()));
    Eigen::Index i = 0;
    for (double v : z)
        pts(i++, 0) = v;
    i = 0;
    for (double v : w)
        wt(i++) = v;
    return Decomposition(pts, wt);
}

// Brute force over all index tuples: coefficient of x^β is the sum of A over tuples whose
// counts of indices 1..n equal β.
Eigen::VectorXd brute_force_coefficients(const SymmetricTensor &a) {
    const int n = a.dimension() - 1, D = a.order();
    MonomialBasis basis(n, D);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    std::vector<int> idx(static_cast<std::size_t>(D), 0);
    for (;;) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        for (int v : idx)
            if (v > 0)
                ++e[static_cast<std::size_t>(v - 1)];
        out(static_cast<Eigen::Index>(basis.index_of(MultiIndex(e)))) += a.at(idx);
        int k = 0;
        while (k < D && ++idx[static_cast<std::size_t>(k)] > n)
            idx[static_cast<std::size_t>(k++)] = 0;
        if (k == D)
            break;
    }
    return out;
}

SymmetricTensor random_tensor(int order, int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    SymmetricTensor a(order, dim);
    const MonomialBasis b(dim, order);
    for (const auto &c : b.homogeneous(order))
        a.set_counts(c, g(rng));
    return a;
}

} // namespace

TEST_CASE("tensor_to_poly examples") {
    const std::vector<double> ones{1, 1, 1, 1};
    const Polynomial p = tensor_to_poly(SymmetricTensor::from_dense(2, 2, ones));
    CHECK(p.coefficient(MultiIndex{0}) == 1);
    CHECK(p.coefficient(MultiIndex{1}) == 2);
    CHECK(p.coefficient(MultiIndex{2}) == 1);

    SymmetricTensor e0(4, 3);
    e0.set_counts(MultiIndex{4, 0, 0}, 1.0);
    const Polynomial one = tensor_to_poly(e0);
    CHECK(one.coefficient(MultiIndex{0, 0}) == 1);
    CHECK(one.coefficients().cwiseAbs().sum() == 1);
}

TEST_CASE("tensor_to_poly agrees with brute-force tuple sums") {
    std::mt19937_64 rng(11);
    for (int dim = 2; dim <= 3; ++dim)
        for (int order = 1; order <= 4; ++order) {
            const SymmetricTensor a = random_tensor(order, dim, rng);
            const Eigen::VectorXd want = brute_force_coefficients(a);
            CHECK((tensor_to_poly(a).coefficients() - want).cwiseAbs().maxCoeff() <= 1e-12 * (1 + want.cwiseAbs().maxCoeff()));
        }
}

TEST_CASE("tensor polynomial round trip") {
    std::mt19937_64 rng(12);
    for (int dim = 2; dim <= 4; ++dim)
        for (int order = 1; order <= 5; ++order) {
            const SymmetricTensor a = random_tensor(order, dim, rng);
            const SymmetricTensor back = poly_to_tensor(tensor_to_poly(a), order);
            const auto x = a.to_dense(), y = back.to_dense();
            double err = 0, scale = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                err = std::max(err, std::abs(x[i] - y[i]));
                scale = std::max(scale, std::abs(x[i]));
            }
            CHECK(err <= 4 * std::numeric_limits<double>::epsilon() * scale);
        }
}

TEST_CASE("symmetric tensor entries are permutation invariant") {
    SymmetricTensor a(3, 3);
    const std::vector<int> i{2, 0, 1};
    a.set(i, 5.0);
    std::vector<int> p{0, 1, 2};
    do
        CHECK(a.at(p) == 5.0);
    while (std::next_permutation(p.begin(), p.end()));

    const std::vector<double> asym{1, 2, 3, 1};
    CHECK_THROWS_AS(SymmetricTensor::from_dense(2, 2, asym), std::invalid_argument);
}

TEST_CASE("poly_from_decomposition examples") {
    Decomposition origin(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
    const Polynomial p1 = poly_from_decomposition(origin, 1);
    CHECK(p1.coefficient(MultiIndex{0}) == 1);
    CHECK(p1.coefficients().cwiseAbs().sum() == 1);

    const Polynomial p2 = poly_from_decomposition(points1({1}, {1}), 1);
    CHECK(p2.coefficients().isApprox(univariate({1, 2, 1}).coefficients()));

    const Polynomial p3 = poly_from_decomposition(points1({1, -1}, {1, 1}), 1);
    CHECK(p3.coefficients().isApprox(univariate({2, 0, 2}).coefficients()));
}

TEST_CASE("single point expansion matches the binomial theorem") {
    const double z = 1.5;
    const int d = 3;
    const Polynomial p = poly_from_decomposition(points1({z}, {2.0}), d);
    for (int k = 0; k <= 2 * d; ++k)
        CHECK(p.coefficient(MultiIndex{k}) == doctest::Approx(2.0 * static_cast<double>(binomial(2 * d, k)) * std::pow(z, k)).epsilon(1e-14));
}

TEST_CASE("moments_from_poly examples") {
    const MomentSequence m = moments_from_poly(univariate({1, 2, 1}), 1);
    CHECK(m(MultiIndex{0}) == 1);
    CHECK(m(MultiIndex{1}) == 1);
    CHECK(m(MultiIndex{2}) == 1);

    Polynomial one = Polynomial::zero(2, 2);
    one.set_coefficient(MultiIndex{0, 0}, 1);
    const MomentSequence m1 = moments_from_poly(one, 1);
    CHECK(m1.values(0) == 1);
    CHECK(m1.values.tail(m1.values.size() - 1).isZero());
}

TEST_CASE("moments_from_decomposition examples") {
    const MomentSequence a = moments_from_decomposition(points1({2}, {1}), 3);
    CHECK(a.values.isApprox(Eigen::Vector4d(1, 2, 4, 8)));
    const MomentSequence b = moments_from_decomposition(points1({1, 2}, {1, 1}), 2);
    CHECK(b.values.isApprox(Eigen::Vector3d(2, 3, 5)));
}

TEST_CASE("moments from the polynomial and from the points agree") {
    std::mt19937_64 rng(13);
    for (int n = 1; n <= 3; ++n)
        for (int d = 1; d <= 3; ++d) {
            const Decomposition dec = testing::random_real_decomposition(n, 4, rng);
            const MomentSequence a = moments_from_poly(poly_from_decomposition(dec, d), d);
            const MomentSequence b = moments_from_decomposition(dec, 2 * d);
            CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-10 * b.values.cwiseAbs().maxCoeff());
            CHECK(b.values(0) == doctest::Approx(dec.weights().sum()).epsilon(1e-14));
        }
    const Decomposition ex = testing::planar_rank9(true);
    REQUIRE(ex.is_integral());
    const MomentSequence a = moments_from_poly(poly_from_decomposition(ex, 3), 3);
    const MomentSequence b = moments_from_decomposition(ex, 6);
    for (Eigen::Index i = 0; i < a.values.size(); ++i)
        CHECK(a.values(i) == doctest::Approx(b.values(i)).epsilon(1e-12));
}

TEST_CASE("verify_decomposition examples") {
    CHECK(verify_decomposition(univariate({1, 2, 1}), points1({1}, {1}), 1e-12).matches);
    const DecompositionCheck off = verify_decomposition(univariate({1, 2, 1}), points1({0.999}, {1}), 1e-12);
    CHECK_FALSE(off.matches);
    CHECK(off.max_residual > 1e-3);

    const Decomposition ex = testing::planar_rank9(true);
    CHECK(verify_decomposition(poly_from_decomposition(ex, 3), ex, 1e-12).matches);
    CHECK_THROWS_AS(verify_decomposition(univariate({1, 2, 1}), ex, 1e-12), std::invalid_argument);
}

TEST_CASE("decomposition type invariants") {
    CHECK_THROWS_AS(points1({1, 1}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(points1({1, 2}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(points1({1, 2}, {1}), std::invalid_argument);
}

TEST_CASE("random integer decompositions are deterministic and distinct") {
    const Decomposition a = random_integer_decomposition(2, 8, 99), b = random_integer_decomposition(2, 8, 99);
    CHECK(a.points() == b.points());
    CHECK(a.is_integral());
    CHECK(a.points().cwiseAbs().maxCoeff() <= 99);
    CHECK_FALSE(random_integer_decomposition(2, 8, 100).points() == a.points());
    CHECK_THROWS_AS(random_integer_decomposition(1, 4, 1, 1), std::invalid_argument);
}
