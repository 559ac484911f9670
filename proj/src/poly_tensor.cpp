#include "gramian/poly_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace gramian {

// ---------------------------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(MonomialBasis basis, Eigen::VectorXd coefficients)
    : basis_(std::move(basis)), coeffs_(std::move(coefficients)) {
    if (static_cast<std::size_t>(coeffs_.size()) != basis_.size())
        throw std::invalid_argument("Polynomial: coefficient count does not match basis size");
}

Polynomial Polynomial::zero(int n, int degree_bound) {
    MonomialBasis basis(n, degree_bound);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    return Polynomial(std::move(basis), std::move(c));
}

double Polynomial::coefficient(const MultiIndex &beta) const {
    auto pos = basis_.find(beta);
    return pos ? coeffs_(static_cast<Eigen::Index>(*pos)) : 0.0;
}

void Polynomial::set_coefficient(const MultiIndex &beta, double value) {
    coeffs_(static_cast<Eigen::Index>(basis_.index_of(beta))) = value;
}

Polynomial Polynomial::promoted(int degree_bound) const {
    if (degree_bound < this->degree_bound())
        throw std::invalid_argument("Polynomial::promoted: cannot lower the degree bound");
    Polynomial out = zero(n(), degree_bound);
    out.coeffs_.head(coeffs_.size()) = coeffs_;
    return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n())
        throw std::invalid_argument("Polynomial::evaluate: wrong point dimension");
    double acc = 0.0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        double term = coeffs_(static_cast<Eigen::Index>(i));
        if (term == 0.0)
            continue;
        for (int k = 0; k < n(); ++k)
            term *= std::pow(x[static_cast<std::size_t>(k)], basis_[i][k]);
        acc += term;
    }
    return acc;
}

Polynomial multiply(const Polynomial &a, const Polynomial &b) {
    if (a.n() != b.n())
        throw std::invalid_argument("multiply: variable count mismatch");
    Polynomial out = Polynomial::zero(a.n(), a.degree_bound() + b.degree_bound());
    const auto &ba = a.basis();
    const auto &bb = b.basis();
    for (std::size_t i = 0; i < ba.size(); ++i) {
        const double ca = a.coefficients()(static_cast<Eigen::Index>(i));
        if (ca == 0.0)
            continue;
        for (std::size_t j = 0; j < bb.size(); ++j) {
            const double cb = b.coefficients()(static_cast<Eigen::Index>(j));
            if (cb == 0.0)
                continue;
            out.coefficients()(static_cast<Eigen::Index>(out.basis().index_of(ba[i] + bb[j]))) += ca * cb;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// SymmetricTensor

SymmetricTensor::SymmetricTensor(int order, int dimension) : order_(order), dimension_(dimension) {
    if (order < 0 || dimension < 1)
        throw std::invalid_argument("SymmetricTensor: invalid shape");
    keys_ = homogeneous_monomials(dimension, order);
    std::sort(keys_.begin(), keys_.end());
    values_.assign(keys_.size(), 0.0);
}

MultiIndex SymmetricTensor::counts_of(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != order_)
        throw std::invalid_argument("SymmetricTensor: index length differs from order");
    std::vector<int> counts(static_cast<std::size_t>(dimension_), 0);
    for (int i : index) {
        if (i < 0 || i >= dimension_)
            throw std::out_of_range("SymmetricTensor: index out of range");
        ++counts[static_cast<std::size_t>(i)];
    }
    return MultiIndex(std::move(counts));
}

double SymmetricTensor::at_counts(const MultiIndex &counts) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), counts);
    if (it == keys_.end() || *it != counts)
        throw std::out_of_range("SymmetricTensor: count vector " + counts.to_string() + " invalid");
    return values_[static_cast<std::size_t>(it - keys_.begin())];
}

void SymmetricTensor::set_counts(const MultiIndex &counts, double value) {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), counts);
    if (it == keys_.end() || *it != counts)
        throw std::out_of_range("SymmetricTensor: count vector " + counts.to_string() + " invalid");
    values_[static_cast<std::size_t>(it - keys_.begin())] = value;
}

double SymmetricTensor::at(std::span<const int> index) const { return at_counts(counts_of(index)); }

void SymmetricTensor::set(std::span<const int> index, double value) { set_counts(counts_of(index), value); }

namespace {

// Row-major tuple enumeration over {0..dim-1}^order.
template <class F>
void for_each_index(int order, int dim, F &&f) {
    std::vector<int> idx(static_cast<std::size_t>(order), 0);
    while (true) {
        f(std::span<const int>(idx));
        int k = order - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == dim) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0)
            return;
    }
}

} // namespace

SymmetricTensor SymmetricTensor::from_dense(int order, int dimension, std::span<const double> entries, double tol) {
    std::size_t expected = 1;
    for (int i = 0; i < order; ++i)
        expected *= static_cast<std::size_t>(dimension);
    if (entries.size() != expected)
        throw std::invalid_argument("SymmetricTensor::from_dense: wrong number of entries");
    SymmetricTensor t(order, dimension);
    std::vector<bool> seen(t.values_.size(), false);
    std::size_t flat = 0;
    for_each_index(order, dimension, [&](std::span<const int> idx) {
        const MultiIndex c = t.counts_of(idx);
        const auto pos = static_cast<std::size_t>(std::lower_bound(t.keys_.begin(), t.keys_.end(), c) - t.keys_.begin());
        const double v = entries[flat++];
        if (!seen[pos]) {
            t.values_[pos] = v;
            seen[pos] = true;
        } else if (std::abs(t.values_[pos] - v) > tol * (1.0 + std::abs(v))) {
            throw std::invalid_argument("SymmetricTensor::from_dense: tensor is not symmetric");
        }
    });
    return t;
}

std::vector<double> SymmetricTensor::to_dense() const {
    std::vector<double> out;
    for_each_index(order_, dimension_, [&](std::span<const int> idx) { out.push_back(at(idx)); });
    return out;
}

Polynomial tensor_to_poly(const SymmetricTensor &tensor) {
    const int n = tensor.dimension() - 1;
    const int D = tensor.order();
    if (n < 1)
        throw std::invalid_argument("tensor_to_poly: tensor dimension must be at least 2");
    Polynomial p = Polynomial::zero(n, D);
    const auto &basis = p.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const MultiIndex &beta = basis[i];
        std::vector<int> counts{D - beta.degree()};
        counts.insert(counts.end(), beta.exponents().begin(), beta.exponents().end());
        p.coefficients()(static_cast<Eigen::Index>(i)) =
            static_cast<double>(multinomial(D, beta)) * tensor.at_counts(MultiIndex(std::move(counts)));
    }
    return p;
}

SymmetricTensor poly_to_tensor(const Polynomial &p, int order) {
    if (order < p.degree_bound())
        throw std::invalid_argument("poly_to_tensor: order below polynomial degree bound");
    SymmetricTensor t(order, p.n() + 1);
    const Polynomial q = p.promoted(order);
    const auto &basis = q.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const MultiIndex &beta = basis[i];
        std::vector<int> counts{order - beta.degree()};
        counts.insert(counts.end(), beta.exponents().begin(), beta.exponents().end());
        t.set_counts(MultiIndex(std::move(counts)),
                     q.coefficients()(static_cast<Eigen::Index>(i)) / static_cast<double>(multinomial(order, beta)));
    }
    return t;
}

// ---------------------------------------------------------------------------------------------
// Decomposition

Decomposition::Decomposition(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.rows() != weights_.size())
        throw std::invalid_argument("Decomposition: point and weight counts differ");
    if (points_.rows() < 1 || points_.cols() < 1)
        throw std::invalid_argument("Decomposition: needs at least one point in at least one variable");
    for (Eigen::Index t = 0; t < weights_.size(); ++t)
        if (!(weights_(t) > 0.0) || !std::isfinite(weights_(t)))
            throw std::invalid_argument("Decomposition: weights must be strictly positive");
    if (!points_.allFinite())
        throw std::invalid_argument("Decomposition: non-finite coordinate");
    std::set<std::vector<double>> distinct;
    for (Eigen::Index t = 0; t < points_.rows(); ++t) {
        std::vector<double> row(static_cast<std::size_t>(points_.cols()));
        for (Eigen::Index k = 0; k < points_.cols(); ++k)
            row[static_cast<std::size_t>(k)] = points_(t, k);
        if (!distinct.insert(row).second)
            throw std::invalid_argument("Decomposition: points must be pairwise distinct");
    }
}

bool Decomposition::is_integral() const {
    auto integral = [](double v) { return std::nearbyint(v) == v && std::abs(v) < 1e9; };
    for (Eigen::Index i = 0; i < points_.size(); ++i)
        if (!integral(points_.data()[i]))
            return false;
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
        if (!integral(weights_(i)))
            return false;
    return true;
}

namespace {

using Int128 = __int128;

// Worst-case magnitude of Σ λ (1 + Σ|z_k|)^deg; exact sums stay well inside 2^126.
bool fits_int128(const Decomposition &dec, int degree) {
    double log_bound = 0.0;
    for (int t = 0; t < dec.rank(); ++t) {
        const double l1 = 1.0 + dec.points().row(t).cwiseAbs().sum();
        log_bound = std::max(log_bound, std::log2(dec.weights()(t)) + degree * std::log2(l1));
    }
    return log_bound + std::log2(static_cast<double>(dec.rank())) < 120.0;
}

template <class T>
std::vector<T> expand_linear_power(const MonomialBasis &basis, const std::vector<T> &z, int power) {
    std::vector<T> c(basis.size(), T(0));
    c[0] = T(1);
    for (int step = 0; step < power; ++step) {
        std::vector<T> next(basis.size(), T(0));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (c[i] == T(0))
                continue;
            next[i] += c[i];
            for (int k = 0; k < basis.n(); ++k) {
                const std::size_t j = basis.shift(i, k);
                if (j != MonomialBasis::npos)
                    next[j] += z[static_cast<std::size_t>(k)] * c[i];
            }
        }
        c = std::move(next);
    }
    return c;
}

} // namespace

Polynomial poly_from_decomposition(const Decomposition &dec, int d) {
    if (d < 0)
        throw std::invalid_argument("poly_from_decomposition: negative d");
    const int D = 2 * d;
    Polynomial p = Polynomial::zero(dec.n(), D);
    const auto &basis = p.basis();
    if (dec.is_integral() && fits_int128(dec, D)) {
        std::vector<Int128> acc(basis.size(), 0);
        for (int t = 0; t < dec.rank(); ++t) {
            std::vector<Int128> z(static_cast<std::size_t>(dec.n()));
            for (int k = 0; k < dec.n(); ++k)
                z[static_cast<std::size_t>(k)] = static_cast<Int128>(dec.points()(t, k));
            const auto c = expand_linear_power(basis, z, D);
            const auto w = static_cast<Int128>(dec.weights()(t));
            for (std::size_t i = 0; i < c.size(); ++i)
                acc[i] += w * c[i];
        }
        for (std::size_t i = 0; i < acc.size(); ++i)
            p.coefficients()(static_cast<Eigen::Index>(i)) = static_cast<double>(acc[i]);
        return p;
    }
    for (int t = 0; t < dec.rank(); ++t) {
        std::vector<double> z(static_cast<std::size_t>(dec.n()));
        for (int k = 0; k < dec.n(); ++k)
            z[static_cast<std::size_t>(k)] = dec.points()(t, k);
        const auto c = expand_linear_power(basis, z, D);
        for (std::size_t i = 0; i < c.size(); ++i)
            p.coefficients()(static_cast<Eigen::Index>(i)) += dec.weights()(t) * c[i];
    }
    return p;
}

MomentSequence moments_from_poly(const Polynomial &p, int d) {
    if (p.degree_bound() > 2 * d)
        throw std::invalid_argument("moments_from_poly: polynomial degree exceeds 2d");
    const Polynomial q = p.promoted(2 * d);
    MomentSequence m{q.basis(), Eigen::VectorXd(q.coefficients().size())};
    for (std::size_t i = 0; i < m.basis.size(); ++i)
        m.values(static_cast<Eigen::Index>(i)) =
            q.coefficients()(static_cast<Eigen::Index>(i)) / static_cast<double>(multinomial(2 * d, m.basis[i]));
    return m;
}

MomentSequence moments_from_decomposition(const Decomposition &dec, int max_degree) {
    MonomialBasis basis(dec.n(), max_degree);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    if (dec.is_integral() && fits_int128(dec, max_degree)) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            Int128 acc = 0;
            for (int t = 0; t < dec.rank(); ++t) {
                Int128 term = static_cast<Int128>(dec.weights()(t));
                for (int k = 0; k < dec.n(); ++k)
                    for (int e = 0; e < basis[i][k]; ++e)
                        term *= static_cast<Int128>(dec.points()(t, k));
                acc += term;
            }
            values(static_cast<Eigen::Index>(i)) = static_cast<double>(acc);
        }
        return {std::move(basis), std::move(values)};
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double acc = 0.0;
        for (int t = 0; t < dec.rank(); ++t) {
            double term = dec.weights()(t);
            for (int k = 0; k < dec.n(); ++k)
                term *= std::pow(dec.points()(t, k), basis[i][k]);
            acc += term;
        }
        values(static_cast<Eigen::Index>(i)) = acc;
    }
    return {std::move(basis), std::move(values)};
}

DecompositionCheck verify_decomposition(const Polynomial &p, const Decomposition &dec, double tol) {
    if (p.n() != dec.n())
        throw std::invalid_argument("verify_decomposition: variable count mismatch");
    if (p.degree_bound() % 2 != 0)
        throw std::invalid_argument("verify_decomposition: polynomial degree bound must be even");
    const Polynomial q = poly_from_decomposition(dec, p.degree_bound() / 2);
    const double scale = 1.0 + p.coefficients().cwiseAbs().maxCoeff();
    const double residual = (p.coefficients() - q.coefficients()).cwiseAbs().maxCoeff();
    return {residual <= tol * scale, residual};
}

Decomposition random_integer_decomposition(int n, int r, std::uint64_t seed, int range) {
    if (n < 1 || r < 1 || range < 0)
        throw std::invalid_argument("random_integer_decomposition: invalid arguments");
    if (std::pow(2.0 * range + 1.0, n) < r)
        throw std::invalid_argument("random_integer_decomposition: not enough distinct integer points");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coord(-range, range);
    std::set<std::vector<int>> seen;
    Eigen::MatrixXd points(r, n);
    for (int t = 0; t < r;) {
        std::vector<int> z(static_cast<std::size_t>(n));
        for (auto &v : z)
            v = coord(rng);
        if (!seen.insert(z).second)
            continue;
        for (int k = 0; k < n; ++k)
            points(t, k) = z[static_cast<std::size_t>(k)];
        ++t;
    }
    return Decomposition(std::move(points), Eigen::VectorXd::Ones(r));
}

} // namespace gramian
