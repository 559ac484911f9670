#pragma once

#include "gramian/monomial.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace gramian {

/// Real polynomial in n variables stored densely over MonomialBasis(n, degree_bound).
/// coefficient(β) is the actual coefficient of x^β.
class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(MonomialBasis basis, Eigen::VectorXd coefficients);
    static Polynomial zero(int n, int degree_bound);

    int n() const { return basis_.n(); }
    int degree_bound() const { return basis_.max_degree(); }
    const MonomialBasis &basis() const { return basis_; }
    const Eigen::VectorXd &coefficients() const { return coeffs_; }
    Eigen::VectorXd &coefficients() { return coeffs_; }

    /// Zero for monomials outside the basis.
    double coefficient(const MultiIndex &beta) const;
    void set_coefficient(const MultiIndex &beta, double value);

    /// Same polynomial over a larger (or equal) degree bound.
    Polynomial promoted(int degree_bound) const;
    double evaluate(std::span<const double> x) const;

  private:
    MonomialBasis basis_;
    Eigen::VectorXd coeffs_;
};

/// Product of two polynomials, with degree bound equal to the sum of the operands' bounds.
Polynomial multiply(const Polynomial &a, const Polynomial &b);

/// Order-D symmetric tensor of dimension n+1, one stored value per index multiset.
///
/// A multiset of indices in {0..n} is identified with its count vector, a degree-D monomial in
/// n+1 variables; values are stored in graded-lex order of those monomials.
class SymmetricTensor {
  public:
    SymmetricTensor(int order, int dimension);

    /// Builds from a full dense array in row-major index order (size dimension^order).
    /// Throws std::invalid_argument when the array is not permutation invariant.
    static SymmetricTensor from_dense(int order, int dimension, std::span<const double> entries,
                                      double tol = 0.0);
    std::vector<double> to_dense() const;

    int order() const { return order_; }
    int dimension() const { return dimension_; }

    double at(std::span<const int> index) const;
    void set(std::span<const int> index, double value);

    /// Value keyed by count vector (entry k = multiplicity of index k); total must equal order().
    double at_counts(const MultiIndex &counts) const;
    void set_counts(const MultiIndex &counts, double value);

    bool operator==(const SymmetricTensor &other) const = default;

  private:
    MultiIndex counts_of(std::span<const int> index) const;

    int order_;
    int dimension_;
    std::vector<MultiIndex> keys_;
    std::vector<double> values_;
};

/// Weighted point set z_1..z_r in R^n with λ_t > 0: p = Σ λ_t (1 + z_t·x)^{2d}.
class Decomposition {
  public:
    Decomposition() = default;
    /// Throws std::invalid_argument on non-positive weights, repeated points or shape mismatch.
    Decomposition(Eigen::MatrixXd points, Eigen::VectorXd weights);

    int rank() const { return static_cast<int>(points_.rows()); }
    int n() const { return static_cast<int>(points_.cols()); }
    const Eigen::MatrixXd &points() const { return points_; }
    const Eigen::VectorXd &weights() const { return weights_; }

    /// All coordinates and weights are integers small enough for exact 128-bit moment sums.
    bool is_integral() const;

  private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd weights_;
};

/// Values m_α for every α in MonomialBasis(n, max_degree).
struct MomentSequence {
    MonomialBasis basis;
    Eigen::VectorXd values;

    int n() const { return basis.n(); }
    int max_degree() const { return basis.max_degree(); }
    /// Throws std::out_of_range when |α| exceeds max_degree.
    double operator()(const MultiIndex &alpha) const { return values(static_cast<Eigen::Index>(basis.index_of(alpha))); }
};

Polynomial tensor_to_poly(const SymmetricTensor &tensor);
SymmetricTensor poly_to_tensor(const Polynomial &p, int order);

/// Σ_t λ_t (1 + z_t·x)^{2d}, expanded by repeated multiplication with the linear forms.
/// Integral decompositions are expanded in exact integer arithmetic.
Polynomial poly_from_decomposition(const Decomposition &dec, int d);

/// m_α = coeff(p, x^α) / multinomial(2d, α) for |α| <= 2d.
MomentSequence moments_from_poly(const Polynomial &p, int d);

/// m_α = Σ_t λ_t z_t^α for |α| <= max_degree (exact for integral decompositions).
MomentSequence moments_from_decomposition(const Decomposition &dec, int max_degree);

struct DecompositionCheck {
    bool matches = false;
    double max_residual = 0.0;
};

/// Compares coefficients of p against the expansion of dec; passes when
/// max |Δcoeff| <= tol * (1 + max |coeff(p)|). Throws std::invalid_argument on dimension mismatch.
DecompositionCheck verify_decomposition(const Polynomial &p, const Decomposition &dec, double tol);

/// r distinct points with integer coordinates uniform in [-range, range] and unit weights.
/// Deterministic in seed. Throws std::invalid_argument when r distinct points cannot exist.
Decomposition random_integer_decomposition(int n, int r, std::uint64_t seed, int range = 99);

} // namespace gramian
