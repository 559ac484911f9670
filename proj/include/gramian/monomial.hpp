#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gramian {

/// Exponent vector of a monomial x^β in n variables.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exponents);
    MultiIndex(std::initializer_list<int> exponents);

    static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0)); }
    static MultiIndex unit(int n, int k);

    int size() const { return static_cast<int>(exps_.size()); }
    int degree() const { return degree_; }
    int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
    const std::vector<int> &exponents() const { return exps_; }

    MultiIndex operator+(const MultiIndex &other) const;
    /// Componentwise difference; nullopt when `other` does not divide *this.
    std::optional<MultiIndex> minus(const MultiIndex &other) const;
    bool divides(const MultiIndex &other) const;
    /// True when every exponent is even (x^β is a perfect square).
    bool is_even() const;

    bool operator==(const MultiIndex &other) const = default;
    std::strong_ordering operator<=>(const MultiIndex &other) const { return exps_ <=> other.exps_; }

    std::string to_string() const;

  private:
    std::vector<int> exps_;
    int degree_ = 0;
};

/// Graded lexicographic comparison: lower total degree first, then larger leading exponents first.
bool graded_lex_less(const MultiIndex &a, const MultiIndex &b);

/// All monomials of total degree <= max_degree in n variables, in graded lexicographic order.
///
/// The degree-k monomials occupy the contiguous range [offset(k), offset(k+1)), so the basis of a
/// lower degree is always a prefix of the basis of a higher one.
class MonomialBasis {
  public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    MonomialBasis() = default;
    MonomialBasis(int n, int max_degree);

    int n() const { return n_; }
    int max_degree() const { return max_degree_; }
    std::size_t size() const { return monomials_.size(); }
    const MultiIndex &operator[](std::size_t i) const { return monomials_[i]; }
    std::span<const MultiIndex> monomials() const { return monomials_; }

    /// First position of the degree-k block (k may be max_degree + 1, giving size()).
    std::size_t offset(int k) const;
    /// Number of monomials of degree exactly k.
    std::size_t count(int k) const { return offset(k + 1) - offset(k); }
    std::span<const MultiIndex> homogeneous(int k) const;

    std::optional<std::size_t> find(const MultiIndex &m) const;
    /// Position of m; throws std::out_of_range when m is not in the basis.
    std::size_t index_of(const MultiIndex &m) const;
    /// Position of monomial(i) * x_k, or npos when the product leaves the basis.
    std::size_t shift(std::size_t i, int k) const { return shift_[i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(k)]; }

    bool operator==(const MonomialBasis &other) const { return n_ == other.n_ && max_degree_ == other.max_degree_; }

  private:
    int n_ = 0;
    int max_degree_ = -1;
    std::vector<MultiIndex> monomials_;
    std::vector<std::size_t> offsets_;
    std::map<MultiIndex, std::size_t> lookup_;
    std::vector<std::size_t> shift_;
};

/// Monomials of degree exactly `degree` in n variables, graded-lex (i.e. lex-descending) order.
std::vector<MultiIndex> homogeneous_monomials(int n, int degree);

MonomialBasis enumerate_basis(int n, int degree);

/// Binomial coefficient C(n, k) in exact arithmetic; throws std::overflow_error past 64 bits.
std::uint64_t binomial(int n, int k);

/// D! / ((D-|α|)! α_1! ... α_n!) in exact arithmetic. Throws std::invalid_argument if |α| > D.
std::uint64_t multinomial(int D, const MultiIndex &alpha);

} // namespace gramian
