#include "gramian/monomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gramian {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
    for (int e : exps_) {
        if (e < 0)
            throw std::invalid_argument("MultiIndex: negative exponent");
        degree_ += e;
    }
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents) : MultiIndex(std::vector<int>(exponents)) {}

MultiIndex MultiIndex::unit(int n, int k) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e.at(static_cast<std::size_t>(k)) = 1;
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex &other) const {
    if (other.size() != size())
        throw std::invalid_argument("MultiIndex: variable count mismatch");
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += other.exps_[i];
    return MultiIndex(std::move(e));
}

std::optional<MultiIndex> MultiIndex::minus(const MultiIndex &other) const {
    if (!other.divides(*this))
        return std::nullopt;
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] -= other.exps_[i];
    return MultiIndex(std::move(e));
}

bool MultiIndex::divides(const MultiIndex &other) const {
    if (other.size() != size())
        return false;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] > other.exps_[i])
            return false;
    return true;
}

bool MultiIndex::is_even() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e % 2 == 0; });
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < exps_.size(); ++i)
        os << (i ? "," : "") << exps_[i];
    os << ')';
    return os.str();
}

bool graded_lex_less(const MultiIndex &a, const MultiIndex &b) {
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    return a.exponents() > b.exponents();
}

namespace {

void fill_homogeneous(int n, int remaining, std::vector<int> &prefix, std::vector<MultiIndex> &out) {
    if (static_cast<int>(prefix.size()) == n - 1) {
        prefix.push_back(remaining);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        prefix.push_back(e);
        fill_homogeneous(n, remaining - e, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<MultiIndex> homogeneous_monomials(int n, int degree) {
    if (n < 1)
        throw std::invalid_argument("homogeneous_monomials: n must be positive");
    std::vector<MultiIndex> out;
    if (degree < 0)
        return out;
    std::vector<int> prefix;
    fill_homogeneous(n, degree, prefix, out);
    return out;
}

MonomialBasis::MonomialBasis(int n, int max_degree) : n_(n), max_degree_(max_degree) {
    if (n < 1)
        throw std::invalid_argument("MonomialBasis: n must be positive");
    if (max_degree < 0)
        throw std::invalid_argument("MonomialBasis: degree must be non-negative");
    offsets_.push_back(0);
    for (int k = 0; k <= max_degree; ++k) {
        auto block = homogeneous_monomials(n, k);
        monomials_.insert(monomials_.end(), block.begin(), block.end());
        offsets_.push_back(monomials_.size());
    }
    for (std::size_t i = 0; i < monomials_.size(); ++i)
        lookup_.emplace(monomials_[i], i);

    shift_.assign(monomials_.size() * static_cast<std::size_t>(n), npos);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
        if (monomials_[i].degree() == max_degree)
            continue;
        for (int k = 0; k < n; ++k)
            shift_[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] =
                lookup_.at(monomials_[i] + MultiIndex::unit(n, k));
    }
}

std::size_t MonomialBasis::offset(int k) const {
    if (k <= 0)
        return 0;
    if (k > max_degree_ + 1)
        return monomials_.size();
    return offsets_[static_cast<std::size_t>(k)];
}

std::span<const MultiIndex> MonomialBasis::homogeneous(int k) const {
    const std::size_t lo = offset(k), hi = offset(k + 1);
    return std::span<const MultiIndex>(monomials_).subspan(lo, hi - lo);
}

std::optional<std::size_t> MonomialBasis::find(const MultiIndex &m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end())
        return std::nullopt;
    return it->second;
}

std::size_t MonomialBasis::index_of(const MultiIndex &m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end())
        throw std::out_of_range("MonomialBasis: monomial " + m.to_string() + " not in basis");
    return it->second;
}

MonomialBasis enumerate_basis(int n, int degree) { return MonomialBasis(n, degree); }

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (acc > UINT64_MAX)
            throw std::overflow_error("binomial: result exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t multinomial(int D, const MultiIndex &alpha) {
    if (D < 0 || alpha.degree() > D)
        throw std::invalid_argument("multinomial: |alpha| exceeds D");
    // Product of binomials C(D, a_1) C(D - a_1, a_2) ...; the leftover D - |α| needs no factor.
    unsigned __int128 acc = 1;
    int remaining = D;
    for (int i = 0; i < alpha.size(); ++i) {
        acc *= binomial(remaining, alpha[i]);
        if (acc > UINT64_MAX)
            throw std::overflow_error("multinomial: result exceeds 64 bits");
        remaining -= alpha[i];
    }
    return static_cast<std::uint64_t>(acc);
}

} // namespace gramian
