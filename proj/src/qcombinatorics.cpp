#include "cotype/qcombinatorics.hpp"

#include "cotype/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

namespace cotype {

namespace {

void check_subset(int d, std::vector<int>& elements, int max_element) {
    std::sort(elements.begin(), elements.end(), std::greater<>());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        throw DomainError("descent set has a repeated element");
    for (int x : elements)
        if (x < 1 || x > max_element)
            throw DomainError("element " + std::to_string(x) + " outside [1, " +
                              std::to_string(max_element) + "] for d = " + std::to_string(d));
}

std::vector<int> gap_vector(int d, const std::vector<int>& decreasing) {
    std::vector<int> gaps;
    gaps.reserve(decreasing.size() + 1);
    int prev = d;
    for (int x : decreasing) {
        gaps.push_back(prev - x);
        prev = x;
    }
    gaps.push_back(prev);
    return gaps;
}

// 1 − q^j
IntPolynomial one_minus_q_power(std::size_t j) { return IntPolynomial(1) - IntPolynomial::q_power(j); }

}  // namespace

DescentSet::DescentSet(int ambient, std::vector<int> elements)
    : ambient_(ambient), elements_(std::move(elements)) {
    if (ambient_ < 1) throw DomainError("descent set ambient dimension must be positive");
    check_subset(ambient_, elements_, ambient_ - 1);
}

DescentSet DescentSet::from_mask(int ambient, std::uint32_t mask) {
    std::vector<int> el;
    for (int j = ambient - 1; j >= 1; --j)
        if (mask & (1u << (j - 1))) el.push_back(j);
    if (ambient < 32 && (mask >> std::max(ambient - 1, 0)) != 0)
        throw DomainError("mask has bits beyond d − 1");
    return DescentSet(ambient, std::move(el));
}

std::uint32_t DescentSet::mask() const {
    std::uint32_t m = 0;
    for (int x : elements_) m |= 1u << (x - 1);
    return m;
}

std::vector<int> DescentSet::gaps() const { return gap_vector(ambient_, elements_); }

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<int> sorted = images_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i) + 1)
            throw DomainError("not a permutation of 1..d");
}

Permutation Permutation::identity(int d) {
    std::vector<int> v(d);
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
}

bool Permutation::next() { return std::next_permutation(images_.begin(), images_.end()); }

IntPolynomial q_int(int n) {
    if (n < 0) throw DomainError("q_int requires n >= 0");
    return IntPolynomial(std::vector<mpz_class>(static_cast<std::size_t>(n), mpz_class(1)));
}

IntPolynomial q_factorial(int n) {
    if (n < 0) throw DomainError("q_factorial requires n >= 0");
    IntPolynomial acc(1);
    for (int j = 2; j <= n; ++j) acc *= q_int(j);
    return acc;
}

IntPolynomial q_binomial(int n, int k) {
    if (n < 0) throw DomainError("q_binomial requires n >= 0");
    if (k < 0 || k > n) return {};
    return divide_exact(q_factorial(n), q_factorial(k) * q_factorial(n - k));
}

IntPolynomial q_multinomial(std::span<const int> parts) {
    if (parts.empty()) throw DomainError("q_multinomial needs at least one part");
    int total = 0;
    IntPolynomial denom(1);
    for (int m : parts) {
        if (m < 0) throw DomainError("q_multinomial parts must be nonnegative");
        total += m;
        denom *= q_factorial(m);
    }
    return divide_exact(q_factorial(total), denom);
}

IntPolynomial q_binom_subset(const DescentSet& lambda) {
    if (lambda.size() == 0) return IntPolynomial(1);
    auto gaps = lambda.gaps();
    return q_multinomial(gaps);
}

IntPolynomial q_binom_subset(int d, std::vector<int> elements) {
    if (d < 1) throw DomainError("q_binom_subset requires d >= 1");
    check_subset(d, elements, d);
    if (elements.empty()) return IntPolynomial(1);
    auto gaps = gap_vector(d, elements);
    return q_multinomial(gaps);
}

DescentSet descents(const Permutation& pi) {
    const auto& im = pi.images();
    std::vector<int> el;
    for (int i = pi.size() - 1; i >= 1; --i)
        if (im[i - 1] > im[i]) el.push_back(i);
    return DescentSet(std::max(pi.size(), 1), std::move(el));
}

int inversions(const Permutation& pi) {
    const auto& im = pi.images();
    int count = 0;
    for (std::size_t i = 0; i < im.size(); ++i)
        for (std::size_t j = i + 1; j < im.size(); ++j)
            if (im[i] > im[j]) ++count;
    return count;
}

IntPolynomial descent_poly_inclusion_exclusion(const DescentSet& lambda) {
    const auto& el = lambda.elements();
    const std::size_t k = el.size();
    IntPolynomial sum;
    for (std::uint32_t sub = 0; sub < (1u << k); ++sub) {
        std::vector<int> mu;
        for (std::size_t b = 0; b < k; ++b)
            if (sub & (1u << b)) mu.push_back(el[b]);
        IntPolynomial term = q_binom_subset(DescentSet(lambda.ambient(), mu));
        if ((k - mu.size()) % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

IntPolynomial descent_poly_permutations(const DescentSet& lambda, int cap) {
    const int d = lambda.ambient();
    if (d > cap)
        throw CapExceeded("permutation method capped at d = " + std::to_string(cap) +
                          ", requested d = " + std::to_string(d));
    const std::uint32_t target = lambda.mask();
    std::vector<mpz_class> coeffs(static_cast<std::size_t>(d * (d - 1) / 2 + 1));
    Permutation pi = Permutation::identity(d);
    do {
        if (descents(pi).mask() == target) coeffs[static_cast<std::size_t>(inversions(pi))] += 1;
    } while (pi.next());
    return IntPolynomial(std::move(coeffs));
}

IntPolynomial bareiss_determinant(std::vector<std::vector<IntPolynomial>> m) {
    const std::size_t n = m.size();
    if (n == 0) return IntPolynomial(1);
    for (const auto& row : m)
        if (row.size() != n) throw DomainError("determinant of a non-square matrix");
    bool negate = false;
    IntPolynomial prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return {};
            std::swap(m[k], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                IntPolynomial num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = divide_exact(num, prev);
            }
            m[i][k] = IntPolynomial{};
        }
        prev = m[k][k];
    }
    IntPolynomial det = m[n - 1][n - 1];
    return negate ? -det : det;
}

IntPolynomial descent_poly_determinant(const DescentSet& lambda) {
    const int d = lambda.ambient();
    // Index i runs over 0..k with λ₀ = d and λ_{k+1} = 0.
    std::vector<int> ext{d};
    ext.insert(ext.end(), lambda.elements().begin(), lambda.elements().end());
    ext.push_back(0);
    const std::size_t k1 = lambda.size() + 1;
    std::vector<std::vector<IntPolynomial>> m(k1, std::vector<IntPolynomial>(k1));
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < k1; ++j)
            m[i][j] = q_binomial(d - ext[i + 1], ext[j] - ext[i + 1]);
    return bareiss_determinant(std::move(m));
}

IntPolynomial lemma_qid_sum(int n, int e) {
    if (n < 0 || e < 0) throw DomainError("lemma_qid_sum requires n, e >= 0");
    IntPolynomial sum;
    for (int k = 0; k <= n; ++k) {
        IntPolynomial term = q_binomial(n, k).shifted(static_cast<std::size_t>(k * k + e * k));
        for (int j = k + 1 + e; j <= n + e; ++j) term *= one_minus_q_power(static_cast<std::size_t>(j));
        sum += term;
    }
    return sum;
}

bool verify_lemma_qid(int n, int e) { return lemma_qid_sum(n, e) == IntPolynomial(1); }

namespace {

void check_qid2_domain(int d, int i) {
    if (i < 1 || i > d)
        throw DomainError("lemma_qid2 requires 1 <= i <= d, got d = " + std::to_string(d) +
                          ", i = " + std::to_string(i));
}

}  // namespace

IntPolynomial lemma_qid2_lhs(int d, int i) {
    check_qid2_domain(d, i);
    const int below = i - 1;
    IntPolynomial sum;
    for (std::uint32_t sub = 0; sub < (1u << below); ++sub) {
        std::vector<int> set{i};
        IntPolynomial weight(1);
        for (int j = 1; j <= below; ++j) {
            const auto sq = static_cast<std::size_t>(j * j);
            if (sub & (1u << (j - 1))) {
                set.push_back(j);
                weight = weight.shifted(sq);
            } else {
                weight *= one_minus_q_power(sq);
            }
        }
        sum += q_binom_subset(d, std::move(set)) * weight;
    }
    return sum;
}

IntPolynomial lemma_qid2_rhs(int d, int i) {
    check_qid2_domain(d, i);
    IntPolynomial rhs = q_binomial(d, i);
    for (int j = 1; j <= i; ++j)
        rhs *= divide_exact(one_minus_q_power(static_cast<std::size_t>(j * j)),
                            one_minus_q_power(static_cast<std::size_t>(j)));
    return rhs;
}

bool verify_lemma_qid2(int d, int i) { return lemma_qid2_lhs(d, i) == lemma_qid2_rhs(d, i); }

}  // namespace cotype
