#pragma once

#include "cotype/polynomial.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cotype {

/// A subset λ = {λ₁ > λ₂ > … > λ_k} of {1, …, d−1}, stored largest first.
class DescentSet {
public:
    DescentSet(int ambient, std::vector<int> elements);
    static DescentSet empty(int ambient) { return DescentSet(ambient, {}); }
    // Bit j−1 of mask set means j ∈ λ.
    static DescentSet from_mask(int ambient, std::uint32_t mask);

    int ambient() const { return ambient_; }
    const std::vector<int>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    std::uint32_t mask() const;
    // (m₀, …, m_k) with λ₀ = d and λ_{k+1} = 0.
    std::vector<int> gaps() const;

    friend bool operator==(const DescentSet&, const DescentSet&) = default;

private:
    int ambient_;
    std::vector<int> elements_;
};

/// One-line notation π(1), …, π(d) of a permutation of {1, …, d}.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int d);

    int size() const { return static_cast<int>(images_.size()); }
    const std::vector<int>& images() const { return images_; }
    // Advances to the next permutation in lexicographic order; false after the last.
    bool next();

private:
    std::vector<int> images_;
};

IntPolynomial q_int(int n);
IntPolynomial q_factorial(int n);
IntPolynomial q_binomial(int n, int k);
IntPolynomial q_multinomial(std::span<const int> parts);

/// The multinomial of the gap vector of λ; 1 for λ = ∅.
IntPolynomial q_binom_subset(const DescentSet& lambda);
/// Same bracket for an arbitrary subset of {1, …, d} (d itself allowed,
/// giving a zero first gap). Elements may be given in any order.
IntPolynomial q_binom_subset(int d, std::vector<int> elements);

DescentSet descents(const Permutation& pi);
int inversions(const Permutation& pi);

/// Upper bound on d for the factorial-time permutation method.
inline constexpr int kDefaultPermutationCap = 9;

IntPolynomial descent_poly_inclusion_exclusion(const DescentSet& lambda);
IntPolynomial descent_poly_permutations(const DescentSet& lambda,
                                        int cap = kDefaultPermutationCap);
IntPolynomial descent_poly_determinant(const DescentSet& lambda);

/// Determinant over Z[q] by fraction-free (Bareiss) elimination.
IntPolynomial bareiss_determinant(std::vector<std::vector<IntPolynomial>> m);

/// Σ_{k=0}^{n} [n,k]_q q^{k²+ek} Π_{j=k+1+e}^{n+e} (1−q^j) == 1.
bool verify_lemma_qid(int n, int e);
/// Σ_{μ⊆{1..i−1}} [d; μ∪{i}]_q Π_{j∈μ} q^{j²} Π_{j∉μ} (1−q^{j²})
///   == [d,i]_q Π_{j=1}^{i} (1−q^{j²})/(1−q^j).
bool verify_lemma_qid2(int d, int i);

// Both sides of the second identity, exposed for counterexample reporting.
IntPolynomial lemma_qid_sum(int n, int e);
IntPolynomial lemma_qid2_lhs(int d, int i);
IntPolynomial lemma_qid2_rhs(int d, int i);

}  // namespace cotype
