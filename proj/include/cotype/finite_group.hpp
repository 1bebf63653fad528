#pragma once

#include "cotype/partition.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace cotype {

/// Explicit model of Z/p^{e₁} ⊕ … ⊕ Z/p^{e_n} for exhaustive checks.
///
/// Elements are encoded as mixed-radix integers in [0, order()). Intended for
/// groups of a few thousand elements at most; every method is brute force.
class FiniteAbelianPGroup {
public:
    FiniteAbelianPGroup(int p, std::vector<int> exponents);
    // The group of type λ.
    FiniteAbelianPGroup(int p, const Partition& lambda);

    int prime() const { return p_; }
    std::uint32_t order() const { return order_; }
    const std::vector<int>& exponents() const { return exponents_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    // Order of an element as an exponent of p.
    int order_exponent(std::uint32_t a) const;

    /// Subgroup given as a membership bitset over all elements.
    using Subset = std::vector<std::uint64_t>;
    Subset trivial_subgroup() const;
    Subset join(const Subset& subgroup, std::uint32_t x) const;
    static std::uint32_t cardinality(const Subset& s);
    static bool contains(const Subset& s, std::uint32_t x) { return (s[x >> 6] >> (x & 63)) & 1u; }

    /// Isomorphism type of a subgroup, read off from |S[p^k]| for k = 1, 2, ….
    Partition subgroup_type(const Subset& subgroup) const;

    /// Every subgroup, each exactly once.
    std::vector<Subset> all_subgroups() const;

private:
    int p_;
    std::vector<int> exponents_;
    std::vector<std::uint32_t> moduli_;
    std::uint32_t order_ = 1;
    std::vector<int> element_order_;
};

/// Number of tuples (x₁, …, x_r) in `ambient` with each x_i of order exactly
/// p^{λ_i} and ⟨x₁, …, x_r⟩ ≅ the group of type λ. Exhaustive search with
/// memoization on the subgroup generated so far.
mpz_class count_generating_tuples_in(const FiniteAbelianPGroup& ambient, const Partition& lambda);

}  // namespace cotype
