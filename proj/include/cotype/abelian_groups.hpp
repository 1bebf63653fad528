#pragma once

#include "cotype/highprec.hpp"
#include "cotype/partition.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace cotype {

/// Z/p^{λ₁} ⊕ … ⊕ Z/p^{λ_r}; the empty partition is the trivial group.
struct AbelianPGroupType {
    AbelianPGroupType(int p, Partition lambda);

    int p;
    Partition lambda;

    int rank() const { return lambda.rank(); }
    mpz_class order() const;
    std::string to_string() const;

    friend bool operator==(const AbelianPGroupType&, const AbelianPGroupType&) = default;
};

bool is_prime(long n);

enum class AutMethod {
    closed_form,     // product formula over the part multiplicities
    tuple_identity,  // solve the generating-tuple identity with d = rank
    brute_force,     // count generating tuples of G inside G itself
};

mpz_class aut_order(const AbelianPGroupType& g, AutMethod method = AutMethod::closed_form);

/// Number of subgroups of (Z/p^{λ₁})^d isomorphic to the group of type λ:
/// Π_{i≥1} p^{λ′_{i+1}(d−λ′_i)} [d−λ′_{i+1}, λ′_i−λ′_{i+1}]_p.
mpz_class count_subgroups_of_type(int d, int p, const Partition& lambda);

/// H ↪ G, decided by componentwise comparison of parts.
bool embeds(const AbelianPGroupType& h, const AbelianPGroupType& g);
/// H ↪ G by searching every subgroup of an explicit model of G.
bool embeds_brute_force(const AbelianPGroupType& h, const AbelianPGroupType& g);

/// Default truncation point for Π_{i≥1}(1 − p^{−i}).
inline constexpr int kDefaultProductTerms = 64;

/// Probability mass with its exact part kept separate from any truncation.
struct MassValue {
    mpq_class exact;             // rational part (1/|Aut| for Cohen–Lenstra)
    mpq_class truncated_factor;  // finite product actually used (1 when none)
    HighFloat value = 0;         // exact * truncated_factor
    HighFloat tail_bound = 0;    // |true mass − value| ≤ tail_bound
    int product_terms = 0;       // 0 when no infinite product was truncated
};

/// |Aut G|⁻¹ Π_{i≥1}(1 − p^{−i}), product truncated after `terms` factors.
MassValue cohen_lenstra_mass(const AbelianPGroupType& g, int terms = kDefaultProductTerms);

/// |Aut G|⁻¹ Π_{j=1}^{d}(1 − p^{−j}) Π_{j=d−r+1}^{d}(1 − p^{−j}); exact.
MassValue rank_d_mass(const AbelianPGroupType& g, int d);

/// Π_{j=lo}^{hi} (1 − p^{−j}) as an exact rational (1 when hi < lo).
mpq_class q_pochhammer_tail(int p, int lo, int hi);

/// Bound on |log Π_{i>terms}(1 − p^{−i})|: 2p^{−(terms+1)}/(1 − p^{−1}).
HighFloat infinite_product_log_tail(int p, int terms);

/// All group types with rank ≤ max_rank and exponent ≤ p^{max_part}.
std::vector<AbelianPGroupType> group_types_in_box(int p, int max_rank, int max_part);

}  // namespace cotype
