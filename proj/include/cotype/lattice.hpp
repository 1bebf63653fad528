#pragma once

#include "cotype/partition.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cotype {

/// Budget for sublattice enumeration, expressed as a maximum matrix count.
struct EnumerationLimits {
    std::uint64_t max_matrices = 100'000'000;

    /// Defaults overridden by COTYPE_MAX_MATRICES when set.
    static EnumerationLimits from_environment();
};

inline constexpr int kMaxEnumerationDim = 6;

/// Dense integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_, cols_;
    std::vector<mpz_class> data_;
};

/// Invariant factors s₁ | s₂ | … | s_r of a matrix of rank r, smallest first,
/// plus the number of zero diagonal entries.
struct SmithForm {
    std::vector<mpz_class> diag;
    int free_rank = 0;

    friend bool operator==(const SmithForm&, const SmithForm&) = default;
};

/// Elementary row/column reduction pivoting on the smallest nonzero entry.
SmithForm smith_normal_form(const IntMatrix& m);

/// Same reduction on a small matrix of machine integers; returns every
/// diagonal entry (zeros last) or nullopt if an intermediate would overflow.
std::optional<std::vector<std::int64_t>> smith_diagonal_small(std::span<const std::int64_t> entries,
                                                               std::size_t rows, std::size_t cols);

/// Upper-triangular column basis of a finite-index sublattice of Z^d.
///
/// Column j is (h₀ⱼ, …, hⱼⱼ, 0, …). Diagonal entries are positive and the
/// entry in row i, column j > i lies in [0, hᵢᵢ).
class HermiteBasis {
public:
    HermiteBasis(int dim, std::vector<std::int64_t> row_major);

    int dim() const { return dim_; }
    std::int64_t at(int i, int j) const { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
    std::int64_t diagonal(int i) const { return at(i, i); }
    const std::vector<std::int64_t>& entries() const { return entries_; }
    mpz_class index() const;
    IntMatrix to_matrix() const;

    /// Whether v lies in the lattice spanned by the columns.
    bool contains(std::span<const std::int64_t> v) const;
    /// Whether every column of `other` lies in this lattice.
    bool contains(const HermiteBasis& other) const;

private:
    int dim_;
    std::vector<std::int64_t> entries_;
};

/// Cotype (α₁, …, α_d) with α_{i+1} | α_i, largest first.
class Cotype {
public:
    explicit Cotype(std::vector<std::int64_t> alpha);

    int dim() const { return static_cast<int>(alpha_.size()); }
    const std::vector<std::int64_t>& alpha() const { return alpha_; }
    mpz_class index() const;
    int corank() const;
    /// Exponents (v_p(α₁), …, v_p(α_d)), weakly decreasing.
    std::vector<int> p_exponents(std::int64_t p) const;
    /// Type of the p-Sylow subgroup of Z^d/Λ.
    Partition p_part(std::int64_t p) const;
    std::string to_string() const;

    friend bool operator==(const Cotype&, const Cotype&) = default;
    friend auto operator<=>(const Cotype&, const Cotype&) = default;

private:
    std::vector<std::int64_t> alpha_;
};

/// Converts Smith invariant factors (smallest first) of a full-rank matrix to a
/// cotype (largest first).
Cotype cotype_from_smith(const SmithForm& snf);
Cotype cotype_of(const HermiteBasis& basis);

/// Number of sublattices of Z^d of index exactly n, counted as HNF matrices:
/// Σ over ordered factorizations n = a₁⋯a_d of Π a_i^{d−i}.
mpz_class count_hnf(int d, std::uint64_t n);
/// Σ_{n < bound} count_hnf(d, n).
mpz_class count_hnf_below(int d, std::uint64_t bound);

/// Ordered factorizations n = a₁⋯a_d, each listed as (a₁, …, a_d).
std::vector<std::vector<std::int64_t>> diagonal_tuples(int d, std::uint64_t n);

/// Calls `visit` once for every sublattice of index exactly n.
void enumerate_hnf(int d, std::uint64_t n, const std::function<void(const HermiteBasis&)>& visit,
                   const EnumerationLimits& limits = {});

/// Per-cotype counts of all sublattices of Z^d with index strictly below `bound`.
struct CotypeTally {
    int dim = 0;
    std::uint64_t bound = 0;
    std::map<Cotype, mpz_class> counts;
    mpz_class total = 0;

    /// N_d^{(m)}(X): sublattices of corank at most m.
    mpz_class corank_at_most(int m) const;
    mpz_class count_of(const Cotype& c) const;
};

/// Exhaustive tally. Work is split by diagonal tuple across `workers`
/// threads; the merged result does not depend on the worker count.
CotypeTally tally_cotypes(int d, std::uint64_t bound, const EnumerationLimits& limits = {},
                          unsigned workers = 1);

/// Counts with a fixed diagonal-tuple split; same result as tally_cotypes
/// restricted to indices in [lo, hi).
CotypeTally tally_index_range(int d, std::uint64_t lo, std::uint64_t hi,
                              const EnumerationLimits& limits = {}, unsigned workers = 1);

enum class CountMode { brute_force, closed_form };

/// Tuples in (Z/p^{λ₁})^d generating a subgroup of type λ with the i-th
/// element of order exactly p^{λ_i}.
mpz_class count_generating_tuples(int d, int p, const Partition& lambda, CountMode mode);

}  // namespace cotype
