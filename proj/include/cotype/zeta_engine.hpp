#pragma once

#include "cotype/highprec.hpp"
#include "cotype/polynomial.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cotype {

/// Largest d accepted by local_factor (the numerator has 2^{d−1} terms).
inline constexpr int kLocalFactorCap = 12;

/// Σ_λ w_{d,λ}(q) Π_{j∈λ} t_j / ((1−t₁)⋯(1−t_d)), λ ranging over subsets of
/// {1, …, d−1}; with t_j = p^{−(s₁+⋯+s_j) + j(d−j)} and q = 1/p this is the
/// p-part of the cotype zeta function of Z^d.
class LocalFactor {
public:
    LocalFactor(int dim, std::map<std::uint32_t, IntPolynomial> numerator);

    int dim() const { return dim_; }
    /// Keyed by bitmask: bit j−1 set means t_j occurs in the monomial.
    const std::map<std::uint32_t, IntPolynomial>& numerator() const { return numerator_; }

    /// Coefficient of t₁^{c₁}⋯t_d^{c_d} in the power series expansion, at q.
    mpq_class series_coefficient(std::span<const int> c, const mpq_class& q) const;

    /// e.g. "(1 + q·t1) / ((1−t1)(1−t2))".
    std::string to_string() const;

private:
    int dim_;
    std::map<std::uint32_t, IntPolynomial> numerator_;
};

LocalFactor local_factor(int d, int cap = kLocalFactorCap);

/// Number of sublattices of Z^d whose cotype has p-exponents ν (weakly
/// decreasing, at most d entries, missing entries read as 0).
mpz_class local_coefficient(int d, int p, std::span<const int> nu);
/// Same quantity, read off the series expansion of local_factor(d).
mpz_class local_coefficient_series(int d, int p, std::span<const int> nu);

/// Number of sublattices of Z^d of index n.
mpz_class dirichlet_coefficient(int d, std::uint64_t n);

/// p-factor of the residue at s = d of the corank ≤ m zeta function:
/// (1−q) Σ_{i=0}^{m} [d,i]_q q^{i²} / Π_{j=1}^{i}(1−q^j), q = 1/p.
mpq_class corank_local_factor_at_pole(int d, int m, int p);
/// Same value through the descent polynomials:
/// Σ_{λ⊆{1..m}} w_{d,λ}(q) Π_{j∈λ} q^{j²} / Π_{j=2}^{m}(1−q^{j²}).
mpq_class corank_local_factor_via_descents(int d, int m, int p);
/// p-factor of the corank ≤ m density: Π_{j=1}^{d}(1−q^j) Σ_{i=0}^{m} [d,i]_q q^{i²}/Π_{j≤i}(1−q^j).
mpq_class corank_density_local_factor(int d, int m, int p);

/// [p,d] Σ_{i=0}^{m} p^{−i²} [p,d] / ([p,i]² [p,d−i]), [p,n] = Π_{j=1}^{n}(1−p^{−j}).
mpq_class stanley_wang_Zd(int d, int p, int m);

/// Truncated product over primes p ≤ prime_cutoff.
struct EulerProductValue {
    HighFloat value = 0;
    std::uint64_t prime_cutoff = 0;
    /// |true product − value| ≤ tail_bound.
    HighFloat tail_bound = 0;
    /// Product of the exact local factors, when requested.
    std::optional<mpq_class> exact;

    nlohmann::json to_json() const;
};

struct EulerOptions {
    unsigned workers = 0;     // 0: hardware concurrency
    bool keep_exact = false;  // also multiply exact rational factors
};

/// Largest cutoff for which exact factors may be kept.
inline constexpr std::uint64_t kExactProductCutoff = 2000;

EulerProductValue corank_zeta_residue(int d, int m, std::uint64_t prime_cutoff, const EulerOptions& opt = {});
EulerProductValue corank_density(int d, int m, std::uint64_t prime_cutoff, const EulerOptions& opt = {});
EulerProductValue squarefree_density(std::uint64_t prime_cutoff, const EulerOptions& opt = {});
EulerProductValue theta_d(int d, std::uint64_t prime_cutoff, const EulerOptions& opt = {});

/// Inner product length used by squarefree_density.
inline constexpr int kSquarefreeInnerTerms = 64;
/// Π_{j=2}^{64}(1 − p^{−j}).
HighFloat squarefree_local_factor(int p);
/// 1 + (p^{d−1}−1)/(p^{d+1}−p^d).
mpq_class theta_local_factor(int d, int p);

std::vector<std::uint32_t> primes_up_to(std::uint64_t bound);

}  // namespace cotype
