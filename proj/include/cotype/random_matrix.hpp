#pragma once

#include "cotype/abelian_groups.hpp"
#include "cotype/lattice.hpp"
#include "cotype/partition.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace cotype {

enum class SampleModel {
    matrix,      // d×d integer matrix, entries uniform on [−k, k]
    sublattice,  // uniform sublattice of Z^d of index < X
};

struct SampleConfig {
    int d = 2;
    std::int64_t entry_bound = 1;     // k, matrix model
    std::uint64_t index_bound = 2;    // X, sublattice model
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    int p = 2;
    std::optional<int> exponent_cap;  // types with λ₁ above this share one label
    unsigned workers = 1;
    bool exhaustive = false;          // matrix model: every matrix once, ignores trials/seed

    void validate(SampleModel model) const;
    nlohmann::json to_json(SampleModel model) const;
};

/// Exhaustive mode refuses to visit more matrices than this.
inline constexpr std::uint64_t kMaxExhaustiveMatrices = 50'000'000;
/// Largest X accepted by the sublattice model.
inline constexpr std::uint64_t kMaxSublatticeIndex = 1'000'000;

struct CokernelSample {
    SmithForm snf;
    Partition p_type;  // p-Sylow type of the torsion part

    bool singular() const { return snf.free_rank > 0; }
};

/// Deterministic 64-bit generator for one trial, derived from (seed, trial).
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);
    std::uint64_t next();
    /// Uniform on [0, n), n ≥ 1, without modulo bias.
    std::uint64_t below(std::uint64_t n);
    /// Uniform on [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);

private:
    std::uint64_t state_;
};

SmithForm smith_form_of(std::span<const std::int64_t> entries, int d);
Partition p_sylow_type(const SmithForm& snf, int p);

/// The matrix drawn for `trial` (or, in exhaustive mode, the trial-th matrix
/// in lexicographic order of entries).
std::vector<std::int64_t> draw_matrix(const SampleConfig& cfg, std::uint64_t trial);
CokernelSample sample_cokernel(const SampleConfig& cfg, std::uint64_t trial);
/// Number of draws sample_cokernel_type makes: trials, or (2k+1)^{d²} when exhaustive.
std::uint64_t draw_count(const SampleConfig& cfg);
/// Calls visit(trial, sample) for every draw, in trial order.
void sample_cokernel_type(const SampleConfig& cfg,
                          const std::function<void(std::uint64_t, const CokernelSample&)>& visit);

/// Samples uniform sublattices by drawing the index with weight count_hnf(d, n),
/// then the diagonal with weight Π a_i^{d−1−i}, then the entries above it.
class SublatticeSampler {
public:
    SublatticeSampler(int d, std::uint64_t index_bound);
    HermiteBasis draw(TrialRng& rng) const;
    std::uint64_t population() const { return cumulative_.back(); }

private:
    int d_;
    std::vector<std::uint64_t> cumulative_;  // cumulative_[n−1] = N_d(n+1)
};

Cotype sample_uniform_sublattice(const SampleConfig& cfg, std::uint64_t trial);
void sample_uniform_sublattices(const SampleConfig& cfg,
                                const std::function<void(std::uint64_t, const Cotype&)>& visit);

/// Counts by outcome label.
struct EmpiricalTable {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t trials = 0;

    std::map<std::string, double> frequencies() const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

inline const std::string kInfiniteLabel = "infinite";
inline const std::string kOverCapLabel = "over cap";

enum class Statistic {
    p_type,  // label is the p-Sylow type, e.g. "(2,1)"
    p_rank,  // label is "rank r" for the p-rank r
};

std::string outcome_label(const Partition& p_type, Statistic stat, std::optional<int> exponent_cap);

EmpiricalTable tabulate(const SampleConfig& cfg, SampleModel model, Statistic stat);

struct LabelComparison {
    std::string label;
    std::uint64_t count = 0;
    double freq = 0;
    double theory = 0;
    double z = 0;
};

struct ComparisonReport {
    std::vector<LabelComparison> per_label;
    std::uint64_t effective_trials = 0;  // trials minus singular samples
    std::uint64_t excluded = 0;
    double tv_distance = 0;
    double threshold = 4;
    bool pass = true;

    nlohmann::json to_json() const;
};

/// Compares frequencies (excluding the "infinite" bucket) with predicted
/// probabilities. Every observed label must have a prediction.
ComparisonReport compare_to_theory(const EmpiricalTable& emp, const std::map<std::string, double>& theory,
                                   double threshold = 4);

/// P(p-rank ≤ m) for m = 0..d against Z_d(p, m), labels "rank ≤ m"; the
/// "infinite" bucket is excluded as in compare_to_theory.
ComparisonReport cumulative_rank_check(const EmpiricalTable& emp, int d, int p, double threshold = 4);

/// rank_d_mass for each type with λ₁ ≤ cap and rank ≤ d, plus the remaining
/// mass under "over cap".
std::map<std::string, double> rank_d_type_theory(int d, int p, int cap);
/// Z_d(p, r) − Z_d(p, r−1) under "rank r".
std::map<std::string, double> rank_d_rank_theory(int d, int p);

/// Fraction of sublattices of index < X contained in L.
mpq_class containment_probability_exact(const HermiteBasis& L, std::uint64_t index_bound,
                                        const EnumerationLimits& limits = {});
/// Fraction of sublattices of index < X whose quotient contains a copy of G.
mpq_class embed_probability_exact(int d, const AbelianPGroupType& g, std::uint64_t index_bound,
                                  const EnumerationLimits& limits = {});

}  // namespace cotype
