#include "cotype/random_matrix.hpp"

#include "cotype/errors.hpp"
#include "cotype/zeta_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace cotype {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base)
            throw ResourceLimit("exhaustive enumeration is too large");
        out *= base;
    }
    return out;
}

// Runs body(first, last, worker) over [0, n) in contiguous chunks, one per worker.
void parallel_chunks(std::uint64_t n, unsigned workers,
                     const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& body) {
    workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, n)));
    if (workers == 1) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = std::min(n, w * chunk), hi = std::min(n, lo + chunk);
        pool.emplace_back(body, lo, hi, w);
    }
    for (auto& t : pool) t.join();
}

}  // namespace

// ---------------------------------------------------------------- config

void SampleConfig::validate(SampleModel model) const {
    if (d < 1) throw DomainError("dimension must be positive");
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (exponent_cap && *exponent_cap < 0) throw DomainError("exponent cap must be nonnegative");
    if (model == SampleModel::matrix) {
        if (entry_bound < 1) throw DomainError("entry bound k must be at least 1");
        if (entry_bound > (std::int64_t{1} << 40)) throw DomainError("entry bound k is too large");
        if (!exhaustive && trials < 1) throw DomainError("trials must be at least 1");
        if (exhaustive && draw_count(*this) > kMaxExhaustiveMatrices)
            throw ResourceLimit("exhaustive mode would visit more than " + std::to_string(kMaxExhaustiveMatrices) +
                                " matrices");
    } else {
        if (exhaustive) throw DomainError("exhaustive mode applies to the matrix model only");
        if (trials < 1) throw DomainError("trials must be at least 1");
        if (index_bound < 2) throw DomainError("index bound X must be at least 2");
        if (d > kMaxEnumerationDim || index_bound > kMaxSublatticeIndex)
            throw ResourceLimit("sublattice sampling is limited to d <= " + std::to_string(kMaxEnumerationDim) +
                                " and X <= " + std::to_string(kMaxSublatticeIndex));
    }
}

nlohmann::json SampleConfig::to_json(SampleModel model) const {
    nlohmann::json j;
    j["model"] = model == SampleModel::matrix ? "matrix" : "sublattice";
    j["d"] = d;
    if (model == SampleModel::matrix)
        j["k"] = entry_bound;
    else
        j["X"] = index_bound;
    j["p"] = p;
    j["trials"] = model == SampleModel::matrix ? draw_count(*this) : trials;
    j["seed"] = seed;
    j["exhaustive"] = exhaustive;
    if (exponent_cap) j["exponent_cap"] = *exponent_cap;
    return j;
}

// ---------------------------------------------------------------- RNG

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    std::uint64_t t = trial ^ a;
    state_ = splitmix64(t) ^ (a << 1);
}

std::uint64_t TrialRng::next() { return splitmix64(state_); }

std::uint64_t TrialRng::below(std::uint64_t n) {
    if (n == 0) throw DomainError("empty range");
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        const std::uint64_t x = next();
        if (x < limit) return x % n;
    }
}

std::int64_t TrialRng::between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

// ---------------------------------------------------------------- cokernels

SmithForm smith_form_of(std::span<const std::int64_t> entries, int d) {
    const auto n = static_cast<std::size_t>(d);
    if (auto diag = smith_diagonal_small(entries, n, n)) {
        SmithForm out;
        for (auto v : *diag) {
            if (v == 0)
                ++out.free_rank;
            else
                out.diag.emplace_back(static_cast<long>(v < 0 ? -v : v));
        }
        return out;
    }
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = static_cast<long>(entries[i * n + j]);
    return smith_normal_form(m);
}

Partition p_sylow_type(const SmithForm& snf, int p) {
    std::vector<int> parts;
    const mpz_class pp = p;
    for (const auto& s : snf.diag) {
        mpz_class v = abs(s);
        int e = 0;
        while (v % pp == 0) {
            v /= pp;
            ++e;
        }
        if (e) parts.push_back(e);
    }
    std::sort(parts.rbegin(), parts.rend());
    return Partition(std::move(parts));
}

std::uint64_t draw_count(const SampleConfig& cfg) {
    if (!cfg.exhaustive) return cfg.trials;
    return checked_power(static_cast<std::uint64_t>(2 * cfg.entry_bound + 1),
                         static_cast<std::uint64_t>(cfg.d) * static_cast<std::uint64_t>(cfg.d));
}

std::vector<std::int64_t> draw_matrix(const SampleConfig& cfg, std::uint64_t trial) {
    const auto cells = static_cast<std::size_t>(cfg.d * cfg.d);
    std::vector<std::int64_t> m(cells);
    if (cfg.exhaustive) {
        const auto base = static_cast<std::uint64_t>(2 * cfg.entry_bound + 1);
        for (std::size_t i = cells; i-- > 0;) {
            m[i] = static_cast<std::int64_t>(trial % base) - cfg.entry_bound;
            trial /= base;
        }
        return m;
    }
    TrialRng rng(cfg.seed, trial);
    for (auto& x : m) x = rng.between(-cfg.entry_bound, cfg.entry_bound);
    return m;
}

CokernelSample sample_cokernel(const SampleConfig& cfg, std::uint64_t trial) {
    CokernelSample s{smith_form_of(draw_matrix(cfg, trial), cfg.d), Partition(std::vector<int>{})};
    s.p_type = p_sylow_type(s.snf, cfg.p);
    return s;
}

void sample_cokernel_type(const SampleConfig& cfg,
                          const std::function<void(std::uint64_t, const CokernelSample&)>& visit) {
    cfg.validate(SampleModel::matrix);
    const std::uint64_t n = draw_count(cfg);
    for (std::uint64_t t = 0; t < n; ++t) visit(t, sample_cokernel(cfg, t));
}

// ---------------------------------------------------------------- sublattices

SublatticeSampler::SublatticeSampler(int d, std::uint64_t index_bound) : d_(d) {
    if (d < 1 || d > kMaxEnumerationDim) throw ResourceLimit("sublattice sampling needs 1 <= d <= 6");
    if (index_bound < 2) throw DomainError("index bound X must be at least 2");
    if (index_bound > kMaxSublatticeIndex) throw ResourceLimit("index bound too large for sampling");
    std::uint64_t total = 0;
    for (std::uint64_t n = 1; n < index_bound; ++n) {
        const mpz_class c = count_hnf(d, n);
        if (!c.fits_ulong_p() || c.get_ui() > (std::uint64_t{1} << 62) - total)
            throw ResourceLimit("sublattice population exceeds 2^62");
        total += c.get_ui();
        cumulative_.push_back(total);
    }
}

HermiteBasis SublatticeSampler::draw(TrialRng& rng) const {
    const std::uint64_t r = rng.below(cumulative_.back());
    const auto n = static_cast<std::uint64_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) -
                                              cumulative_.begin()) + 1;
    const auto tuples = diagonal_tuples(d_, n);
    std::vector<std::uint64_t> weights;
    std::uint64_t total = 0;
    for (const auto& diag : tuples) {
        std::uint64_t w = 1;
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < d_ - 1 - i; ++k) w *= static_cast<std::uint64_t>(diag[static_cast<std::size_t>(i)]);
        total += w;
        weights.push_back(total);
    }
    const std::uint64_t pick = rng.below(total);
    const auto& diag = tuples[static_cast<std::size_t>(std::upper_bound(weights.begin(), weights.end(), pick) -
                                                       weights.begin())];
    const auto dd = static_cast<std::size_t>(d_);
    std::vector<std::int64_t> entries(dd * dd, 0);
    for (std::size_t i = 0; i < dd; ++i) {
        entries[i * dd + i] = diag[i];
        for (std::size_t j = i + 1; j < dd; ++j)
            entries[i * dd + j] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(diag[i])));
    }
    return HermiteBasis(d_, std::move(entries));
}

Cotype sample_uniform_sublattice(const SampleConfig& cfg, std::uint64_t trial) {
    cfg.validate(SampleModel::sublattice);
    SublatticeSampler sampler(cfg.d, cfg.index_bound);
    TrialRng rng(cfg.seed, trial);
    return cotype_of(sampler.draw(rng));
}

void sample_uniform_sublattices(const SampleConfig& cfg,
                                const std::function<void(std::uint64_t, const Cotype&)>& visit) {
    cfg.validate(SampleModel::sublattice);
    SublatticeSampler sampler(cfg.d, cfg.index_bound);
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        TrialRng rng(cfg.seed, t);
        visit(t, cotype_of(sampler.draw(rng)));
    }
}

// ---------------------------------------------------------------- tables

std::map<std::string, double> EmpiricalTable::frequencies() const {
    std::map<std::string, double> out;
    for (const auto& [label, c] : counts) out[label] = trials ? double(c) / double(trials) : 0.0;
    return out;
}

nlohmann::json EmpiricalTable::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [label, c] : counts)
        rows.push_back({{"label", label}, {"count", c}, {"freq", trials ? double(c) / double(trials) : 0.0}});
    return {{"trials", trials}, {"counts", rows}};
}

std::string EmpiricalTable::to_csv() const {
    std::ostringstream os;
    os << "label,count\n";
    for (const auto& [label, c] : counts) os << '"' << label << "\"," << c << '\n';
    return os.str();
}

std::string outcome_label(const Partition& p_type, Statistic stat, std::optional<int> exponent_cap) {
    if (stat == Statistic::p_rank) return "rank " + std::to_string(p_type.rank());
    if (exponent_cap && p_type.largest() > *exponent_cap) return kOverCapLabel;
    return p_type.to_string();
}

EmpiricalTable tabulate(const SampleConfig& cfg, SampleModel model, Statistic stat) {
    cfg.validate(model);
    const std::uint64_t n = model == SampleModel::matrix ? draw_count(cfg) : cfg.trials;
    std::optional<SublatticeSampler> sampler;
    if (model == SampleModel::sublattice) sampler.emplace(cfg.d, cfg.index_bound);

    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<std::map<std::string, std::uint64_t>> local(workers);
    parallel_chunks(n, workers, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        auto& counts = local[w];
        for (std::uint64_t t = lo; t < hi; ++t) {
            if (model == SampleModel::matrix) {
                const auto s = sample_cokernel(cfg, t);
                ++counts[s.singular() ? kInfiniteLabel : outcome_label(s.p_type, stat, cfg.exponent_cap)];
            } else {
                TrialRng rng(cfg.seed, t);
                const Cotype c = cotype_of(sampler->draw(rng));
                ++counts[outcome_label(c.p_part(cfg.p), stat, cfg.exponent_cap)];
            }
        }
    });
    EmpiricalTable table;
    table.trials = n;
    for (const auto& m : local)
        for (const auto& [label, c] : m) table.counts[label] += c;
    return table;
}

// ---------------------------------------------------------------- comparison

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : per_label)
        rows.push_back({{"label", r.label}, {"count", r.count}, {"freq", r.freq}, {"theory", r.theory}, {"z", r.z}});
    return {{"per_label", rows},
            {"effective_trials", effective_trials},
            {"excluded_infinite", excluded},
            {"tv_distance", tv_distance},
            {"threshold_sigma", threshold},
            {"note", "per-label threshold; no Bonferroni correction applied across " +
                         std::to_string(per_label.size()) + " labels"},
            {"verdict", pass ? "pass" : "fail"}};
}

ComparisonReport compare_to_theory(const EmpiricalTable& emp, const std::map<std::string, double>& theory,
                                   double threshold) {
    ComparisonReport rep;
    rep.threshold = threshold;
    for (const auto& [label, c] : emp.counts) {
        if (label == kInfiniteLabel) {
            rep.excluded = c;
            continue;
        }
        if (!theory.contains(label)) throw LabelMismatch("no prediction for outcome " + label);
    }
    rep.effective_trials = emp.trials - rep.excluded;
    const double n = double(rep.effective_trials);
    for (const auto& [label, prob] : theory) {
        if (prob < 0 || prob > 1) throw DomainError("prediction for " + label + " is not a probability");
        LabelComparison row;
        row.label = label;
        row.theory = prob;
        auto it = emp.counts.find(label);
        row.count = it == emp.counts.end() ? 0 : it->second;
        row.freq = n > 0 ? double(row.count) / n : 0.0;
        const double var = prob * (1 - prob);
        if (var > 0)
            row.z = (row.freq - prob) * std::sqrt(n / var);
        else
            row.z = row.freq == prob ? 0.0 : std::numeric_limits<double>::infinity();
        rep.tv_distance += std::abs(row.freq - prob) / 2;
        if (!(std::abs(row.z) <= threshold)) rep.pass = false;
        rep.per_label.push_back(row);
    }
    return rep;
}

ComparisonReport cumulative_rank_check(const EmpiricalTable& emp, int d, int p, double threshold) {
    EmpiricalTable cumulative;
    cumulative.trials = emp.trials;
    std::map<std::string, double> theory;
    std::uint64_t running = 0;
    for (int m = 0; m <= d; ++m) {
        auto it = emp.counts.find("rank " + std::to_string(m));
        if (it != emp.counts.end()) running += it->second;
        const std::string label = "rank ≤ " + std::to_string(m);
        cumulative.counts[label] = running;
        theory[label] = stanley_wang_Zd(d, p, m).get_d();
    }
    for (const auto& [label, c] : emp.counts) {
        if (label == kInfiniteLabel)
            cumulative.counts[label] = c;
        else if (label.rfind("rank ", 0) != 0 || std::stoi(label.substr(5)) > d)
            throw LabelMismatch("unexpected outcome " + label + " in a rank table");
    }
    auto rep = compare_to_theory(cumulative, theory, threshold);
    rep.tv_distance = 0;  // cumulative rows overlap; a total-variation figure would be meaningless
    return rep;
}

std::map<std::string, double> rank_d_type_theory(int d, int p, int cap) {
    std::map<std::string, double> out;
    HighFloat total = 0;
    for (const auto& g : group_types_in_box(p, d, cap)) {
        const HighFloat v = rank_d_mass(g, d).value;
        out[g.lambda.to_string()] = static_cast<double>(v);
        total += v;
    }
    out[kOverCapLabel] = std::max(0.0, static_cast<double>(HighFloat(1 - total)));
    return out;
}

std::map<std::string, double> rank_d_rank_theory(int d, int p) {
    std::map<std::string, double> out;
    mpq_class prev = 0;
    for (int r = 0; r <= d; ++r) {
        const mpq_class z = stanley_wang_Zd(d, p, r);
        out["rank " + std::to_string(r)] = mpq_class(z - prev).get_d();
        prev = z;
    }
    return out;
}

// ---------------------------------------------------------------- exact probabilities

mpq_class containment_probability_exact(const HermiteBasis& L, std::uint64_t index_bound,
                                        const EnumerationLimits& limits) {
    if (index_bound < 2) throw DomainError("index bound X must be at least 2");
    if (index_bound > limits.max_matrices)
        throw ResourceLimit("index bound " + std::to_string(index_bound) + " exceeds the cap");
    const mpz_class D = L.index();
    if (D >= index_bound) return 0;
    const int d = L.dim();
    // Sublattices of L are sublattices of Z^d ≅ L, with index scaled by D.
    const std::uint64_t inner = (index_bound - 1) / D.get_ui() + 1;
    mpq_class out(count_hnf_below(d, inner), count_hnf_below(d, index_bound));
    out.canonicalize();
    return out;
}

mpq_class embed_probability_exact(int d, const AbelianPGroupType& g, std::uint64_t index_bound,
                                  const EnumerationLimits& limits) {
    if (g.rank() > d) return 0;
    const auto tally = tally_cotypes(d, index_bound, limits);
    mpz_class hits = 0;
    for (const auto& [c, n] : tally.counts)
        if (embeds(g, AbelianPGroupType(g.p, c.p_part(g.p)))) hits += n;
    mpq_class out(hits, tally.total);
    out.canonicalize();
    return out;
}

}  // namespace cotype
