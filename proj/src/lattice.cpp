#include "cotype/lattice.hpp"

#include "cotype/errors.hpp"
#include "cotype/finite_group.hpp"
#include "smith_internal.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace cotype {

EnumerationLimits EnumerationLimits::from_environment() {
    EnumerationLimits lim;
    if (const char* env = std::getenv("COTYPE_MAX_MATRICES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) lim.max_matrices = v;
    }
    return lim;
}

// ---------------------------------------------------------------- HermiteBasis

HermiteBasis::HermiteBasis(int dim, std::vector<std::int64_t> row_major)
    : dim_(dim), entries_(std::move(row_major)) {
    if (dim_ < 1) throw DomainError("HermiteBasis dimension must be positive");
    if (entries_.size() != static_cast<std::size_t>(dim_ * dim_))
        throw DomainError("HermiteBasis needs d*d entries");
    for (int i = 0; i < dim_; ++i) {
        if (diagonal(i) <= 0) throw DomainError("HermiteBasis diagonal must be positive");
        for (int j = 0; j < dim_; ++j) {
            if (j < i && at(i, j) != 0) throw DomainError("HermiteBasis must be upper triangular");
            if (j > i && (at(i, j) < 0 || at(i, j) >= diagonal(i)))
                throw DomainError("HermiteBasis off-diagonal entry not reduced modulo its row diagonal");
        }
    }
}

mpz_class HermiteBasis::index() const {
    mpz_class n = 1;
    for (int i = 0; i < dim_; ++i) n *= static_cast<long>(diagonal(i));
    return n;
}

IntMatrix HermiteBasis::to_matrix() const {
    IntMatrix m(static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = static_cast<long>(at(i, j));
    return m;
}

bool HermiteBasis::contains(std::span<const std::int64_t> v) const {
    if (v.size() != static_cast<std::size_t>(dim_)) throw DomainError("vector length differs from lattice dimension");
    std::vector<mpz_class> w;
    w.reserve(v.size());
    for (auto x : v) w.emplace_back(static_cast<long>(x));
    for (int i = dim_ - 1; i >= 0; --i) {
        mpz_class h = static_cast<long>(diagonal(i));
        if (!mpz_divisible_p(w[static_cast<std::size_t>(i)].get_mpz_t(), h.get_mpz_t())) return false;
        mpz_class c = w[static_cast<std::size_t>(i)] / h;
        for (int r = 0; r <= i; ++r) w[static_cast<std::size_t>(r)] -= c * static_cast<long>(at(r, i));
    }
    return true;
}

bool HermiteBasis::contains(const HermiteBasis& other) const {
    if (other.dim() != dim_) throw DomainError("lattices of different dimension");
    std::vector<std::int64_t> col(static_cast<std::size_t>(dim_));
    for (int j = 0; j < dim_; ++j) {
        for (int i = 0; i < dim_; ++i) col[static_cast<std::size_t>(i)] = other.at(i, j);
        if (!contains(col)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------- Cotype

Cotype::Cotype(std::vector<std::int64_t> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) throw DomainError("cotype must have at least one entry");
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
        if (alpha_[i] < 1) throw DomainError("cotype entries must be positive");
        if (i > 0 && alpha_[i - 1] % alpha_[i] != 0)
            throw DomainError("cotype entries must satisfy alpha_{i+1} | alpha_i");
    }
}

mpz_class Cotype::index() const {
    mpz_class n = 1;
    for (auto a : alpha_) n *= static_cast<long>(a);
    return n;
}

int Cotype::corank() const {
    for (int i = dim(); i >= 1; --i)
        if (alpha_[static_cast<std::size_t>(i - 1)] != 1) return i;
    return 0;
}

std::vector<int> Cotype::p_exponents(std::int64_t p) const {
    if (p < 2) throw DomainError("prime must be at least 2");
    std::vector<int> out;
    out.reserve(alpha_.size());
    for (auto a : alpha_) {
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        out.push_back(v);
    }
    return out;
}

Partition Cotype::p_part(std::int64_t p) const { return partition_from_exponents(p_exponents(p)); }

std::string Cotype::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < alpha_.size(); ++i) os << (i ? "," : "") << alpha_[i];
    os << ")";
    return os.str();
}

Cotype cotype_from_smith(const SmithForm& snf) {
    if (snf.free_rank != 0) throw DomainError("cotype requires a full-rank matrix");
    std::vector<std::int64_t> alpha;
    alpha.reserve(snf.diag.size());
    for (auto it = snf.diag.rbegin(); it != snf.diag.rend(); ++it) {
        if (!it->fits_slong_p()) throw DomainError("invariant factor exceeds 64 bits");
        alpha.push_back(it->get_si());
    }
    return Cotype(std::move(alpha));
}

Cotype cotype_of(const HermiteBasis& basis) {
    const auto d = static_cast<std::size_t>(basis.dim());
    if (auto diag = smith_diagonal_small(basis.entries(), d, d)) {
        std::reverse(diag->begin(), diag->end());
        return Cotype(std::move(*diag));
    }
    return cotype_from_smith(smith_normal_form(basis.to_matrix()));
}

// ------------------------------------------------------------------- counting

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t a = 1; a * a <= n; ++a)
        if (n % a == 0) {
            small.push_back(a);
            if (a != n / a) large.push_back(n / a);
        }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

void check_dim(int d) {
    if (d < 1) throw DomainError("dimension must be positive");
}

}  // namespace

mpz_class count_hnf(int d, std::uint64_t n) {
    check_dim(d);
    if (n == 0) throw DomainError("index must be positive");
    if (d == 1) return 1;
    mpz_class total = 0;
    for (auto a : divisors(n)) {
        mpz_class w;
        mpz_ui_pow_ui(w.get_mpz_t(), a, static_cast<unsigned long>(d - 1));
        total += w * count_hnf(d - 1, n / a);
    }
    return total;
}

mpz_class count_hnf_below(int d, std::uint64_t bound) {
    mpz_class total = 0;
    for (std::uint64_t n = 1; n < bound; ++n) total += count_hnf(d, n);
    return total;
}

std::vector<std::vector<std::int64_t>> diagonal_tuples(int d, std::uint64_t n) {
    check_dim(d);
    if (n == 0) throw DomainError("index must be positive");
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur;
    auto rec = [&](auto&& self, int left, std::uint64_t rest) -> void {
        if (left == 1) {
            cur.push_back(static_cast<std::int64_t>(rest));
            out.push_back(cur);
            cur.pop_back();
            return;
        }
        for (auto a : divisors(rest)) {
            cur.push_back(static_cast<std::int64_t>(a));
            self(self, left - 1, rest / a);
            cur.pop_back();
        }
    };
    rec(rec, d, n);
    return out;
}

namespace {

// Visits every HNF with the given diagonal, passing its row-major entries.
template <class Visit>
void for_each_hnf_with_diagonal(int d, const std::vector<std::int64_t>& diag, Visit&& visit) {
    const auto n = static_cast<std::size_t>(d);
    std::vector<std::int64_t> entries(n * n, 0);
    struct Slot {
        std::size_t pos;
        std::int64_t bound;
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < n; ++i) {
        entries[i * n + i] = diag[i];
        if (diag[i] > 1)
            for (std::size_t j = i + 1; j < n; ++j) slots.push_back({i * n + j, diag[i]});
    }
    for (;;) {
        visit(std::span<const std::int64_t>(entries));
        std::size_t k = 0;
        for (; k < slots.size(); ++k) {
            auto& v = entries[slots[k].pos];
            if (++v < slots[k].bound) break;
            v = 0;
        }
        if (k == slots.size()) return;
    }
}

void check_budget(const mpz_class& count, const EnumerationLimits& limits) {
    if (count > mpz_class(static_cast<unsigned long>(limits.max_matrices)))
        throw ResourceLimit("enumeration needs " + count.get_str() + " matrices, cap is " +
                            std::to_string(limits.max_matrices));
}

}  // namespace

void enumerate_hnf(int d, std::uint64_t n, const std::function<void(const HermiteBasis&)>& visit,
                   const EnumerationLimits& limits) {
    check_dim(d);
    check_budget(count_hnf(d, n), limits);
    for (const auto& diag : diagonal_tuples(d, n))
        for_each_hnf_with_diagonal(d, diag, [&](std::span<const std::int64_t> e) {
            visit(HermiteBasis(d, std::vector<std::int64_t>(e.begin(), e.end())));
        });
}

mpz_class CotypeTally::corank_at_most(int m) const {
    mpz_class total = 0;
    for (const auto& [c, n] : counts)
        if (c.corank() <= m) total += n;
    return total;
}

mpz_class CotypeTally::count_of(const Cotype& c) const {
    auto it = counts.find(c);
    return it == counts.end() ? mpz_class(0) : it->second;
}

namespace {

using CotypeKey = std::array<std::int64_t, kMaxEnumerationDim>;

struct KeyHash {
    std::size_t operator()(const CotypeKey& k) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

using LocalCounts = std::unordered_map<CotypeKey, std::uint64_t, KeyHash>;

void tally_tuple(int d, const std::vector<std::int64_t>& diag, LocalCounts& counts) {
    const auto n = static_cast<std::size_t>(d);
    std::array<std::int64_t, kMaxEnumerationDim * kMaxEnumerationDim> work{};
    for_each_hnf_with_diagonal(d, diag, [&](std::span<const std::int64_t> e) {
        std::copy(e.begin(), e.end(), work.begin());
        CotypeKey key{};
        if (detail::smith_reduce_inplace(std::span<std::int64_t>(work.data(), n * n), n, n)) {
            for (std::size_t i = 0; i < n; ++i) key[i] = work[(n - 1 - i) * n + (n - 1 - i)];
        } else {
            Cotype c = cotype_of(HermiteBasis(d, std::vector<std::int64_t>(e.begin(), e.end())));
            std::copy(c.alpha().begin(), c.alpha().end(), key.begin());
        }
        ++counts[key];
    });
}

}  // namespace

CotypeTally tally_index_range(int d, std::uint64_t lo, std::uint64_t hi, const EnumerationLimits& limits,
                              unsigned workers) {
    check_dim(d);
    if (d > kMaxEnumerationDim) throw DomainError("enumeration supports d <= 6");
    if (lo < 1) lo = 1;
    mpz_class budget = 0;
    for (std::uint64_t n = lo; n < hi; ++n) budget += count_hnf(d, n);
    check_budget(budget, limits);

    std::vector<std::vector<std::int64_t>> tuples;
    for (std::uint64_t n = lo; n < hi; ++n)
        for (auto& t : diagonal_tuples(d, n)) tuples.push_back(std::move(t));

    workers = std::max(1u, workers);
    std::vector<LocalCounts> partial(workers);
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < tuples.size(); i += workers) tally_tuple(d, tuples[i], partial[w]);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }

    CotypeTally tally;
    tally.dim = d;
    tally.bound = hi;
    std::map<CotypeKey, std::uint64_t> merged;
    for (const auto& part : partial)
        for (const auto& [k, v] : part) merged[k] += v;
    for (const auto& [k, v] : merged) {
        mpz_class c;
        mpz_set_ui(c.get_mpz_t(), v);
        tally.counts.emplace(Cotype(std::vector<std::int64_t>(k.begin(), k.begin() + d)), c);
        tally.total += c;
    }
    return tally;
}

CotypeTally tally_cotypes(int d, std::uint64_t bound, const EnumerationLimits& limits, unsigned workers) {
    if (bound < 1) throw DomainError("bound must be positive");
    return tally_index_range(d, 1, bound, limits, workers);
}

// --------------------------------------------------------- generating tuples

mpz_class count_generating_tuples(int d, int p, const Partition& lambda, CountMode mode) {
    check_dim(d);
    if (lambda.rank() > d) throw DomainError("partition has more parts than the ambient rank d");
    if (mode == CountMode::closed_form) {
        mpz_class total = 1, pp = p;
        for (int j = 0; j < lambda.rank(); ++j) {
            const int l = lambda.part(j + 1);
            mpz_class a, b, c;
            mpz_pow_ui(a.get_mpz_t(), pp.get_mpz_t(), static_cast<unsigned long>(l * d));
            mpz_pow_ui(b.get_mpz_t(), pp.get_mpz_t(), static_cast<unsigned long>(j));
            mpz_pow_ui(c.get_mpz_t(), pp.get_mpz_t(), static_cast<unsigned long>((l - 1) * d));
            total *= a - b * c;
        }
        return total;
    }
    FiniteAbelianPGroup ambient(p, std::vector<int>(static_cast<std::size_t>(d), lambda.largest()));
    return count_generating_tuples_in(ambient, lambda);
}

}  // namespace cotype
