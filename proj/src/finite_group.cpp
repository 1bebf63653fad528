#include "cotype/finite_group.hpp"

#include "cotype/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <utility>

namespace cotype {

namespace {

constexpr std::uint32_t kMaxElements = 1u << 16;

}  // namespace

FiniteAbelianPGroup::FiniteAbelianPGroup(int p, std::vector<int> exponents)
    : p_(p), exponents_(std::move(exponents)) {
    if (p < 2) throw DomainError("prime must be at least 2");
    for (int e : exponents_) {
        if (e < 0) throw DomainError("negative exponent");
        std::uint64_t m = 1;
        for (int i = 0; i < e; ++i) m *= static_cast<std::uint64_t>(p);
        if (m * order_ > kMaxElements) throw ResourceLimit("finite group too large for exhaustive search");
        moduli_.push_back(static_cast<std::uint32_t>(m));
        order_ *= static_cast<std::uint32_t>(m);
    }
    element_order_.resize(order_);
    for (std::uint32_t a = 0; a < order_; ++a) {
        std::uint32_t rest = a;
        int best = 0;
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            std::uint32_t v = rest % moduli_[i];
            rest /= moduli_[i];
            int ord = 0;
            if (v != 0) {
                ord = exponents_[i];
                while (v % static_cast<std::uint32_t>(p_) == 0) {
                    v /= static_cast<std::uint32_t>(p_);
                    --ord;
                }
            }
            best = std::max(best, ord);
        }
        element_order_[a] = best;
    }
}

FiniteAbelianPGroup::FiniteAbelianPGroup(int p, const Partition& lambda)
    : FiniteAbelianPGroup(p, lambda.parts()) {}

std::uint32_t FiniteAbelianPGroup::add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t m : moduli_) {
        std::uint32_t s = (a % m + b % m) % m;
        a /= m;
        b /= m;
        out += s * scale;
        scale *= m;
    }
    return out;
}

int FiniteAbelianPGroup::order_exponent(std::uint32_t a) const { return element_order_[a]; }

FiniteAbelianPGroup::Subset FiniteAbelianPGroup::trivial_subgroup() const {
    Subset s((order_ + 63) / 64, 0);
    s[0] = 1;
    return s;
}

FiniteAbelianPGroup::Subset FiniteAbelianPGroup::join(const Subset& subgroup, std::uint32_t x) const {
    if (contains(subgroup, x)) return subgroup;
    std::vector<std::uint32_t> members;
    for (std::uint32_t a = 0; a < order_; ++a)
        if (contains(subgroup, a)) members.push_back(a);
    Subset out(subgroup.size(), 0);
    // S + ⟨x⟩ = ∪_k (S + kx)
    std::uint32_t multiple = 0;
    do {
        for (std::uint32_t s : members) {
            std::uint32_t e = add(s, multiple);
            out[e >> 6] |= std::uint64_t{1} << (e & 63);
        }
        multiple = add(multiple, x);
    } while (multiple != 0);
    return out;
}

std::uint32_t FiniteAbelianPGroup::cardinality(const Subset& s) {
    std::uint32_t c = 0;
    for (auto w : s) c += static_cast<std::uint32_t>(std::popcount(w));
    return c;
}

Partition FiniteAbelianPGroup::subgroup_type(const Subset& subgroup) const {
    // |S[p^k]| = p^{λ′₁ + … + λ′_k}
    std::vector<int> conj;
    int prev_log = 0;
    for (int k = 1;; ++k) {
        std::uint32_t n = 0;
        for (std::uint32_t a = 0; a < order_; ++a)
            if (contains(subgroup, a) && element_order_[a] <= k) ++n;
        int log = 0;
        while (n > 1) {
            n /= static_cast<std::uint32_t>(p_);
            ++log;
        }
        if (log == prev_log) break;
        conj.push_back(log - prev_log);
        prev_log = log;
    }
    return conjugate(Partition(std::move(conj)));
}

std::vector<FiniteAbelianPGroup::Subset> FiniteAbelianPGroup::all_subgroups() const {
    std::set<Subset> seen{trivial_subgroup()};
    std::vector<Subset> frontier{trivial_subgroup()};
    while (!frontier.empty()) {
        std::vector<Subset> next;
        for (const auto& s : frontier)
            for (std::uint32_t x = 0; x < order_; ++x) {
                if (contains(s, x)) continue;
                Subset t = join(s, x);
                if (seen.insert(t).second) next.push_back(std::move(t));
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

mpz_class count_generating_tuples_in(const FiniteAbelianPGroup& ambient, const Partition& lambda) {
    const int r = lambda.rank();
    std::vector<std::uint32_t> target_size(static_cast<std::size_t>(r) + 1, 1);
    for (int i = 1; i <= r; ++i) {
        std::uint64_t s = target_size[static_cast<std::size_t>(i - 1)];
        for (int k = 0; k < lambda.part(i); ++k) s *= static_cast<std::uint64_t>(ambient.prime());
        if (s > ambient.order()) return 0;
        target_size[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(s);
    }
    std::vector<std::vector<std::uint32_t>> candidates(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        for (std::uint32_t x = 0; x < ambient.order(); ++x)
            if (ambient.order_exponent(x) == lambda.part(i + 1)) candidates[static_cast<std::size_t>(i)].push_back(x);

    std::map<std::pair<int, FiniteAbelianPGroup::Subset>, mpz_class> memo;
    auto rec = [&](auto&& self, int level, const FiniteAbelianPGroup::Subset& s) -> mpz_class {
        if (level == r) return 1;
        auto key = std::make_pair(level, s);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        mpz_class total = 0;
        for (std::uint32_t x : candidates[static_cast<std::size_t>(level)]) {
            auto t = ambient.join(s, x);
            // An injective image of the first level+1 cyclic factors.
            if (FiniteAbelianPGroup::cardinality(t) != target_size[static_cast<std::size_t>(level + 1)]) continue;
            total += self(self, level + 1, t);
        }
        memo.emplace(std::move(key), total);
        return total;
    };
    return rec(rec, 0, ambient.trivial_subgroup());
}

}  // namespace cotype
