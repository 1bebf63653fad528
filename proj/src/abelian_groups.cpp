#include "cotype/abelian_groups.hpp"

#include "cotype/errors.hpp"
#include "cotype/finite_group.hpp"
#include "cotype/qcombinatorics.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cotype {

std::string format_high(const HighFloat& x, int digits) { return x.str(digits); }

bool is_prime(long n) {
    if (n < 2) return false;
    for (long a = 2; a * a <= n; ++a)
        if (n % a == 0) return false;
    return true;
}

AbelianPGroupType::AbelianPGroupType(int prime, Partition parts) : p(prime), lambda(std::move(parts)) {
    if (!is_prime(p)) throw DomainError("group type needs a prime, got " + std::to_string(p));
}

mpz_class AbelianPGroupType::order() const {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(lambda.size()));
    return out;
}

std::string AbelianPGroupType::to_string() const {
    std::ostringstream os;
    os << "p=" << p << " type " << lambda.to_string();
    return os.str();
}

namespace {

mpz_class power(long base, long exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return out;
}

mpq_class inverse_power(long base, long exp) { return mpq_class(1, 1) / mpq_class(power(base, exp)); }

mpz_class aut_closed_form(int p, const Partition& lambda) {
    // Parts in increasing order e_1 ≤ … ≤ e_r; d_k / c_k are the last / first
    // positions holding the value e_k.
    std::vector<int> e(lambda.parts().rbegin(), lambda.parts().rend());
    const long r = static_cast<long>(e.size());
    mpz_class total = 1;
    for (long k = 1; k <= r; ++k) {
        const int ek = e[static_cast<std::size_t>(k - 1)];
        long dk = k, ck = k;
        while (dk < r && e[static_cast<std::size_t>(dk)] == ek) ++dk;
        while (ck > 1 && e[static_cast<std::size_t>(ck - 2)] == ek) --ck;
        total *= power(p, dk) - power(p, k - 1);
        total *= power(p, static_cast<long>(ek) * (r - dk));
        total *= power(p, static_cast<long>(ek - 1) * (r - ck + 1));
    }
    return total;
}

mpz_class aut_tuple_identity(int p, const Partition& lambda) {
    const int r = lambda.rank();
    mpq_class rhs(power(p, static_cast<long>(lambda.size()) * r));
    for (int j = 0; j < r; ++j) rhs *= mpq_class(1) - inverse_power(p, r - j);
    rhs /= mpq_class(count_subgroups_of_type(r, p, lambda));
    rhs.canonicalize();
    if (rhs.get_den() != 1) throw ArithmeticBug("generating-tuple identity gave a non-integer |Aut|");
    return rhs.get_num();
}

}  // namespace

mpz_class count_subgroups_of_type(int d, int p, const Partition& lambda) {
    if (lambda.rank() > d) return 0;
    Partition conj = conjugate(lambda);
    mpz_class total = 1;
    const mpz_class pp = p;
    for (int i = 1; i <= lambda.largest(); ++i) {
        const int li = conj.part(i), lnext = conj.part(i + 1);
        total *= power(p, static_cast<long>(lnext) * (d - li));
        total *= q_binomial(d - lnext, li - lnext).evaluate(pp);
    }
    return total;
}

mpz_class aut_order(const AbelianPGroupType& g, AutMethod method) {
    switch (method) {
        case AutMethod::closed_form:
            return aut_closed_form(g.p, g.lambda);
        case AutMethod::tuple_identity:
            return aut_tuple_identity(g.p, g.lambda);
        case AutMethod::brute_force:
            return count_generating_tuples_in(FiniteAbelianPGroup(g.p, g.lambda), g.lambda);
    }
    throw DomainError("unknown automorphism method");
}

bool embeds(const AbelianPGroupType& h, const AbelianPGroupType& g) {
    if (h.p != g.p) throw PrimeMismatch("embedding test needs groups over the same prime");
    if (h.rank() > g.rank()) return false;
    for (int i = 1; i <= h.rank(); ++i)
        if (h.lambda.part(i) > g.lambda.part(i)) return false;
    return true;
}

bool embeds_brute_force(const AbelianPGroupType& h, const AbelianPGroupType& g) {
    if (h.p != g.p) throw PrimeMismatch("embedding test needs groups over the same prime");
    FiniteAbelianPGroup model(g.p, g.lambda);
    for (const auto& s : model.all_subgroups())
        if (model.subgroup_type(s) == h.lambda) return true;
    return false;
}

mpq_class q_pochhammer_tail(int p, int lo, int hi) {
    mpq_class out = 1;
    for (int j = std::max(lo, 1); j <= hi; ++j) out *= mpq_class(1) - inverse_power(p, j);
    out.canonicalize();
    return out;
}

HighFloat infinite_product_log_tail(int p, int terms) {
    HighFloat q = HighFloat(1) / p;
    return 2 * pow(q, terms + 1) / (1 - q);
}

MassValue cohen_lenstra_mass(const AbelianPGroupType& g, int terms) {
    if (terms < 1) throw DomainError("product truncation must be at least 1");
    MassValue m;
    m.exact = mpq_class(mpz_class(1), aut_order(g));
    m.exact.canonicalize();
    m.truncated_factor = q_pochhammer_tail(g.p, 1, terms);
    m.product_terms = terms;
    m.value = to_high(m.exact) * to_high(m.truncated_factor);
    // The omitted factor lies in [exp(−L), 1].
    m.tail_bound = m.value * (1 - exp(-infinite_product_log_tail(g.p, terms)));
    return m;
}

MassValue rank_d_mass(const AbelianPGroupType& g, int d) {
    if (d < 1) throw DomainError("rank_d_mass needs d >= 1");
    const int r = g.rank();
    if (r > d)
        throw RankExceedsDimension("group of rank " + std::to_string(r) + " has no mass at d = " +
                                   std::to_string(d));
    MassValue m;
    m.exact = mpq_class(mpz_class(1), aut_order(g)) * q_pochhammer_tail(g.p, 1, d) *
              q_pochhammer_tail(g.p, d - r + 1, d);
    m.exact.canonicalize();
    m.truncated_factor = 1;
    m.value = to_high(m.exact);
    return m;
}

std::vector<AbelianPGroupType> group_types_in_box(int p, int max_rank, int max_part) {
    std::vector<AbelianPGroupType> out;
    for (auto& lam : partitions_in_box(max_rank, max_part)) out.emplace_back(p, std::move(lam));
    return out;
}

}  // namespace cotype
