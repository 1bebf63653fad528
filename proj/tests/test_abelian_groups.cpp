#include "cotype/abelian_groups.hpp"
#include "cotype/errors.hpp"
#include "cotype/partition.hpp"

#include <doctest.h>

#include <cmath>

using namespace cotype;

namespace {

AbelianPGroupType grp(int p, std::vector<int> parts) { return {p, Partition(std::move(parts))}; }

// Direct float product, independent of the rational implementation.
double euler_product(int p, int lo, int hi) {
    double out = 1;
    for (int j = lo; j <= hi; ++j) out *= 1 - std::pow(double(p), -j);
    return out;
}

}  // namespace

TEST_CASE("conjugate partitions") {
    CHECK(conjugate(Partition({3, 1})) == Partition({2, 1, 1}));
    CHECK(conjugate(Partition({2, 2})) == Partition({2, 2}));
    CHECK(conjugate(Partition(std::vector<int>{})) == Partition(std::vector<int>{}));
    for (const auto& lam : partitions_in_box(4, 4)) CHECK(conjugate(conjugate(lam)) == lam);
}

TEST_CASE("automorphism group orders") {
    for (int p : {2, 3, 5, 7}) CHECK(aut_order(grp(p, {1})) == p - 1);
    CHECK(aut_order(grp(2, {1, 1})) == 6);
    CHECK(aut_order(grp(2, {2, 1})) == 8);
    CHECK(aut_order(grp(2, {})) == 1);
    CHECK(aut_order(grp(3, {1, 1})) == 48);
    CHECK(aut_order(grp(2, {1, 1, 1})) == 168);
    CHECK(aut_order(grp(2, {2})) == 2);
}

TEST_CASE("three automorphism methods agree on small groups") {
    for (int p : {2, 3}) {
        const int max_order_exp = p == 2 ? 6 : 3;
        for (const auto& lam : partitions_in_box(max_order_exp, max_order_exp)) {
            if (lam.size() > max_order_exp) continue;
            AbelianPGroupType g(p, lam);
            const mpz_class closed = aut_order(g, AutMethod::closed_form);
            CHECK_MESSAGE(closed == aut_order(g, AutMethod::tuple_identity), g.to_string());
            CHECK_MESSAGE(closed == aut_order(g, AutMethod::brute_force), g.to_string());
        }
    }
    for (int p : {2, 3, 5})
        for (const auto& lam : partitions_in_box(6, 6))
            if (lam.size() <= 6) {
                AbelianPGroupType g(p, lam);
                CHECK(aut_order(g, AutMethod::closed_form) == aut_order(g, AutMethod::tuple_identity));
            }
}

TEST_CASE("subgroup counts of a fixed type") {
    // (Z/p)^d has [d,k]_p subgroups of order p^k.
    CHECK(count_subgroups_of_type(2, 2, Partition({1})) == 3);
    CHECK(count_subgroups_of_type(3, 2, Partition({1, 1})) == 7);
    CHECK(count_subgroups_of_type(2, 3, Partition({1, 1, 1})) == 0);
    CHECK(count_subgroups_of_type(3, 5, Partition(std::vector<int>{})) == 1);
}

TEST_CASE("embeddings") {
    CHECK(embeds(grp(2, {1}), grp(2, {2})));
    CHECK_FALSE(embeds(grp(2, {1, 1}), grp(2, {2})));
    CHECK(embeds(grp(2, {2, 1}), grp(2, {3, 1, 1})));
    CHECK_FALSE(embeds(grp(2, {2, 2}), grp(2, {3, 1, 1})));
    CHECK_THROWS_AS(embeds(grp(2, {1}), grp(3, {1})), PrimeMismatch);
    CHECK_THROWS_AS(embeds_brute_force(grp(2, {1}), grp(3, {1})), PrimeMismatch);

    int pairs = 0;
    for (const auto& g : group_types_in_box(2, 5, 5)) {
        if (g.lambda.size() > 5) continue;
        for (const auto& h : group_types_in_box(2, 5, 5)) {
            if (h.lambda.size() > g.lambda.size()) continue;
            CHECK_MESSAGE(embeds(h, g) == embeds_brute_force(h, g), h.to_string(), " in ", g.to_string());
            ++pairs;
        }
    }
    CHECK(pairs > 100);
}

TEST_CASE("Cohen-Lenstra masses") {
    const auto trivial = cohen_lenstra_mass(grp(2, {}));
    CHECK(double(trivial.value) == doctest::Approx(0.2887880950866024).epsilon(1e-13));
    CHECK(double(trivial.tail_bound) < 1e-18);
    CHECK(double(trivial.tail_bound) >= 0);

    // Mass ratios are ratios of automorphism orders.
    const auto z2 = cohen_lenstra_mass(grp(2, {1}));
    const auto v4 = cohen_lenstra_mass(grp(2, {1, 1}));
    CHECK(double(trivial.value / z2.value) == doctest::Approx(1.0));
    CHECK(double(z2.value / v4.value) == doctest::Approx(6.0));
    CHECK(cohen_lenstra_mass(grp(2, {2, 1})).exact == mpq_class(1, 8));
    CHECK_THROWS_AS(cohen_lenstra_mass(grp(2, {}), 0), DomainError);

    double partial = 0;
    for (const auto& g : group_types_in_box(2, 8, 8))
        if (g.lambda.size() <= 8) partial += double(cohen_lenstra_mass(g).value);
    CHECK(partial > 0.99);
    CHECK(partial < 1.0);
}

TEST_CASE("rank-d masses") {
    const auto m = rank_d_mass(grp(2, {}), 2);
    CHECK(m.exact == mpq_class(3, 8));
    CHECK(double(m.value) == doctest::Approx(euler_product(2, 1, 2)));
    CHECK(rank_d_mass(grp(2, {1}), 1).exact == mpq_class(1, 2) * mpq_class(1, 2));
    CHECK_THROWS_AS(rank_d_mass(grp(2, {1, 1, 1}), 2), RankExceedsDimension);
    CHECK_THROWS_AS(rank_d_mass(grp(2, {1, 1, 1}), 2), DomainError);

    // Groups with every part ≤ B and rank ≤ d exhaust nearly all the mass.
    auto partial_sum = [](int p, int d, int bound) {
        double s = 0;
        for (const auto& g : group_types_in_box(p, d, bound)) s += double(rank_d_mass(g, d).value);
        return s;
    };
    // The missing mass is a geometric tail: it halves with each extra level.
    for (int b = 4; b <= 12; ++b) {
        const double tail = 1 - partial_sum(2, 2, b);
        CHECK(tail > 0);
        CHECK(tail * std::ldexp(1.0, b) == doctest::Approx(9.0 / 14.0).epsilon(1e-4));
    }
    CHECK(partial_sum(2, 2, 10) > 0.999);
    CHECK(partial_sum(3, 3, 8) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(partial_sum(2, 1, 30) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("group type validation") {
    CHECK_THROWS_AS(AbelianPGroupType(4, Partition({1})), DomainError);
    CHECK(grp(3, {2, 1}).order() == 27);
    CHECK(q_pochhammer_tail(2, 3, 2) == 1);
    CHECK(q_pochhammer_tail(2, 1, 2) == mpq_class(3, 8));
}
