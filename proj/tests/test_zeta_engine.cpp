#include "cotype/abelian_groups.hpp"
#include "cotype/errors.hpp"
#include "cotype/lattice.hpp"
#include "cotype/partition.hpp"
#include "cotype/qcombinatorics.hpp"
#include "cotype/zeta_engine.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cotype;

namespace {

// Number of sublattices of index n in Z^d from the Dirichlet series
// ζ(s)ζ(s−1)⋯ζ(s−d+1): repeated convolution with n ↦ n^k.
std::vector<mpz_class> zeta_product_oracle(int d, int nmax) {
    std::vector<mpz_class> a(static_cast<std::size_t>(nmax + 1), 0);
    a[1] = 1;
    for (int k = 0; k < d; ++k) {
        std::vector<mpz_class> b(a.size(), 0);
        for (int x = 1; x <= nmax; ++x)
            for (int y = 1; x * y <= nmax; ++y) {
                mpz_class yk;
                mpz_ui_pow_ui(yk.get_mpz_t(), static_cast<unsigned long>(y), static_cast<unsigned long>(k));
                b[static_cast<std::size_t>(x * y)] += a[static_cast<std::size_t>(x)] * yk;
            }
        a.swap(b);
    }
    return a;
}

double qd(int p, int e) { return std::pow(double(p), -e); }

}  // namespace

TEST_CASE("local factor text and shape") {
    CHECK(local_factor(1).to_string() == "1 / (1−t1)");
    CHECK(local_factor(2).to_string() == "(1 + q·t1) / ((1−t1)(1−t2))");
    const auto f3 = local_factor(3);
    CHECK(f3.numerator().size() == 4);
    CHECK(f3.to_string() == "(1 + (q + q^2)·t1 + (q + q^2)·t2 + q^3·t1·t2) / ((1−t1)(1−t2)(1−t3))");
    CHECK(local_factor(6).numerator().size() == 32);
    CHECK_THROWS_AS(local_factor(kLocalFactorCap + 1), CapExceeded);
    CHECK_THROWS_AS(local_factor(0), DomainError);
}

TEST_CASE("local factor numerators match the determinant formula") {
    for (int d = 1; d <= 6; ++d) {
        const auto f = local_factor(d);
        for (const auto& [mask, w] : f.numerator())
            CHECK(w == descent_poly_determinant(DescentSet::from_mask(d, mask)));
    }
}

TEST_CASE("local coefficients") {
    for (int d = 1; d <= 5; ++d) CHECK(local_coefficient(d, 3, std::vector<int>(static_cast<std::size_t>(d), 0)) == 1);
    for (int p : {2, 3, 5, 7}) CHECK(local_coefficient(2, p, std::vector<int>{1, 0}) == p + 1);
    CHECK_THROWS_AS(local_coefficient(3, 2, std::vector<int>{1, 2, 0}), NotWeaklyDecreasing);
    CHECK_THROWS_AS(local_coefficient(2, 2, std::vector<int>{1, 1, 1}), DomainError);
    CHECK_THROWS_AS(local_coefficient(2, 4, std::vector<int>{1}), DomainError);

    // d=3, ν=(2,1,0) counted directly at index 8.
    const auto tally = tally_index_range(3, 8, 9);
    CHECK(local_coefficient(3, 2, std::vector<int>{2, 1, 0}) == tally.count_of(Cotype({4, 2, 1})));
}

TEST_CASE("local coefficients agree with sublattice enumeration") {
    for (int d = 1; d <= 4; ++d)
        for (int p : {2, 3}) {
            for (int e = 0; e <= 4; ++e) {
                std::uint64_t n = 1;
                for (int k = 0; k < e; ++k) n *= static_cast<std::uint64_t>(p);
                const auto tally = tally_index_range(d, n, n + 1);
                mpz_class seen = 0;
                for (const auto& nu : partitions_of(e, d)) {
                    std::vector<std::int64_t> alpha(static_cast<std::size_t>(d), 1);
                    for (int i = 1; i <= nu.rank(); ++i) {
                        std::int64_t a = 1;
                        for (int k = 0; k < nu.part(i); ++k) a *= p;
                        alpha[static_cast<std::size_t>(i - 1)] = a;
                    }
                    std::vector<int> exps(nu.parts().begin(), nu.parts().end());
                    const mpz_class expected = tally.count_of(Cotype(alpha));
                    CHECK_MESSAGE(local_coefficient(d, p, exps) == expected, "d=", d, " p=", p, " ", nu.to_string());
                    CHECK(local_coefficient_series(d, p, exps) == expected);
                    seen += expected;
                }
                CHECK(seen == tally.total);
            }
        }
}

TEST_CASE("series expansion reproduces the coefficient formula") {
    for (int d = 1; d <= 5; ++d)
        for (int p : {2, 3, 5})
            for (int e = 0; e <= 5; ++e)
                for (const auto& nu : partitions_of(e, d)) {
                    std::vector<int> exps(nu.parts().begin(), nu.parts().end());
                    CHECK(local_coefficient_series(d, p, exps) == local_coefficient(d, p, exps));
                }
}

TEST_CASE("Dirichlet coefficients") {
    for (int d = 1; d <= 4; ++d) CHECK(dirichlet_coefficient(d, 1) == 1);
    CHECK(dirichlet_coefficient(2, 6) == 12);
    CHECK(dirichlet_coefficient(3, 2) == 7);
    for (int d = 1; d <= 4; ++d) {
        const auto oracle = zeta_product_oracle(d, 300);
        for (int n = 1; n <= 300; ++n) CHECK(dirichlet_coefficient(d, static_cast<std::uint64_t>(n)) == oracle[static_cast<std::size_t>(n)]);
    }
    // Large prime index: 1 + p for d = 2.
    CHECK(dirichlet_coefficient(2, 4294967311ull) == mpz_class("4294967312"));
    CHECK_THROWS_AS(dirichlet_coefficient(2, 0), DomainError);
}

TEST_CASE("corank factors at the pole") {
    for (int p : {2, 3, 5, 7}) {
        const mpq_class q(1, p);
        // θ₂ local factor.
        CHECK(corank_local_factor_at_pole(2, 1, p) == 1 + q * q);
        for (int d = 2; d <= 6; ++d) CHECK(corank_local_factor_at_pole(d, 1, p) == theta_local_factor(d, p));
    }
    CHECK(theta_local_factor(3, 2) == mpq_class(11, 8));
    CHECK_THROWS_AS(corank_local_factor_at_pole(3, 0, 2), DomainError);
    CHECK_THROWS_AS(corank_local_factor_at_pole(3, 4, 2), DomainError);
    CHECK_THROWS_AS(theta_local_factor(1, 2), DomainError);

    for (int d = 1; d <= 7; ++d)
        for (int m = 1; m <= d; ++m)
            for (int p : {2, 3, 5})
                CHECK_MESSAGE(corank_local_factor_at_pole(d, m, p) == corank_local_factor_via_descents(d, m, p),
                              "d=", d, " m=", m, " p=", p);

    // m = d: the density factor is 1 and the residue factor is (1−q)/Π_{j≤d}(1−q^j).
    for (int d = 1; d <= 6; ++d)
        for (int p : {2, 3, 5}) {
            CHECK(corank_density_local_factor(d, d, p) == 1);
            CHECK(corank_local_factor_at_pole(d, d, p) * q_pochhammer_tail(p, 1, d) == 1 - mpq_class(1, p));
        }
}

TEST_CASE("Stanley-Wang density matches the corank density factor") {
    for (int d = 1; d <= 6; ++d)
        for (int p : {2, 3, 5}) {
            CHECK(stanley_wang_Zd(d, p, d) == 1);
            for (int m = 1; m <= d; ++m) CHECK(stanley_wang_Zd(d, p, m) == corank_density_local_factor(d, m, p));
        }
    // Written out: (1−1/2)(1−1/4)(1 + (1+1/2)·(1/2)/(1−1/2)) at d=2, m=1, p=2.
    CHECK(stanley_wang_Zd(2, 2, 1) == mpq_class(1, 2) * mpq_class(3, 4) * (1 + mpq_class(3, 2)));
    // Random 2×2 matrix over Z_p has corank ≤ 1 unless it vanishes mod p.
    CHECK(stanley_wang_Zd(2, 3, 1) == 1 - mpq_class(1, 81));
    CHECK_THROWS_AS(stanley_wang_Zd(3, 2, 4), DomainError);
}

TEST_CASE("Euler products") {
    const double theta2 = 15 / (std::numbers::pi * std::numbers::pi);
    const auto r = corank_zeta_residue(2, 1, 100000);
    CHECK(std::abs(double(r.value) - theta2) <= double(r.tail_bound));
    CHECK(std::abs(double(r.value) - theta2) < 1e-5);
    const auto full = corank_zeta_residue(2, 2, 100000);
    CHECK(std::abs(double(full.value) - std::numbers::pi * std::numbers::pi / 6) <= double(full.tail_bound));

    for (int d = 2; d <= 6; ++d) {
        const auto a = corank_zeta_residue(d, 1, 20000);
        const auto b = theta_d(d, 20000);
        CHECK(double(abs(a.value - b.value)) <= double(a.tail_bound + b.tail_bound));
        CHECK(double(abs(a.value - b.value)) < 1e-20);
    }

    // The tail bound at a small cutoff covers the much longer product.
    for (int d : {2, 4, 7}) {
        const auto lo = corank_density(d, 1, 50);
        const auto hi = corank_density(d, 1, 200000);
        CHECK(double(abs(lo.value - hi.value)) <= double(lo.tail_bound));
        const auto rlo = corank_zeta_residue(d, 2, 10);
        const auto rhi = corank_zeta_residue(d, 2, 200000);
        CHECK(double(abs(rlo.value - rhi.value)) <= double(rlo.tail_bound));
    }
    CHECK_THROWS_AS(theta_d(1, 10), DomainError);
    CHECK_THROWS_AS(corank_density(3, 4, 10), DomainError);
}

TEST_CASE("squarefree density") {
    double p2 = 1;
    for (int j = 2; j <= 200; ++j) p2 *= 1 - qd(2, j);
    CHECK(double(squarefree_local_factor(2)) == doctest::Approx(p2).epsilon(1e-14));
    CHECK(double(squarefree_local_factor(2)) == doctest::Approx(0.5776).epsilon(1e-4));
    double last = 1;
    for (std::uint64_t cutoff : {2, 10, 100, 1000, 10000}) {
        const double v = double(squarefree_density(cutoff).value);
        CHECK(v < last);
        last = v;
    }
    const auto lo = squarefree_density(100);
    const auto hi = squarefree_density(100000);
    CHECK(double(abs(lo.value - hi.value)) <= double(lo.tail_bound));
}

TEST_CASE("exact factors, worker invariance and JSON") {
    EulerOptions exact_opt;
    exact_opt.keep_exact = true;
    const auto full = corank_density(4, 4, 500, exact_opt);
    REQUIRE(full.exact.has_value());
    CHECK(*full.exact == 1);
    CHECK(double(abs(full.value - 1)) < 1e-30);

    const auto t = theta_d(3, 60, exact_opt);
    REQUIRE(t.exact.has_value());
    CHECK(double(abs(to_high(*t.exact) - t.value)) < 1e-25);
    CHECK_THROWS_AS(theta_d(3, kExactProductCutoff + 1, exact_opt), ResourceLimit);

    EulerOptions one, many;
    one.workers = 1;
    many.workers = 5;
    CHECK(corank_density(6, 2, 300000, one).value == corank_density(6, 2, 300000, many).value);

    const auto j = t.to_json();
    CHECK(j.contains("value"));
    CHECK(j["prime_cutoff"] == 60);
    CHECK(j.contains("tail_bound"));
    CHECK(j.contains("exact_rational"));
    CHECK_FALSE(theta_d(3, 60).to_json().contains("exact_rational"));
}

TEST_CASE("primes") {
    CHECK(primes_up_to(1).empty());
    CHECK(primes_up_to(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(1000000).size() == 78498);
}
