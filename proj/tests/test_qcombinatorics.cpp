#include <doctest.h>

#include "cotype/errors.hpp"
#include "cotype/qcombinatorics.hpp"

#include <map>
#include <vector>

using namespace cotype;

namespace {

// Independent oracle: q-Pascal recursion [n,k] = [n−1,k] + q^{n−k}[n−1,k−1].
IntPolynomial pascal_qbinomial(int n, int k) {
    static std::map<std::pair<int, int>, IntPolynomial> memo;
    if (k < 0 || k > n) return {};
    if (k == 0 || k == n) return IntPolynomial(1);
    auto key = std::make_pair(n, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    IntPolynomial v = pascal_qbinomial(n - 1, k) +
                      pascal_qbinomial(n - 1, k - 1).shifted(static_cast<std::size_t>(n - k));
    memo.emplace(key, v);
    return v;
}

}  // namespace

TEST_CASE("q_int") {
    CHECK(q_int(0).is_zero());
    CHECK(q_int(1) == IntPolynomial(1));
    CHECK(q_int(4) == IntPolynomial{1, 1, 1, 1});
    CHECK_THROWS_AS(q_int(-1), DomainError);
}

TEST_CASE("q_factorial") {
    CHECK(q_factorial(0) == IntPolynomial(1));
    CHECK(q_factorial(1) == IntPolynomial(1));
    CHECK(q_factorial(2) == IntPolynomial{1, 1});
    CHECK(q_factorial(3) == IntPolynomial{1, 2, 2, 1});
    // [n]! at q = 1 is n!.
    CHECK(q_factorial(6).evaluate(mpz_class(1)) == 720);
}

TEST_CASE("q_binomial values and edge cases") {
    CHECK(q_binomial(2, 1) == IntPolynomial{1, 1});
    CHECK(q_binomial(4, 2) == IntPolynomial{1, 1, 2, 1, 1});
    CHECK(q_binomial(3, 5).is_zero());
    CHECK(q_binomial(3, -1).is_zero());
    CHECK(q_binomial(0, 0) == IntPolynomial(1));
}

TEST_CASE("q_binomial matches the Pascal oracle and is symmetric for n <= 12") {
    for (int n = 0; n <= 12; ++n)
        for (int k = 0; k <= n; ++k) {
            CHECK(q_binomial(n, k) == pascal_qbinomial(n, k));
            CHECK(q_binomial(n, k) == q_binomial(n, n - k));
        }
}

TEST_CASE("q_multinomial") {
    std::vector<int> single{5};
    CHECK(q_multinomial(single) == IntPolynomial(1));
    std::vector<int> ones{1, 1};
    CHECK(q_multinomial(ones) == q_binomial(2, 1));
    std::vector<int> p211{2, 1, 1};
    CHECK(q_multinomial(p211) == q_binomial(4, 2) * q_binomial(2, 1));
    CHECK_THROWS_AS(q_multinomial(std::vector<int>{}), DomainError);
}

TEST_CASE("q_multinomial equals the telescoping product of binomials") {
    std::vector<std::vector<int>> cases{{3, 2, 1}, {1, 4}, {2, 2, 2}, {0, 3, 1}, {1, 1, 1, 1}};
    for (const auto& parts : cases) {
        IntPolynomial product(1);
        int rest = 0;
        for (int m : parts) rest += m;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            product *= q_binomial(rest, parts[i]);
            rest -= parts[i];
        }
        CHECK(q_multinomial(parts) == product);
    }
}

TEST_CASE("q_binom_subset") {
    CHECK(q_binom_subset(DescentSet::empty(3)) == IntPolynomial(1));
    CHECK(q_binom_subset(DescentSet(2, {1})) == IntPolynomial{1, 1});
    CHECK(q_binom_subset(DescentSet(3, {2, 1})) == IntPolynomial{1, 2, 2, 1});
    // d itself is allowed in the general form; its gap m₀ is zero.
    CHECK(q_binom_subset(3, {3}) == IntPolynomial(1));
    CHECK(q_binom_subset(4, {1, 4}) == q_binomial(4, 1));
}

TEST_CASE("DescentSet validation") {
    CHECK_THROWS_AS(DescentSet(3, {3}), DomainError);
    CHECK_THROWS_AS(DescentSet(3, {0}), DomainError);
    CHECK_THROWS_AS(DescentSet(4, {2, 2}), DomainError);
    DescentSet s(5, {1, 4, 2});
    CHECK(s.elements() == std::vector<int>{4, 2, 1});
    CHECK(s.gaps() == std::vector<int>{1, 2, 1, 1});
    CHECK(DescentSet::from_mask(5, s.mask()) == s);
}

TEST_CASE("descents and inversions") {
    CHECK(descents(Permutation::identity(3)).size() == 0);
    CHECK(descents(Permutation({2, 1, 3})).elements() == std::vector<int>{1});
    CHECK(descents(Permutation({3, 2, 1})).elements() == std::vector<int>{2, 1});
    CHECK(inversions(Permutation::identity(3)) == 0);
    CHECK(inversions(Permutation({2, 1, 3})) == 1);
    CHECK(inversions(Permutation({3, 2, 1})) == 3);
    CHECK_THROWS_AS(Permutation({1, 1, 2}), DomainError);
}

TEST_CASE("descent polynomials: frozen values") {
    for (int d = 1; d <= 5; ++d) {
        CHECK(descent_poly_inclusion_exclusion(DescentSet::empty(d)) == IntPolynomial(1));
        CHECK(descent_poly_permutations(DescentSet::empty(d)) == IntPolynomial(1));
        CHECK(descent_poly_determinant(DescentSet::empty(d)) == IntPolynomial(1));
    }
    CHECK(descent_poly_inclusion_exclusion(DescentSet(2, {1})) == IntPolynomial{0, 1});
    IntPolynomial q_plus_q2{0, 1, 1};
    CHECK(descent_poly_inclusion_exclusion(DescentSet(3, {1})) == q_plus_q2);
    CHECK(descent_poly_permutations(DescentSet(3, {1})) == q_plus_q2);
    CHECK(descent_poly_determinant(DescentSet(3, {1})) == q_plus_q2);
    // Only the reversal has every descent: w = q^{d(d−1)/2}.
    CHECK(descent_poly_determinant(DescentSet(4, {3, 2, 1})) == IntPolynomial::q_power(6));
}

TEST_CASE("descent polynomials: cross-method agreement at (4,{3,1}) and (5,{4,2})") {
    DescentSet a(4, {3, 1});
    CHECK(descent_poly_inclusion_exclusion(a) == descent_poly_permutations(a));
    CHECK(descent_poly_determinant(a) == descent_poly_permutations(a));
    DescentSet b(5, {4, 2});
    auto w = descent_poly_permutations(b);
    CHECK(descent_poly_inclusion_exclusion(b) == w);
    CHECK(descent_poly_determinant(b) == w);
}

TEST_CASE("permutation method honours its cap") {
    CHECK_THROWS_AS(descent_poly_permutations(DescentSet::empty(10)), CapExceeded);
    CHECK_NOTHROW(descent_poly_permutations(DescentSet::empty(4), 4));
    CHECK_THROWS_AS(descent_poly_permutations(DescentSet::empty(5), 4), CapExceeded);
}

TEST_CASE("descent polynomials partition S_d, are nonnegative, and start at q^|λ|") {
    for (int d = 1; d <= 6; ++d) {
        mpz_class total = 0;
        for (std::uint32_t mask = 0; mask < (1u << (d - 1)); ++mask) {
            DescentSet lam = DescentSet::from_mask(d, mask);
            IntPolynomial w = descent_poly_permutations(lam);
            total += w.evaluate(mpz_class(1));
            for (const auto& c : w.coeffs()) CHECK(c >= 0);
            CHECK(w.lowest_degree() >= static_cast<long>(lam.size()));
        }
        mpz_class fact = 1;
        for (int j = 2; j <= d; ++j) fact *= j;
        CHECK(total == fact);
    }
}

TEST_CASE("bareiss determinant handles a zero pivot") {
    using P = IntPolynomial;
    std::vector<std::vector<P>> m{{P{}, P{1}}, {P{1}, P{0, 1}}};
    CHECK(bareiss_determinant(m) == P(-1));
    std::vector<std::vector<P>> singular{{P{1, 1}, P{2, 2}}, {P{1}, P{2}}};
    CHECK(bareiss_determinant(singular).is_zero());
}

TEST_CASE("q-identities") {
    for (int e = 0; e <= 4; ++e) CHECK(verify_lemma_qid(0, e));
    CHECK(verify_lemma_qid(1, 0));
    CHECK(verify_lemma_qid(8, 4));
    for (int d = 1; d <= 6; ++d) CHECK(verify_lemma_qid2(d, 1));
    CHECK(verify_lemma_qid2(3, 2));
    CHECK(verify_lemma_qid2(6, 4));
    CHECK_THROWS_AS(verify_lemma_qid2(3, 4), DomainError);
    CHECK_THROWS_AS(verify_lemma_qid2(3, 0), DomainError);
}
