#include "cotype/zeta_engine.hpp"

#include "cotype/abelian_groups.hpp"
#include "cotype/errors.hpp"
#include "cotype/partition.hpp"
#include "cotype/qcombinatorics.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <thread>

namespace cotype {

namespace {

mpz_class power(long base, long exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return out;
}

void require_prime(long p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

void require_corank_range(int d, int m) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (m < 1 || m > d)
        throw DomainError("corank bound m=" + std::to_string(m) + " outside [1, " + std::to_string(d) + "]");
}

std::vector<int> checked_exponents(int d, std::span<const int> nu) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (static_cast<int>(nu.size()) > d) throw DomainError("exponent tuple longer than the dimension");
    std::vector<int> out(nu.begin(), nu.end());
    out.resize(static_cast<std::size_t>(d), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 0) throw DomainError("exponents must be nonnegative");
        if (i > 0 && out[i] > out[i - 1]) throw NotWeaklyDecreasing("exponent tuple is not weakly decreasing");
    }
    return out;
}

// Σ_{i=0}^{m} [d,i]_q q^{i²} / Π_{j=1}^{i}(1−q^j), generic over the number type.
template <class T>
T corank_sum(int d, int m, const T& q) {
    T total = 1, binom = 1, pochhammer = 1, qi = 1;
    for (int i = 1; i <= m; ++i) {
        T qd = 1, qk = 1;
        for (int j = 0; j < d - i + 1; ++j) qd *= q;
        for (int j = 0; j < i; ++j) qk *= q;
        binom = binom * (T(1) - qd) / (T(1) - qk);
        pochhammer *= T(1) - qk;
        qi = 1;
        for (int j = 0; j < i * i; ++j) qi *= q;
        total += binom * qi / pochhammer;
    }
    return total;
}

template <class T>
T pochhammer(int n, const T& q) {
    T out = 1, qj = 1;
    for (int j = 1; j <= n; ++j) {
        qj *= q;
        out *= T(1) - qj;
    }
    return out;
}

mpq_class inverse(long p) { return mpq_class(1, p); }

using FloatFactor = std::function<HighFloat(std::uint32_t)>;
using ExactFactor = std::function<mpq_class(std::uint32_t)>;

// Primes past the cutoff but below this are handled individually in the tail.
constexpr std::uint32_t kSmallTailPrime = 16;
constexpr std::size_t kBlockSize = 2048;

// Multiplies f(p) over p ≤ cutoff. Every factor past the cutoff is assumed to
// be 1 + c_p with |c_p| ≤ C/p², which bounds the log of the tail by
// Σ_{P<p≤16} |log f(p)| + 2C/max(P,16).
EulerProductValue euler_product(std::uint64_t cutoff, double c_bound, const FloatFactor& f,
                                const ExactFactor& exact, const EulerOptions& opt,
                                const HighFloat& extra_log_tail = 0) {
    const auto primes = primes_up_to(cutoff);
    const std::size_t blocks = (primes.size() + kBlockSize - 1) / kBlockSize;
    std::vector<HighFloat> partial(std::max<std::size_t>(blocks, 1), HighFloat(1));

    unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(blocks, 1)));
    auto run = [&](unsigned w) {
        for (std::size_t b = w; b < blocks; b += workers) {
            HighFloat acc = 1;
            const std::size_t end = std::min(primes.size(), (b + 1) * kBlockSize);
            for (std::size_t i = b * kBlockSize; i < end; ++i) acc *= f(primes[i]);
            partial[b] = acc;
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    // Pairwise reduction in block order: the result is independent of the worker count.
    while (partial.size() > 1) {
        std::vector<HighFloat> next;
        for (std::size_t i = 0; i < partial.size(); i += 2)
            next.push_back(i + 1 < partial.size() ? partial[i] * partial[i + 1] : partial[i]);
        partial.swap(next);
    }

    EulerProductValue out;
    out.value = partial.front();
    out.prime_cutoff = cutoff;

    HighFloat log_tail = extra_log_tail;
    for (std::uint32_t p : primes_up_to(kSmallTailPrime))
        if (p > cutoff) log_tail += abs(log(f(p)));
    const double effective = static_cast<double>(std::max<std::uint64_t>(cutoff, kSmallTailPrime));
    log_tail += HighFloat(2 * c_bound) / effective;
    out.tail_bound = abs(out.value) * (exp(log_tail) - 1);

    if (opt.keep_exact) {
        if (!exact) throw DomainError("this product has no exact local factors");
        if (cutoff > kExactProductCutoff)
            throw ResourceLimit("exact Euler products are limited to cutoff " +
                                std::to_string(kExactProductCutoff));
        mpq_class acc = 1;
        for (std::uint32_t p : primes) acc *= exact(p);
        acc.canonicalize();
        out.exact = acc;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- local factor

LocalFactor::LocalFactor(int dim, std::map<std::uint32_t, IntPolynomial> numerator)
    : dim_(dim), numerator_(std::move(numerator)) {
    if (dim < 1) throw DomainError("local factor needs d >= 1");
}

mpq_class LocalFactor::series_coefficient(std::span<const int> c, const mpq_class& q) const {
    if (static_cast<int>(c.size()) != dim_) throw DomainError("exponent vector has the wrong length");
    std::uint32_t support = 0;
    for (int j = 1; j < dim_; ++j) {
        if (c[static_cast<std::size_t>(j - 1)] < 0) throw DomainError("negative series exponent");
        if (c[static_cast<std::size_t>(j - 1)] > 0) support |= 1u << (j - 1);
    }
    if (c.back() < 0) throw DomainError("negative series exponent");
    mpq_class total = 0;
    for (const auto& [mask, w] : numerator_)
        if ((mask & ~support) == 0) total += w.evaluate(q);
    return total;
}

std::string LocalFactor::to_string() const {
    std::vector<std::uint32_t> order;
    for (const auto& [mask, w] : numerator_) order.push_back(mask);
    std::sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });

    std::ostringstream num;
    bool first = true;
    for (std::uint32_t mask : order) {
        const IntPolynomial& w = numerator_.at(mask);
        if (w.is_zero()) continue;
        std::string vars;
        for (int j = 1; j < dim_; ++j)
            if (mask & (1u << (j - 1))) vars += (vars.empty() ? "t" : "·t") + std::to_string(j);
        std::string coeff = w.to_string();
        const bool single_term = w.lowest_degree() == w.degree();
        if (!vars.empty()) {
            if (w == IntPolynomial(1))
                coeff.clear();
            else if (!single_term)
                coeff = "(" + coeff + ")";
        }
        std::string term = coeff.empty() ? vars : (vars.empty() ? coeff : coeff + "·" + vars);
        if (!first) {
            if (term.rfind("−", 0) == 0)
                term = "− " + term.substr(std::string("−").size());
            else
                term = "+ " + term;
            num << ' ';
        }
        num << term;
        first = false;
    }
    std::string numerator = first ? "0" : num.str();
    if (numerator.find(' ') != std::string::npos) numerator = "(" + numerator + ")";

    std::string den;
    for (int j = 1; j <= dim_; ++j) den += "(1−t" + std::to_string(j) + ")";
    if (dim_ > 1) den = "(" + den + ")";
    return numerator + " / " + den;
}

LocalFactor local_factor(int d, int cap) {
    if (d < 1) throw DomainError("local factor needs d >= 1");
    if (d > cap)
        throw CapExceeded("local factor for d=" + std::to_string(d) + " exceeds the cap " + std::to_string(cap));
    std::map<std::uint32_t, IntPolynomial> numerator;
    for (std::uint32_t mask = 0; mask < (1u << (d - 1)); ++mask)
        numerator.emplace(mask, descent_poly_inclusion_exclusion(DescentSet::from_mask(d, mask)));
    return LocalFactor(d, std::move(numerator));
}

// ---------------------------------------------------------------- coefficients

mpz_class local_coefficient(int d, int p, std::span<const int> nu) {
    require_prime(p);
    auto exps = checked_exponents(d, nu);
    return count_subgroups_of_type(d, p, partition_from_exponents(exps));
}

mpz_class local_coefficient_series(int d, int p, std::span<const int> nu) {
    require_prime(p);
    auto exps = checked_exponents(d, nu);
    std::vector<int> c(static_cast<std::size_t>(d));
    long shift = 0;
    for (int j = 1; j <= d; ++j) {
        const int next = j < d ? exps[static_cast<std::size_t>(j)] : 0;
        c[static_cast<std::size_t>(j - 1)] = exps[static_cast<std::size_t>(j - 1)] - next;
        shift += static_cast<long>(c[static_cast<std::size_t>(j - 1)]) * j * (d - j);
    }
    mpq_class value = local_factor(d).series_coefficient(c, inverse(p)) * mpq_class(power(p, shift));
    value.canonicalize();
    if (value.get_den() != 1) throw ArithmeticBug("series coefficient is not an integer");
    return value.get_num();
}

mpz_class dirichlet_coefficient(int d, std::uint64_t n) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (n < 1) throw DomainError("index must be positive");
    mpz_class total = 1;
    auto local = [&](std::uint64_t p, int e) {
        mpz_class s = 0;
        for (const auto& nu : partitions_of(e, d)) s += count_subgroups_of_type(d, static_cast<int>(p), nu);
        total *= s;
    };
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) local(p, e);
    }
    if (n > 1) {
        if (n > static_cast<std::uint64_t>(INT32_MAX)) {
            // A prime p to the first power contributes [d,1]_p = 1 + p + … + p^{d−1}.
            mpz_class s = 0, pk = 1;
            for (int k = 0; k < d; ++k, pk *= static_cast<unsigned long>(n)) s += pk;
            total *= s;
        } else {
            local(n, 1);
        }
    }
    return total;
}

// ---------------------------------------------------------------- corank factors

mpq_class corank_local_factor_at_pole(int d, int m, int p) {
    require_corank_range(d, m);
    require_prime(p);
    const mpq_class q = inverse(p);
    mpq_class out = (1 - q) * corank_sum<mpq_class>(d, m, q);
    out.canonicalize();
    return out;
}

mpq_class corank_local_factor_via_descents(int d, int m, int p) {
    require_corank_range(d, m);
    require_prime(p);
    const mpq_class q = inverse(p);
    const int top = std::min(m, d - 1);
    mpq_class sum = 0;
    for (std::uint32_t mask = 0; mask < (1u << top); ++mask) {
        mpq_class term = descent_poly_inclusion_exclusion(DescentSet::from_mask(d, mask)).evaluate(q);
        for (int j = 1; j <= top; ++j)
            if (mask & (1u << (j - 1))) term /= mpq_class(power(p, static_cast<long>(j) * j));
        sum += term;
    }
    for (int j = 2; j <= m; ++j) sum /= 1 - mpq_class(1) / mpq_class(power(p, static_cast<long>(j) * j));
    sum.canonicalize();
    return sum;
}

mpq_class corank_density_local_factor(int d, int m, int p) {
    require_corank_range(d, m);
    require_prime(p);
    const mpq_class q = inverse(p);
    mpq_class out = pochhammer<mpq_class>(d, q) * corank_sum<mpq_class>(d, m, q);
    out.canonicalize();
    return out;
}

mpq_class stanley_wang_Zd(int d, int p, int m) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (m < 0 || m > d) throw DomainError("m outside [0, d]");
    require_prime(p);
    const mpq_class q = inverse(p);
    auto bracket = [&](int n) { return pochhammer<mpq_class>(n, q); };
    mpq_class sum = 0;
    for (int i = 0; i <= m; ++i)
        sum += bracket(d) / (mpq_class(power(p, static_cast<long>(i) * i)) * bracket(i) * bracket(i) * bracket(d - i));
    mpq_class out = bracket(d) * sum;
    out.canonicalize();
    return out;
}

// ---------------------------------------------------------------- Euler products

nlohmann::json EulerProductValue::to_json() const {
    nlohmann::json j;
    j["value"] = static_cast<double>(value);
    j["value_digits"] = format_high(value, 30);
    j["prime_cutoff"] = prime_cutoff;
    j["tail_bound"] = static_cast<double>(tail_bound);
    if (exact) j["exact_rational"] = exact->get_str();
    return j;
}

EulerProductValue corank_zeta_residue(int d, int m, std::uint64_t prime_cutoff, const EulerOptions& opt) {
    require_corank_range(d, m);
    // f_p = 1 − q + q(1−q^d)/(1−q) + R with 0 ≤ R ≤ 24q⁴, so |f_p − 1| ≤ 8q² for q ≤ 1/2.
    return euler_product(
        prime_cutoff, 8.0,
        [=](std::uint32_t p) {
            const HighFloat q = HighFloat(1) / p;
            return (1 - q) * corank_sum<HighFloat>(d, m, q);
        },
        [=](std::uint32_t p) { return corank_local_factor_at_pole(d, m, static_cast<int>(p)); }, opt);
}

EulerProductValue corank_density(int d, int m, std::uint64_t prime_cutoff, const EulerOptions& opt) {
    require_corank_range(d, m);
    if (m == d) {
        // Every local factor is identically 1.
        EulerProductValue one;
        one.value = 1;
        one.prime_cutoff = prime_cutoff;
        one.exact = mpq_class(1);
        return one;
    }
    // The factor is P(corank ≤ m) for a random p-adic matrix, in [1 − 4q⁴, 1].
    return euler_product(
        prime_cutoff, 12.0,
        [=](std::uint32_t p) {
            const HighFloat q = HighFloat(1) / p;
            return pochhammer<HighFloat>(d, q) * corank_sum<HighFloat>(d, m, q);
        },
        [=](std::uint32_t p) { return corank_density_local_factor(d, m, static_cast<int>(p)); }, opt);
}

HighFloat squarefree_local_factor(int p) {
    const HighFloat q = HighFloat(1) / p;
    HighFloat out = 1, qj = q;
    for (int j = 2; j <= kSquarefreeInnerTerms; ++j) {
        qj *= q;
        out *= 1 - qj;
    }
    return out;
}

EulerProductValue squarefree_density(std::uint64_t prime_cutoff, const EulerOptions& opt) {
    // 1 − Π_{j≥2}(1−q^j) ≤ q²/(1−q) ≤ 2q². Truncating each inner product at
    // j = 64 loses at most 2p^{−65} per prime, < 4·2^{−65} over all primes.
    const HighFloat inner = 4 * pow(HighFloat(2), -65);
    ExactFactor exact;
    if (opt.keep_exact)
        exact = [](std::uint32_t p) {
            return q_pochhammer_tail(static_cast<int>(p), 2, kSquarefreeInnerTerms);
        };
    return euler_product(
        prime_cutoff, 2.0, [](std::uint32_t p) { return squarefree_local_factor(static_cast<int>(p)); }, exact, opt,
        inner);
}

mpq_class theta_local_factor(int d, int p) {
    if (d < 2) throw DomainError("theta_d needs d >= 2");
    require_prime(p);
    mpq_class out = 1 + mpq_class(power(p, d - 1) - 1) / mpq_class(power(p, d + 1) - power(p, d));
    out.canonicalize();
    return out;
}

EulerProductValue theta_d(int d, std::uint64_t prime_cutoff, const EulerOptions& opt) {
    if (d < 2) throw DomainError("theta_d needs d >= 2");
    // The factor is 1 + q² + … + q^d, within 2q² of 1.
    return euler_product(
        prime_cutoff, 2.0,
        [=](std::uint32_t p) {
            const HighFloat q = HighFloat(1) / p;
            HighFloat out = 1, qj = q;
            for (int j = 2; j <= d; ++j) {
                qj *= q;
                out += qj;
            }
            return out;
        },
        [=](std::uint32_t p) { return theta_local_factor(d, static_cast<int>(p)); }, opt);
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t bound) {
    if (bound > (1ull << 32)) throw ResourceLimit("prime cutoff above 2^32");
    std::vector<std::uint32_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace cotype
