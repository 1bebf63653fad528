#include "cotype/lattice.hpp"

#include "cotype/errors.hpp"
#include "smith_internal.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace cotype {

namespace {

struct BigOps {
    using Int = mpz_class;
    static bool is_zero(const Int& x) { return x == 0; }
    static bool abs_less(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }
    static Int quotient(const Int& a, const Int& b) { return a / b; }
    static bool divides(const Int& d, const Int& x) { return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0; }
    static bool sub_mul(Int& x, const Int& q, const Int& y) {
        mpz_submul(x.get_mpz_t(), q.get_mpz_t(), y.get_mpz_t());
        return true;
    }
    static bool add(Int& x, const Int& y) {
        x += y;
        return true;
    }
    static void negate(Int& x) { x = -x; }
};

struct SmallOps {
    using Int = std::int64_t;
    static constexpr Int kLimit = Int{1} << 62;
    static bool is_zero(Int x) { return x == 0; }
    static bool abs_less(Int a, Int b) { return std::llabs(a) < std::llabs(b); }
    static Int quotient(Int a, Int b) { return a / b; }
    static bool divides(Int d, Int x) { return x % d == 0; }
    static bool sub_mul(Int& x, Int q, Int y) {
        Int prod, out;
        if (__builtin_mul_overflow(q, y, &prod) || __builtin_sub_overflow(x, prod, &out)) return false;
        if (out >= kLimit || out <= -kLimit) return false;
        x = out;
        return true;
    }
    static bool add(Int& x, Int y) {
        Int out;
        if (__builtin_add_overflow(x, y, &out) || out >= kLimit || out <= -kLimit) return false;
        x = out;
        return true;
    }
    static void negate(Int& x) { x = -x; }
};

// In-place reduction to Smith form. Returns false if an Ops step overflowed.
template <class Ops>
bool reduce(std::span<typename Ops::Int> a, std::size_t rows, std::size_t cols) {
    auto at = [&](std::size_t i, std::size_t j) -> typename Ops::Int& { return a[i * cols + j]; };
    const std::size_t n = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j) {
                    if (Ops::is_zero(at(i, j))) continue;
                    if (pi == rows || Ops::abs_less(at(i, j), at(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == rows) return true;  // remaining block is zero
            if (pi != t)
                for (std::size_t j = 0; j < cols; ++j) std::swap(at(pi, j), at(t, j));
            if (pj != t)
                for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, pj), at(i, t));

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (Ops::is_zero(at(i, t))) continue;
                auto q = Ops::quotient(at(i, t), at(t, t));
                for (std::size_t j = t; j < cols; ++j)
                    if (!Ops::sub_mul(at(i, j), q, at(t, j))) return false;
                if (!Ops::is_zero(at(i, t))) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (Ops::is_zero(at(t, j))) continue;
                auto q = Ops::quotient(at(t, j), at(t, t));
                for (std::size_t i = t; i < rows; ++i)
                    if (!Ops::sub_mul(at(i, j), q, at(i, t))) return false;
                if (!Ops::is_zero(at(t, j))) clean = false;
            }
            if (!clean) continue;

            std::size_t bad_row = rows;
            for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!Ops::divides(at(t, t), at(i, j))) {
                        bad_row = i;
                        break;
                    }
            if (bad_row == rows) break;
            for (std::size_t j = t; j < cols; ++j)
                if (!Ops::add(at(t, j), at(bad_row, j))) return false;
        }
        if (at(t, t) < 0) Ops::negate(at(t, t));
    }
    return true;
}

}  // namespace

namespace detail {

bool smith_reduce_inplace(std::span<std::int64_t> a, std::size_t rows, std::size_t cols) {
    return reduce<SmallOps>(a, rows, cols);
}

}  // namespace detail

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DomainError("ragged matrix literal");
        for (long v : r) data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

SmithForm smith_normal_form(const IntMatrix& m) {
    std::vector<mpz_class> a;
    a.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
    reduce<BigOps>(std::span<mpz_class>(a), m.rows(), m.cols());
    SmithForm out;
    const std::size_t n = std::min(m.rows(), m.cols());
    for (std::size_t t = 0; t < n; ++t) {
        const mpz_class& v = a[t * m.cols() + t];
        if (v == 0)
            ++out.free_rank;
        else
            out.diag.push_back(v);
    }
    // Columns beyond the square part contribute nothing; rows beyond it are free.
    if (m.rows() > m.cols()) out.free_rank += static_cast<int>(m.rows() - m.cols());
    return out;
}

std::optional<std::vector<std::int64_t>> smith_diagonal_small(std::span<const std::int64_t> entries,
                                                               std::size_t rows, std::size_t cols) {
    if (entries.size() != rows * cols) throw DomainError("matrix entry count mismatch");
    std::vector<std::int64_t> a(entries.begin(), entries.end());
    for (auto v : a)
        if (v >= SmallOps::kLimit || v <= -SmallOps::kLimit) return std::nullopt;
    if (!reduce<SmallOps>(std::span<std::int64_t>(a), rows, cols)) return std::nullopt;
    const std::size_t n = std::min(rows, cols);
    std::vector<std::int64_t> diag(n);
    for (std::size_t t = 0; t < n; ++t) diag[t] = a[t * cols + t];
    return diag;
}

}  // namespace cotype
