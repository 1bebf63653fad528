#include "cotype/polynomial.hpp"

#include "cotype/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace cotype {

IntPolynomial::IntPolynomial(long constant) : coeffs_{mpz_class(constant)} { trim(); }

IntPolynomial::IntPolynomial(const mpz_class& constant) : coeffs_{constant} { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
    coeffs_.reserve(coeffs.size());
    for (long c : coeffs) coeffs_.emplace_back(c);
    trim();
}

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPolynomial IntPolynomial::monomial(const mpz_class& coeff, std::size_t exponent) {
    std::vector<mpz_class> c(exponent + 1);
    c[exponent] = coeff;
    return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

long IntPolynomial::lowest_degree() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return static_cast<long>(i);
    return -1;
}

mpz_class IntPolynomial::coeff(std::size_t exponent) const {
    return exponent < coeffs_.size() ? coeffs_[exponent] : mpz_class(0);
}

mpq_class IntPolynomial::evaluate(const mpq_class& at) const {
    mpq_class acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= at;
        acc += *it;
    }
    acc.canonicalize();
    return acc;
}

mpz_class IntPolynomial::evaluate(const mpz_class& at) const {
    mpz_class acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= at;
        acc += *it;
    }
    return acc;
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    trim();
    return *this;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            mpz_addmul(out[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
    return IntPolynomial(std::move(out));
}

IntPolynomial& IntPolynomial::operator*=(const IntPolynomial& rhs) {
    *this = *this * rhs;
    return *this;
}

IntPolynomial& IntPolynomial::operator*=(const mpz_class& scalar) {
    for (auto& c : coeffs_) c *= scalar;
    trim();
    return *this;
}

IntPolynomial operator-(IntPolynomial a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

IntPolynomial IntPolynomial::shifted(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<mpz_class> c(k);
    c.insert(c.end(), coeffs_.begin(), coeffs_.end());
    return IntPolynomial(std::move(c));
}

std::string IntPolynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const mpz_class& c = coeffs_[i];
        if (c == 0) continue;
        mpz_class mag = abs(c);
        if (first) {
            if (c < 0) os << "−";
        } else {
            os << (c < 0 ? " − " : " + ");
        }
        first = false;
        if (i == 0) {
            os << mag;
            continue;
        }
        if (mag != 1) os << mag << "·";
        os << "q";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p) { return os << p.to_string(); }

PolyDivision divide(const IntPolynomial& dividend, const IntPolynomial& divisor) {
    if (divisor.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<mpz_class> rem = dividend.coeffs();
    const auto& dv = divisor.coeffs();
    const std::size_t dn = dv.size();
    if (rem.size() < dn) return {IntPolynomial{}, dividend};
    std::vector<mpz_class> quot(rem.size() - dn + 1);
    mpz_class r;
    for (std::size_t top = rem.size(); top-- >= dn;) {
        const mpz_class& lead = rem[top];
        if (lead == 0) continue;
        if (!mpz_divisible_p(lead.get_mpz_t(), dv.back().get_mpz_t())) break;
        mpz_class factor = lead / dv.back();
        std::size_t shift = top - (dn - 1);
        quot[shift] = factor;
        for (std::size_t j = 0; j < dn; ++j) rem[shift + j] -= factor * dv[j];
    }
    return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

IntPolynomial divide_exact(const IntPolynomial& dividend, const IntPolynomial& divisor) {
    auto [q, r] = divide(dividend, divisor);
    if (!r.is_zero())
        throw ArithmeticBug("inexact polynomial division: (" + dividend.to_string() + ") / (" +
                            divisor.to_string() + ") leaves " + r.to_string());
    return q;
}

}  // namespace cotype
