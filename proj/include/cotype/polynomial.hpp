#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace cotype {

/// Dense univariate polynomial in q over the integers.
///
/// coeffs()[i] multiplies q^i. The stored vector never ends in a zero
/// coefficient, so the zero polynomial has an empty coefficient vector and
/// equality is plain vector equality.
class IntPolynomial {
public:
    IntPolynomial() = default;
    IntPolynomial(long constant);  // NOLINT(google-explicit-constructor)
    IntPolynomial(const mpz_class& constant);  // NOLINT(google-explicit-constructor)
    IntPolynomial(std::initializer_list<long> coeffs);
    explicit IntPolynomial(std::vector<mpz_class> coeffs);

    static IntPolynomial monomial(const mpz_class& coeff, std::size_t exponent);
    static IntPolynomial q_power(std::size_t exponent) { return monomial(1, exponent); }

    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is reported as -1.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    // Exponent of the lowest nonzero term; -1 for zero.
    long lowest_degree() const;
    mpz_class coeff(std::size_t exponent) const;
    const mpz_class& leading() const { return coeffs_.back(); }

    mpq_class evaluate(const mpq_class& at) const;
    mpz_class evaluate(const mpz_class& at) const;

    IntPolynomial& operator+=(const IntPolynomial& rhs);
    IntPolynomial& operator-=(const IntPolynomial& rhs);
    IntPolynomial& operator*=(const IntPolynomial& rhs);
    IntPolynomial& operator*=(const mpz_class& scalar);

    // Multiplies by q^k.
    IntPolynomial shifted(std::size_t k) const;

    friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
    friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator-(IntPolynomial a);
    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) = default;

    // Canonical text, ascending exponents: "1 + 2·q + q^3", "−q^2", "0".
    std::string to_string() const;

private:
    void trim();

    std::vector<mpz_class> coeffs_;
};

struct PolyDivision {
    IntPolynomial quotient;
    IntPolynomial remainder;
};

/// Long division over Z[q]. Each step divides by the leading coefficient of
/// the divisor; when that division is not exact the step stops and the
/// remaining dividend is returned as remainder.
PolyDivision divide(const IntPolynomial& dividend, const IntPolynomial& divisor);

/// Division that must be exact; throws ArithmeticBug otherwise.
IntPolynomial divide_exact(const IntPolynomial& dividend, const IntPolynomial& divisor);

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p);

}  // namespace cotype
