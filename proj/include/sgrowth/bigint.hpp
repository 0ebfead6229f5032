#pragma once

// Thin helpers over GMP's C++ interface. Every count in the library is an
// mpz_class; every exact probability or series coefficient is an mpq_class.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgrowth {

using BigInt = mpz_class;
using Rational = mpq_class;

/// n! for small n.
BigInt factorial(unsigned long n);

/// Binomial coefficient C(n, k); zero when k > n.
BigInt binomial(unsigned long n, unsigned long k);

/// (n)_k = n (n-1) ... (n-k+1).
BigInt falling_factorial(unsigned long n, unsigned long k);

BigInt ipow(const BigInt& base, unsigned long exponent);

inline std::string to_decimal(const BigInt& value) { return value.get_str(10); }

/// "p/q", or "p" when the denominator is one.
std::string to_decimal(const Rational& value);

BigInt parse_decimal(const std::string& text);

/// Natural logarithm of a positive integer, accurate to double precision
/// regardless of magnitude.
long double log_of(const BigInt& value);

/// log(p/q) for positive p/q.
long double log_of(const Rational& value);

/// Converts to double through the exponent-split GMP routines so that huge
/// numerators and denominators do not overflow.
double to_double(const Rational& value);

/// Exact integer quotient; throws std::domain_error when `den` does not
/// divide `num`.
BigInt exact_quotient(const BigInt& num, const BigInt& den, const char* what);

/// Integral value of a rational; throws std::domain_error otherwise.
BigInt integral_value(const Rational& value, const char* what);

}  // namespace sgrowth
