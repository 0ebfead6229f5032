#include "sgrowth/bigint.hpp"

#include <cmath>

namespace sgrowth {

BigInt factorial(unsigned long n)
{
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

BigInt binomial(unsigned long n, unsigned long k)
{
    if (k > n)
        return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

BigInt falling_factorial(unsigned long n, unsigned long k)
{
    if (k > n)
        return 0;
    BigInt out = 1;
    for (unsigned long j = 0; j < k; ++j)
        out *= n - j;
    return out;
}

BigInt ipow(const BigInt& base, unsigned long exponent)
{
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

std::string to_decimal(const Rational& value)
{
    if (value.get_den() == 1)
        return value.get_num().get_str(10);
    return value.get_num().get_str(10) + "/" + value.get_den().get_str(10);
}

BigInt parse_decimal(const std::string& text)
{
    BigInt out;
    if (text.empty() || out.set_str(text, 10) != 0)
        throw std::invalid_argument("not a decimal integer: '" + text + "'");
    return out;
}

long double log_of(const BigInt& value)
{
    if (sgn(value) <= 0)
        throw std::domain_error("log_of: non-positive argument");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, value.get_mpz_t());
    return std::log(static_cast<long double>(mant))
           + static_cast<long double>(exp2) * std::log(2.0L);
}

long double log_of(const Rational& value)
{
    return log_of(BigInt(value.get_num())) - log_of(BigInt(value.get_den()));
}

double to_double(const Rational& value)
{
    if (sgn(value) == 0)
        return 0.0;
    long en = 0;
    long ed = 0;
    double mn = mpz_get_d_2exp(&en, value.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, value.get_den_mpz_t());
    return std::ldexp(mn / md, static_cast<int>(en - ed));
}

BigInt exact_quotient(const BigInt& num, const BigInt& den, const char* what)
{
    if (sgn(den) == 0 || !mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
        throw std::domain_error(std::string(what) + ": non-integral quotient");
    BigInt out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

BigInt integral_value(const Rational& value, const char* what)
{
    if (value.get_den() != 1)
        throw std::domain_error(std::string(what) + ": value " + to_decimal(value)
                                + " is not integral");
    return value.get_num();
}

}  // namespace sgrowth
