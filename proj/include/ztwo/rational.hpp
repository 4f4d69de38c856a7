#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace ztwo {

using Integer = mpz_class;
/// Always canonical (lowest terms, positive denominator); every producer
/// in this library calls canonicalize() or goes through gmpxx operators.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

/// ord_2 of a nonzero integer.
long ord2_integer(const Integer& x);
/// ord_2 of a nonzero rational.
long ord2_rational(const Rational& q);

Integer pow_integer(const Integer& base, unsigned long exp);
Integer binomial(unsigned long n, unsigned long k);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

bool is_integral(const Rational& q);

/// 2-adic valuation of an element of Q(zeta_{2^n}); +inf for zero.
class DyadicValuation {
public:
    DyadicValuation() = default;  // +inf
    explicit DyadicValuation(Rational v) : value_(std::move(v)) {}

    static DyadicValuation infinity() { return {}; }

    bool is_infinite() const { return !value_.has_value(); }
    const Rational& value() const;

    friend bool operator==(const DyadicValuation& a, const DyadicValuation& b);
    friend std::strong_ordering operator<=>(const DyadicValuation& a, const DyadicValuation& b);

    /// "inf" or an exact fraction.
    std::string to_string() const;
    static DyadicValuation parse(const std::string& text);

private:
    std::optional<Rational> value_;
};

DyadicValuation operator+(const DyadicValuation& a, const DyadicValuation& b);

inline std::ostream& operator<<(std::ostream& os, const DyadicValuation& v) { return os << v.to_string(); }

}  // namespace ztwo
