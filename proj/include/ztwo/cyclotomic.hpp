#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ztwo/rational.hpp"

namespace ztwo {

/// Number of power-basis coefficients of Q(zeta_{2^level}): 2^{level-1}, or 1
/// for the rational levels 0 and 1.
std::size_t cyclotomic_dimension(unsigned level);

/// Exact element of Q(zeta_{2^n}) in the power basis {zeta^i}, reduced modulo
/// x^{2^{n-1}} + 1. The compatible system zeta_{2^k} = zeta_{2^n}^{2^{n-k}}
/// links the levels.
class CyclotomicNumber {
public:
    CyclotomicNumber() : CyclotomicNumber(0) {}
    explicit CyclotomicNumber(unsigned level);
    CyclotomicNumber(unsigned level, std::vector<Rational> coeffs);

    static CyclotomicNumber from_rational(const Rational& q, unsigned level);
    /// zeta_{2^k}^exponent written at `level`; requires k <= level.
    static CyclotomicNumber root_of_unity(unsigned level, unsigned k, long exponent);

    unsigned level() const { return level_; }
    std::size_t dimension() const { return coeffs_.size(); }
    std::span<const Rational> coeffs() const { return coeffs_; }
    const Rational& coeff(std::size_t i) const { return coeffs_[i]; }

    bool is_zero() const;
    /// True when all non-constant coefficients vanish.
    bool is_rational() const;
    /// Constant coefficient; throws unless is_rational().
    const Rational& as_rational() const;

    CyclotomicNumber embed_to_level(unsigned target) const;
    /// sigma_t : zeta -> zeta^t for odd t.
    CyclotomicNumber galois(long t) const;

    CyclotomicNumber operator-() const;
    CyclotomicNumber& operator+=(const CyclotomicNumber& b);
    CyclotomicNumber& operator-=(const CyclotomicNumber& b);
    CyclotomicNumber& operator*=(const CyclotomicNumber& b);
    CyclotomicNumber& operator*=(const Rational& q);

    friend CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b) { return a += b; }
    friend CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b) { return a -= b; }
    friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b);
    friend CyclotomicNumber operator*(CyclotomicNumber a, const Rational& q) { return a *= q; }
    friend CyclotomicNumber operator*(const Rational& q, CyclotomicNumber a) { return a *= q; }
    friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b);

private:
    void check_same_level(const CyclotomicNumber& b) const;

    unsigned level_ = 0;
    std::vector<Rational> coeffs_;
};

/// Norm from Q(zeta_{2^n}) to Q, i.e. Res(x^{2^{n-1}} + 1, a(x)); positive on
/// positive rationals. Computed through the tower of relative norms
/// a(x) a(-x) = e(x^2)^2 - x^2 o(x^2)^2.
Rational field_norm(const CyclotomicNumber& a);

/// ord_2 with ord_2(2) = 1: ord_2(N(a)) / 2^{level-1}.
DyadicValuation ord2(const CyclotomicNumber& a);

/// a == b modulo the ideal generated by `modulus` in the 2-adic valuation ring.
bool congruent_mod(const CyclotomicNumber& a, const CyclotomicNumber& b, const CyclotomicNumber& modulus);
/// a == b modulo 2^threshold, threshold a rational valuation.
bool congruent_mod_valuation(const CyclotomicNumber& a, const CyclotomicNumber& b, const Rational& threshold);

/// Lift both operands to the larger level.
unsigned common_level(const CyclotomicNumber& a, const CyclotomicNumber& b);

/// "c0 + c1*z + ...", z = zeta_{2^level}; "0" for zero.
std::string to_string(const CyclotomicNumber& a);

}  // namespace ztwo
