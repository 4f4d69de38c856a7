#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ztwo/cyclotomic.hpp"

namespace ztwo {

/// chi_n^{[n >= 1]} * psi_d^power.
///
/// chi_n is the even character of order 2^n and conductor 2^{n+2} fixed by
/// chi_n(5) = zeta_{2^n}, chi_n(-1) = 1. psi_d is the Kronecker character of
/// Q(sqrt d). Power 2 gives the imprimitive chi_n * psi_d^2 whose values vanish
/// on integers sharing a factor with d.
struct CharSpec {
    unsigned layer = 0;
    std::int64_t twist = 1;
    unsigned twist_power = 1;
    /// Twist 2d (conductor 8d), layer 0 only.
    bool allow_even_twist = false;

    static CharSpec chi(unsigned n) { return {n, 1, 0, false}; }
    static CharSpec chi_psi(unsigned n, std::int64_t d, unsigned power = 1) { return {n, d, power, false}; }
    static CharSpec psi(std::int64_t d) { return {0, d, 1, (d % 2 == 0)}; }

    /// Throws std::invalid_argument when the fields violate the invariants.
    void validate() const;

    bool has_twist() const { return twist != 1 && twist_power != 0; }
    bool is_trivial() const { return layer == 0 && !has_twist(); }
    /// Primitive as evaluated (power 2 with a nontrivial twist is not).
    bool is_primitive() const;
    /// Period of the evaluated function a -> char_eval(spec, a).
    std::int64_t modulus() const;
    /// Level of the cyclotomic field holding the values.
    unsigned value_level() const { return layer; }

    /// The primitive character inducing this one: drops a square twist.
    CharSpec primitive() const;

    std::string label() const;

    friend bool operator==(const CharSpec&, const CharSpec&) = default;
    friend auto operator<=>(const CharSpec&, const CharSpec&) = default;
};

/// Discrete logarithm e with a == +-5^e (mod 2^{n+2}), a odd, 0 <= e < 2^n.
std::uint64_t dlog5(unsigned n, std::int64_t a);

CyclotomicNumber chi_eval(unsigned n, std::int64_t a);

/// Kronecker symbol (a/b) for arbitrary integers.
int kronecker(std::int64_t a, std::int64_t b);
/// Fundamental discriminant of Q(sqrt d), d > 0 square-free.
std::int64_t fundamental_discriminant(std::int64_t d);
/// psi_d(a) = (Delta/a).
int psi_eval(std::int64_t d, std::int64_t a);

/// Value of a character as zero or zeta_{2^L}^exponent, L = max(layer, 1).
struct UnitValue {
    bool zero = true;
    std::uint64_t exponent = 0;
};

UnitValue char_unit(const CharSpec& spec, std::int64_t a);
CyclotomicNumber char_eval(const CharSpec& spec, std::int64_t a);
CyclotomicNumber unit_to_cyclotomic(const UnitValue& u, unsigned level);

std::int64_t conductor(const CharSpec& spec);

bool is_square_free(std::int64_t d);
bool is_prime(std::int64_t p);
std::vector<std::int64_t> prime_divisors(std::int64_t d);

struct FrobeniusConstant {
    std::int64_t prime = 0;
    std::int64_t p_star = 0;
    long f = 0;
};

/// p* = (-1/p) p and f_p = ord_2((p* - 1)/4).
FrobeniusConstant frobenius_constant(std::int64_t p);

}  // namespace ztwo
