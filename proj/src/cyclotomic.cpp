#include "ztwo/cyclotomic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ztwo {

std::size_t cyclotomic_dimension(unsigned level) {
    if (level >= 63) throw std::length_error("cyclotomic level too large");
    return level <= 1 ? 1 : std::size_t{1} << (level - 1);
}

namespace {

// Power zeta_{2^level}^e as (index, negate) in the reduced basis.
std::pair<std::size_t, bool> reduce_exponent(unsigned level, long e) {
    if (level == 0) return {0, false};
    const long order = 1L << level;
    long r = e % order;
    if (r < 0) r += order;
    const long half = order / 2;
    if (r < half) return {static_cast<std::size_t>(r), false};
    return {static_cast<std::size_t>(r - half), true};
}

// Negacyclic product of integer polynomials modulo x^len + 1.
std::vector<Integer> negacyclic_mul(const std::vector<Integer>& a, const std::vector<Integer>& b) {
    const std::size_t len = a.size();
    std::vector<Integer> out(len);
    Integer t;
    for (std::size_t i = 0; i < len; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < len; ++j) {
            if (b[j] == 0) continue;
            t = a[i] * b[j];
            std::size_t k = i + j;
            if (k >= len)
                out[k - len] -= t;
            else
                out[k] += t;
        }
    }
    return out;
}

}  // namespace

CyclotomicNumber::CyclotomicNumber(unsigned level) : level_(level), coeffs_(cyclotomic_dimension(level)) {}

CyclotomicNumber::CyclotomicNumber(unsigned level, std::vector<Rational> coeffs)
    : level_(level), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != cyclotomic_dimension(level))
        throw std::invalid_argument("coefficient vector has length " + std::to_string(coeffs_.size()) +
                                    ", level " + std::to_string(level) + " needs " +
                                    std::to_string(cyclotomic_dimension(level)));
    for (auto& c : coeffs_) c.canonicalize();
}

CyclotomicNumber CyclotomicNumber::from_rational(const Rational& q, unsigned level) {
    CyclotomicNumber r(level);
    r.coeffs_[0] = q;
    return r;
}

CyclotomicNumber CyclotomicNumber::root_of_unity(unsigned level, unsigned k, long exponent) {
    if (k > level)
        throw std::invalid_argument("zeta_{2^" + std::to_string(k) + "} is not representable at level " +
                                    std::to_string(level));
    CyclotomicNumber r(level);
    const auto [idx, neg] = reduce_exponent(level, exponent * (1L << (level - k)));
    r.coeffs_[idx] = neg ? -1 : 1;
    return r;
}

bool CyclotomicNumber::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool CyclotomicNumber::is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

const Rational& CyclotomicNumber::as_rational() const {
    if (!is_rational()) throw std::logic_error("cyclotomic number is not rational");
    return coeffs_[0];
}

CyclotomicNumber CyclotomicNumber::embed_to_level(unsigned target) const {
    if (target < level_)
        throw std::invalid_argument("cannot embed level " + std::to_string(level_) + " into level " +
                                    std::to_string(target));
    CyclotomicNumber r(target);
    if (level_ <= 1) {
        r.coeffs_[0] = coeffs_[0];
        return r;
    }
    const std::size_t stride = std::size_t{1} << (target - level_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i * stride] = coeffs_[i];
    return r;
}

CyclotomicNumber CyclotomicNumber::galois(long t) const {
    if (t % 2 == 0) throw std::invalid_argument("galois: exponent must be odd");
    if (level_ <= 1) return *this;
    CyclotomicNumber r(level_);
    const long order = 1L << level_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        long e = static_cast<long>((static_cast<__int128>(i) * t) % order);
        const auto [idx, neg] = reduce_exponent(level_, e);
        if (neg)
            r.coeffs_[idx] -= coeffs_[i];
        else
            r.coeffs_[idx] += coeffs_[i];
    }
    return r;
}

void CyclotomicNumber::check_same_level(const CyclotomicNumber& b) const {
    if (level_ != b.level_)
        throw std::invalid_argument("level mismatch: " + std::to_string(level_) + " vs " + std::to_string(b.level_));
}

CyclotomicNumber CyclotomicNumber::operator-() const {
    CyclotomicNumber r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

CyclotomicNumber& CyclotomicNumber::operator+=(const CyclotomicNumber& b) {
    check_same_level(b);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator-=(const CyclotomicNumber& b) {
    check_same_level(b);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= b.coeffs_[i];
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const CyclotomicNumber& b) {
    *this = *this * b;
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const Rational& q) {
    for (auto& c : coeffs_) c *= q;
    return *this;
}

CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    a.check_same_level(b);
    const std::size_t len = a.coeffs_.size();
    CyclotomicNumber r(a.level_);
    Rational t;
    for (std::size_t i = 0; i < len; ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < len; ++j) {
            if (b.coeffs_[j] == 0) continue;
            t = a.coeffs_[i] * b.coeffs_[j];
            const std::size_t k = i + j;
            if (k >= len)
                r.coeffs_[k - len] -= t;
            else
                r.coeffs_[k] += t;
        }
    }
    return r;
}

bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return a.level_ == b.level_ && a.coeffs_ == b.coeffs_;
}

Rational field_norm(const CyclotomicNumber& a) {
    Integer den = 1;
    for (const auto& c : a.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> poly(a.dimension());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Rational& c = a.coeff(i);
        poly[i] = c.get_num() * (den / c.get_den());
    }
    // Relative norm down one level at a time: the even/odd split of a(x)
    // gives a(x) a(-x) = e(y)^2 - y o(y)^2 with y = x^2.
    while (poly.size() > 1) {
        const std::size_t half = poly.size() / 2;
        std::vector<Integer> ev(half), od(half);
        for (std::size_t i = 0; i < half; ++i) {
            ev[i] = poly[2 * i];
            od[i] = poly[2 * i + 1];
        }
        auto e2 = negacyclic_mul(ev, ev);
        auto o2 = negacyclic_mul(od, od);
        // y * o2 modulo y^half + 1: shift up by one with wraparound sign flip.
        std::vector<Integer> next(half);
        for (std::size_t i = 0; i < half; ++i) {
            const Integer& shifted = (i == 0) ? Integer(-o2[half - 1]) : o2[i - 1];
            next[i] = e2[i] - shifted;
        }
        poly = std::move(next);
    }
    const unsigned long degree = a.dimension();
    Rational norm(poly[0], pow_integer(den, degree));
    norm.canonicalize();
    return norm;
}

DyadicValuation ord2(const CyclotomicNumber& a) {
    if (a.is_zero()) return DyadicValuation::infinity();
    if (a.level() <= 1) return DyadicValuation(Rational(ord2_rational(a.coeff(0))));
    const Rational norm = field_norm(a);
    return DyadicValuation(make_rational(Integer(ord2_rational(norm)), Integer(static_cast<long>(a.dimension()))));
}

unsigned common_level(const CyclotomicNumber& a, const CyclotomicNumber& b) { return std::max(a.level(), b.level()); }

bool congruent_mod_valuation(const CyclotomicNumber& a, const CyclotomicNumber& b, const Rational& threshold) {
    const unsigned lvl = common_level(a, b);
    const auto diff = a.embed_to_level(lvl) - b.embed_to_level(lvl);
    return ord2(diff) >= DyadicValuation(threshold);
}

bool congruent_mod(const CyclotomicNumber& a, const CyclotomicNumber& b, const CyclotomicNumber& modulus) {
    if (modulus.is_zero()) throw std::invalid_argument("congruent_mod: zero modulus");
    return congruent_mod_valuation(a, b, ord2(modulus).value());
}

std::string to_string(const CyclotomicNumber& a) {
    std::string out;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const Rational& c = a.coeff(i);
        if (c == 0) continue;
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (out.empty()) out = negative ? "-" : "";
        else out += negative ? " - " : " + ";
        const std::string power = i == 0 ? "" : (i == 1 ? "z" : "z^" + std::to_string(i));
        if (power.empty()) out += to_string(mag);
        else if (mag == 1) out += power;
        else out += to_string(mag) + "*" + power;
    }
    return out.empty() ? "0" : out;
}

}  // namespace ztwo
