#include "ztwo/rational.hpp"

#include <stdexcept>

namespace ztwo {

Rational make_rational(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

long ord2_integer(const Integer& x) {
    if (x == 0) throw std::domain_error("ord2 of zero integer");
    return static_cast<long>(mpz_scan1(x.get_mpz_t(), 0));
}

long ord2_rational(const Rational& q) {
    if (q == 0) throw std::domain_error("ord2 of zero rational");
    return ord2_integer(q.get_num()) - ord2_integer(q.get_den());
}

Integer pow_integer(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

const Rational& DyadicValuation::value() const {
    if (!value_) throw std::logic_error("valuation is infinite");
    return *value_;
}

bool operator==(const DyadicValuation& a, const DyadicValuation& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const DyadicValuation& a, const DyadicValuation& b) {
    if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    int c = cmp(*a.value_, *b.value_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string DyadicValuation::to_string() const { return value_ ? ztwo::to_string(*value_) : "inf"; }

DyadicValuation DyadicValuation::parse(const std::string& text) {
    if (text == "inf") return {};
    return DyadicValuation(parse_rational(text));
}

DyadicValuation operator+(const DyadicValuation& a, const DyadicValuation& b) {
    if (a.is_infinite() || b.is_infinite()) return {};
    return DyadicValuation(Rational(a.value() + b.value()));
}

}  // namespace ztwo
