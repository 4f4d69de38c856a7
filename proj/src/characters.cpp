#include "ztwo/characters.hpp"

#include <numeric>
#include <stdexcept>

namespace ztwo {

namespace {

constexpr unsigned kMaxLayer = 40;

std::uint64_t mask_bits(unsigned bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

std::uint64_t reduce_mod_pow2(std::int64_t a, unsigned bits) {
    // Two's complement wrap is exact modulo 2^bits.
    return static_cast<std::uint64_t>(a) & mask_bits(bits);
}

std::uint64_t inverse_mod_pow2(std::uint64_t x, unsigned bits) {
    // Newton iteration; x odd. Each step doubles the number of correct bits.
    std::uint64_t inv = x;  // correct to 3 bits for odd x
    for (int i = 0; i < 6; ++i) inv *= 2 - x * inv;
    return inv & mask_bits(bits);
}

}  // namespace

bool is_square_free(std::int64_t d) {
    if (d <= 0) return false;
    for (std::int64_t q = 2; q * q <= d; ++q) {
        if (d % q == 0) {
            d /= q;
            if (d % q == 0) return false;
        }
    }
    return true;
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::vector<std::int64_t> prime_divisors(std::int64_t d) {
    if (d <= 0) throw std::invalid_argument("prime_divisors: non-positive argument");
    std::vector<std::int64_t> out;
    for (std::int64_t q = 2; q * q <= d; ++q) {
        if (d % q == 0) {
            out.push_back(q);
            while (d % q == 0) d /= q;
        }
    }
    if (d > 1) out.push_back(d);
    return out;
}

void CharSpec::validate() const {
    if (layer > kMaxLayer) throw std::invalid_argument("layer " + std::to_string(layer) + " exceeds " + std::to_string(kMaxLayer));
    if (twist_power > 2) throw std::invalid_argument("twist power must be 0, 1 or 2");
    if (!is_square_free(twist)) throw std::invalid_argument("twist " + std::to_string(twist) + " is not a positive square-free integer");
    if (twist % 2 == 0) {
        if (!allow_even_twist) throw std::invalid_argument("even twist " + std::to_string(twist) + " requires allow_even_twist");
        if (layer != 0) throw std::invalid_argument("even twist is only supported at layer 0");
    }
}

bool CharSpec::is_primitive() const { return !(has_twist() && twist_power == 2); }

std::int64_t CharSpec::modulus() const {
    std::int64_t m = layer >= 1 ? (std::int64_t{1} << (layer + 2)) : 1;
    if (has_twist()) m = std::lcm(m, fundamental_discriminant(twist));
    return m;
}

CharSpec CharSpec::primitive() const {
    if (is_primitive()) return *this;
    return CharSpec{layer, 1, 0, false};
}

std::string CharSpec::label() const {
    std::string s;
    if (layer >= 1) s = "chi" + std::to_string(layer);
    if (has_twist()) {
        if (!s.empty()) s += "*";
        s += "psi" + std::to_string(twist);
        if (twist_power == 2) s += "^2";
    }
    return s.empty() ? "trivial" : s;
}

std::uint64_t dlog5(unsigned n, std::int64_t a) {
    if (a % 2 == 0) throw std::invalid_argument("dlog5: even argument");
    const unsigned bits = n + 2;
    std::uint64_t x = reduce_mod_pow2(a, bits);
    if ((x & 3) == 3) x = reduce_mod_pow2(-static_cast<std::int64_t>(x), bits);
    const std::uint64_t mask = mask_bits(bits);
    std::uint64_t inv = inverse_mod_pow2(5, bits);  // 5^{-2^j}
    std::uint64_t e = 0;
    for (unsigned j = 0; j < n; ++j) {
        // x == 1 (mod 2^{j+2}) here; bit j decides x mod 2^{j+3}.
        if (((x - 1) >> (j + 2)) & 1) {
            e |= std::uint64_t{1} << j;
            x = (x * inv) & mask;
        }
        inv = (inv * inv) & mask;
    }
    return e;
}

CyclotomicNumber chi_eval(unsigned n, std::int64_t a) {
    if (n < 1) throw std::invalid_argument("chi_eval: layer must be >= 1");
    if (a % 2 == 0) return CyclotomicNumber(n);
    return CyclotomicNumber::root_of_unity(n, n, static_cast<long>(dlog5(n, a)));
}

int kronecker(std::int64_t a, std::int64_t b) {
    static constexpr int kTwo[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && b % 2 == 0) return 0;
    int v = 0;
    while (b % 2 == 0) {
        b /= 2;
        ++v;
    }
    int k = 1;
    if (v % 2 == 1) k = kTwo[a & 7];
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k;
    }
    // b odd and positive from here: Jacobi symbol with reciprocity.
    while (true) {
        if (a == 0) return b > 1 ? 0 : k;
        v = 0;
        while (a % 2 == 0) {
            a /= 2;
            ++v;
        }
        if (v % 2 == 1) k *= kTwo[b & 7];
        if (a & b & 2) k = -k;
        const std::int64_t r = a < 0 ? -a : a;
        a = b % r;
        b = r;
    }
}

std::int64_t fundamental_discriminant(std::int64_t d) {
    if (!is_square_free(d)) throw std::invalid_argument("fundamental_discriminant: " + std::to_string(d) + " is not square-free");
    if (d % 4 == 1) return d;
    return 4 * d;
}

int psi_eval(std::int64_t d, std::int64_t a) {
    if (!is_square_free(d)) throw std::invalid_argument("psi_eval: " + std::to_string(d) + " is not square-free");
    if (d == 1) return 1;
    return kronecker(fundamental_discriminant(d), a);
}

UnitValue char_unit(const CharSpec& spec, std::int64_t a) {
    const unsigned level = spec.layer >= 1 ? spec.layer : 1;
    const std::uint64_t order = std::uint64_t{1} << level;
    std::uint64_t e = 0;
    if (spec.layer >= 1) {
        if (a % 2 == 0) return {};
        e = dlog5(spec.layer, a);
    }
    if (spec.has_twist()) {
        const int s = kronecker(fundamental_discriminant(spec.twist), a);
        if (s == 0) return {};
        if (spec.twist_power == 1 && s < 0) e += order / 2;
    }
    return {false, e & (order - 1)};
}

CyclotomicNumber unit_to_cyclotomic(const UnitValue& u, unsigned level) {
    if (u.zero) return CyclotomicNumber(level);
    const unsigned k = level >= 1 ? level : 1;
    if (level == 0) return CyclotomicNumber::from_rational(u.exponent % 2 ? -1 : 1, 0);
    return CyclotomicNumber::root_of_unity(level, k, static_cast<long>(u.exponent));
}

CyclotomicNumber char_eval(const CharSpec& spec, std::int64_t a) {
    spec.validate();
    return unit_to_cyclotomic(char_unit(spec, a), spec.layer);
}

std::int64_t conductor(const CharSpec& spec) {
    spec.validate();
    const std::int64_t m = spec.modulus();
    // chi is defined modulo c iff it is trivial on units a == 1 (mod c).
    auto induced_from = [&](std::int64_t c) {
        for (std::int64_t a = 1; a <= m; a += c) {
            if (std::gcd(a, m) != 1) continue;
            const UnitValue u = char_unit(spec, a);
            if (u.zero || u.exponent != 0) return false;
        }
        return true;
    };
    std::int64_t c = m;
    for (std::int64_t q : prime_divisors(m)) {
        while (c % q == 0 && induced_from(c / q)) c /= q;
    }
    return c;
}

FrobeniusConstant frobenius_constant(std::int64_t p) {
    if (p <= 2 || !is_prime(p)) throw std::invalid_argument("frobenius_constant: " + std::to_string(p) + " is not an odd prime");
    FrobeniusConstant fc;
    fc.prime = p;
    fc.p_star = (p % 4 == 1) ? p : -p;
    fc.f = ord2_integer(Integer(static_cast<long>((fc.p_star - 1) / 4)));
    return fc;
}

}  // namespace ztwo
