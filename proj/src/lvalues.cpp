#include "ztwo/lvalues.hpp"

#include <string>

#include "ztwo/bernoulli.hpp"
#include "ztwo/cache.hpp"

namespace ztwo {

namespace {

void require_m_positive(unsigned m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
}

}  // namespace

LValueEngine::LValueEngine(EngineOptions opts, LValueCache* cache) : opts_(opts), cache_(cache) {}

void LValueEngine::check_size(const CharSpec& spec) const {
    if (opts_.force_large) return;
    const std::int64_t limit = std::int64_t{1} << kSizeGuardLog2;
    if (spec.layer > kSizeGuardLog2 || (std::int64_t{1} << spec.layer) > limit / spec.twist)
        throw SizeGuardError("n + log2(d) exceeds " + std::to_string(kSizeGuardLog2) + " for " + spec.label() +
                             "; pass --force-large to override");
}

CyclotomicNumber LValueEngine::gen_bernoulli(const CharSpec& spec, unsigned m, std::int64_t d0) const {
    spec.validate();
    check_size(spec);
    if (d0 < 1 || d0 % spec.modulus() != 0)
        throw std::invalid_argument("gen_bernoulli: D0 = " + std::to_string(d0) + " is not a multiple of the modulus " +
                                    std::to_string(spec.modulus()));
    const auto sums = full_period_power_sums(spec, d0, m, opts_.fold, sum_options());
    // D0^{m-1} B_m(a/D0) = sum_i C(m,i) B_i D0^{i-1} a^{m-i}.
    const Integer dz(static_cast<long>(d0));
    CyclotomicNumber out(spec.layer);
    for (unsigned i = 0; i <= m; ++i) {
        const Rational b = bernoulli_number(i);
        if (b == 0) continue;
        Rational scale = Rational(binomial(m, i)) * b;
        if (i == 0)
            scale /= Rational(dz);
        else
            scale *= Rational(pow_integer(dz, i - 1));
        scale.canonicalize();
        out += sums[m - i] * scale;
    }
    return out;
}

LValueResult LValueEngine::compute_evaluation(const CharSpec& spec, unsigned m) const {
    require_m_positive(m);
    if (cache_) {
        if (auto hit = cache_->lookup(spec, m)) return *hit;
    }
    LValueResult r;
    r.spec = spec;
    r.m = m;
    r.value = gen_bernoulli(spec, m, spec.modulus()) * make_rational(-1, static_cast<long>(m));
    r.ord2 = ord2(r.value);
    if (cache_) cache_->insert(r);
    return r;
}

LValueResult LValueEngine::l_value(const CharSpec& spec, unsigned m) const {
    spec.validate();
    if (!spec.is_primitive())
        throw std::invalid_argument("l_value: " + spec.label() + " is not primitive; use l_value_imprimitive");
    return compute_evaluation(spec, m);
}

LValueResult LValueEngine::l_value_of_evaluation(const CharSpec& spec, unsigned m) const {
    spec.validate();
    return compute_evaluation(spec, m);
}

CyclotomicNumber LValueEngine::l_value_minus1_quadsum(const CharSpec& spec, unsigned k) const {
    spec.validate();
    check_size(spec);
    if (spec.is_trivial()) throw std::invalid_argument("l_value_minus1_quadsum: trivial character");
    if (k < 1) throw std::invalid_argument("l_value_minus1_quadsum: k must be >= 1");
    if (!is_even_character(spec)) throw std::invalid_argument("l_value_minus1_quadsum: character is not even");
    const std::int64_t d1 = spec.modulus();
    const std::int64_t top = d1 * static_cast<std::int64_t>(k);
    const auto sums = character_power_sums({spec, 1, top, 2, std::nullopt}, sum_options());
    return sums[2] * make_rational(-1, 2 * top);
}

LValueResult LValueEngine::l_value_imprimitive(const CharSpec& spec, std::int64_t strip, unsigned m) const {
    if (strip < 1) throw std::invalid_argument("l_value_imprimitive: strip must be positive");
    LValueResult r = l_value(spec, m);
    for (std::int64_t p : prime_divisors(strip)) {
        if (p == 1) continue;
        // 1 - chi(p) p^{m-1}
        CyclotomicNumber factor = CyclotomicNumber::from_rational(1, spec.layer) -
                                  char_eval(spec, p) * Rational(pow_integer(Integer(static_cast<long>(p)), m - 1));
        r.value *= factor;
        r.euler_factors_removed.push_back(p);
    }
    r.ord2 = ord2(r.value);
    return r;
}

CharacterSum LValueEngine::char_sum_S(const CharSpec& spec, std::int64_t bound, unsigned m) const {
    spec.validate();
    check_size(spec);
    if (m < 1) throw std::invalid_argument("char_sum_S: m must be >= 1");
    std::vector<CyclotomicNumber> sums;
    if (bound >= 1 && bound % spec.modulus() == 0)
        sums = full_period_power_sums(spec, bound, m - 1, opts_.fold, sum_options());
    else
        sums = character_power_sums({spec, 1, bound, m - 1, std::nullopt}, sum_options());
    return {CharacterSum::Kind::S, bound, spec, m, sums[m - 1] * make_rational(1, 2)};
}

CharacterSum LValueEngine::char_sum_T(const CharSpec& spec, std::int64_t d, unsigned m) const {
    spec.validate();
    check_size(spec);
    if (m < 1 || d < 2 || d % 2 != 0) throw std::invalid_argument("char_sum_T: need m >= 1 and even D");
    const auto sums = character_power_sums({spec, 1, d / 2, m, std::nullopt}, sum_options());
    const Rational scale = make_rational(2, static_cast<long>(m) * d);
    return {CharacterSum::Kind::T, d, spec, m, sums[m] * scale};
}

Rational LValueEngine::zeta_Qn(unsigned n, unsigned m) const {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("zeta_Qn: m must be even and >= 2");
    Rational z = l_value(CharSpec::chi(0), m).value.as_rational();
    for (unsigned l = 1; l <= n; ++l) z *= field_norm(l_value(CharSpec::chi(l), m).value);
    z.canonicalize();
    return z;
}

Rational LValueEngine::zeta_Kn(std::int64_t d, unsigned n, unsigned m) const {
    if (d < 3 || d % 2 == 0 || !is_square_free(d)) throw std::invalid_argument("zeta_Kn: d must be odd square-free >= 3");
    Rational z = zeta_Qn(n, m);
    z *= l_value(CharSpec::chi_psi(0, d), m).value.as_rational();
    for (unsigned l = 1; l <= n; ++l) z *= field_norm(l_value(CharSpec::chi_psi(l, d), m).value);
    z.canonicalize();
    return z;
}

}  // namespace ztwo
