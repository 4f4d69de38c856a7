#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ztwo/char_sums.hpp"
#include "ztwo/characters.hpp"
#include "ztwo/cyclotomic.hpp"

namespace ztwo {

class LValueCache;

/// Raised when a request exceeds the desk-scale budget 2^n * d <= 2^24.
class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LValueResult {
    CharSpec spec;
    unsigned m = 0;
    CyclotomicNumber value;
    DyadicValuation ord2;
    /// Primes whose Euler factors were removed; empty for a primitive value.
    std::vector<std::int64_t> euler_factors_removed;

    friend bool operator==(const LValueResult&, const LValueResult&) = default;
};

struct CharacterSum {
    enum class Kind { S, T };
    Kind kind = Kind::S;
    std::int64_t bound = 0;
    CharSpec spec;
    unsigned m = 0;
    CyclotomicNumber value;
};

struct EngineOptions {
    unsigned jobs = 1;
    bool force_large = false;
    /// Fold full-period sums over a <-> period - a for even characters.
    bool fold = true;
};

inline constexpr unsigned kSizeGuardLog2 = 24;

/// L-values at non-positive integers and the character sums around them.
/// Thread-safe; the optional cache is shared.
class LValueEngine {
public:
    explicit LValueEngine(EngineOptions opts = {}, LValueCache* cache = nullptr);

    const EngineOptions& options() const { return opts_; }
    LValueCache* cache() const { return cache_; }

    /// Throws SizeGuardError unless force_large or 2^layer * twist <= 2^24.
    void check_size(const CharSpec& spec) const;

    /// B_{m,chi} = D0^{m-1} sum_{a=1}^{D0} chi(a) B_m(a/D0), D0 a multiple of the
    /// period of the evaluated character.
    CyclotomicNumber gen_bernoulli(const CharSpec& spec, unsigned m, std::int64_t d0) const;

    /// L(chi, 1-m) = -B_{m,chi}/m for a primitive spec.
    LValueResult l_value(const CharSpec& spec, unsigned m) const;

    /// -B_{m}/m of the character as evaluated. For a square twist this is the
    /// imprimitive L^{(modulus)}(chi_n, 1-m).
    LValueResult l_value_of_evaluation(const CharSpec& spec, unsigned m) const;

    /// L(chi, -1) = -(1/(2 k D1)) sum_{a=1}^{k D1} chi(a) a^2, chi nontrivial even,
    /// D1 its modulus.
    CyclotomicNumber l_value_minus1_quadsum(const CharSpec& spec, unsigned k) const;

    /// L(chi, 1-m) prod_{p | strip} (1 - chi(p) p^{m-1}).
    LValueResult l_value_imprimitive(const CharSpec& spec, std::int64_t strip, unsigned m) const;

    /// S(N) = 1/2 sum_{a=1}^{N} chi(a) a^{m-1}.
    CharacterSum char_sum_S(const CharSpec& spec, std::int64_t bound, unsigned m) const;
    /// T(D) = 2/(mD) sum_{a=1}^{D/2} chi(a) a^m.
    CharacterSum char_sum_T(const CharSpec& spec, std::int64_t d, unsigned m) const;

    /// zeta_{Q_n}(1-m) = zeta(1-m) prod_{l=1}^{n} N(L(chi_l, 1-m)).
    Rational zeta_Qn(unsigned n, unsigned m) const;
    /// zeta_{K_n}(1-m) for K = Q(sqrt d), d odd square-free >= 3.
    Rational zeta_Kn(std::int64_t d, unsigned n, unsigned m) const;

    SumOptions sum_options() const { return SumOptions{opts_.jobs}; }

private:
    LValueResult compute_evaluation(const CharSpec& spec, unsigned m) const;

    EngineOptions opts_;
    LValueCache* cache_;
};

}  // namespace ztwo
