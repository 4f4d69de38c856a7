#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ztwo/lvalues.hpp"

namespace ztwo {

/// Layer F_n of the cyclotomic Z_2-tower over Q or over Q(sqrt r).
struct FieldLayerSpec {
    enum class Base { rational, quadratic };

    Base base = Base::rational;
    /// 1 for Q; the square-free radicand r otherwise (odd, or twice an odd).
    std::int64_t radicand = 1;
    unsigned layer = 0;

    static FieldLayerSpec rational(unsigned n) { return {Base::rational, 1, n}; }
    static FieldLayerSpec quadratic(std::int64_t r, unsigned n) { return {Base::quadratic, r, n}; }

    void validate() const;
    std::uint64_t degree() const;
    /// Every field here is totally real.
    std::uint64_t r1() const { return degree(); }
    /// Number of primes above 2 for the families where it is known without a
    /// splitting computation: Q_n, and Q(sqrt p)_n, Q(sqrt 2p)_n with
    /// p == +-3 (mod 8) prime. Each has a single prime above 2.
    std::optional<std::uint64_t> g2() const;
    std::string label() const;
};

struct NdBound {
    long f = 0;                  ///< max f_p over p | d
    long ceiling = 0;            ///< ceil(f + log2 tau(d) + 2)
    std::optional<long> refined; ///< f + 2, m = 2 only
    long threshold() const { return refined ? *refined : ceiling; }
};

struct InvariantTriple {
    long mu = 0;
    long lambda = 0;
    long nu = 0;
    Rational nu_prime;
    long n_threshold = 0;
    /// d = 1: the general form mu = [F:Q] or 0, lambda = 1 - [F:Q] + 0.
    bool from_proof_form = false;

    /// mu 2^n + lambda n + nu.
    long at(unsigned n) const { return mu * (1L << n) + lambda * static_cast<long>(n) + nu; }
};

struct KGroupOrder {
    FieldLayerSpec field;
    unsigned m = 0;
    long e = 0;  ///< ord_2 |K_{2m-2} O_F (2)|
};

struct TameKernelStructure {
    bool determined = false;
    std::uint64_t lower = 0;  ///< r1 + g2 - 1
    std::uint64_t upper = 0;  ///< ord_2 |K_2 O_F (2)|
    std::uint64_t r1 = 0;
    std::uint64_t g2 = 0;
    /// (Z/2)^rank when determined.
    std::uint64_t rank() const { return determined ? upper : 0; }
    std::string describe() const;
};

/// Sum over p | d of 2^{f_p}; 0 for d = 1.
long sum_two_pow_f(std::int64_t d);
long max_f(std::int64_t d);

/// 1 + 2^{1-n} (-1 + sum_{p|d} 2^{f_p}).
Rational predicted_lvalue_ord(std::int64_t d, unsigned n, unsigned m);

NdBound n_d_bound(std::int64_t d, unsigned m);

/// ord_2(L(psi_d,1-m)/(4m)) - 2^{n_d} + n_d (1 - S) + sum_{k=1}^{n_d} 2^{k-1} ord_2 L(chi_k psi_d, 1-m),
/// with n_d = n_d_bound(d, m).threshold().
Rational nu_prime(const LValueEngine& engine, std::int64_t d, unsigned m);

/// n + 2 + ord_2(m).
long w_m_ord2(const FieldLayerSpec& field, unsigned m);

Rational field_zeta(const LValueEngine& engine, const FieldLayerSpec& field, unsigned m);

/// ord_2(w_m zeta_F(1-m)), less [F:Q] when 4 | m. Throws std::logic_error if
/// the result is negative or not an integer.
KGroupOrder k_group_ord2(const LValueEngine& engine, const FieldLayerSpec& field, unsigned m);

InvariantTriple invariant_triple(const LValueEngine& engine, std::int64_t d, unsigned m);

/// r1 + g2 - 1 <= r_2(K_2) <= e; determined exactly when the bounds meet.
TameKernelStructure rank_squeeze(std::uint64_t r1, std::uint64_t g2, std::uint64_t e);
TameKernelStructure tame_kernel_structure(const LValueEngine& engine, const FieldLayerSpec& field);

/// ord_2 L(chi_n psi_d, 1-m) (L(chi_n, 1-m) for d = 1).
DyadicValuation twisted_lvalue_ord(const LValueEngine& engine, std::int64_t d, unsigned n, unsigned m);

/// Least n0 <= n_max with computed == predicted for every n in [n0, n_max].
std::optional<unsigned> empirical_threshold(const LValueEngine& engine, std::int64_t d, unsigned m, unsigned n_max);

struct SweepRow {
    std::int64_t d = 1;
    unsigned n = 0;
    unsigned m = 0;
    DyadicValuation computed;
    Rational predicted;
    bool match = false;
    long nd_ceiling = 0;
    std::optional<long> nd_refined;
};

struct SweepGrid {
    std::vector<std::int64_t> ds;
    unsigned n_min = 1;
    unsigned n_max = 1;
    std::vector<unsigned> ms;
};

/// Grid points are evaluated in parallel over `jobs` workers; rows come back
/// ordered by (d, m, n) as listed in the grid.
std::vector<SweepRow> sweep(const LValueEngine& engine, const SweepGrid& grid, unsigned jobs);

inline constexpr const char* kSweepCsvHeader = "d,n,m,ord2_computed,ord2_predicted,match,n_d_ceiling,n_d_refined";
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace ztwo
