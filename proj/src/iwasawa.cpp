#include "ztwo/iwasawa.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ztwo {

namespace {

void require_even_m(unsigned m) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("m must be even and >= 2");
}

void require_twist(std::int64_t d) {
    if (d < 3 || d % 2 == 0 || !is_square_free(d))
        throw std::invalid_argument("d must be odd square-free >= 3, got " + std::to_string(d));
}

long ceil_log2(std::uint64_t x) {
    long k = 0;
    while ((std::uint64_t{1} << k) < x) ++k;
    return k;
}

long ord2_small(unsigned m) { return ord2_integer(Integer(m)); }

Rational pow2(long k) {
    Rational r(1);
    if (k >= 0) mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
    else mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
    return r;
}

long to_long_exact(const Rational& q, const char* what) {
    if (!is_integral(q)) throw std::logic_error(std::string(what) + " is not an integer: " + to_string(q));
    if (!q.get_num().fits_slong_p()) throw std::logic_error(std::string(what) + " out of range");
    return q.get_num().get_si();
}

Rational finite_ord(const DyadicValuation& v, const char* what) {
    if (v.is_infinite()) throw std::logic_error(std::string(what) + " vanishes");
    return v.value();
}

}  // namespace

void FieldLayerSpec::validate() const {
    if (layer > 40) throw std::invalid_argument("layer too large");
    if (base == Base::rational) {
        if (radicand != 1) throw std::invalid_argument("rational base carries radicand 1");
        return;
    }
    if (radicand % 2 == 0) {
        const std::int64_t half = radicand / 2;
        if (half < 3 || half % 2 == 0 || !is_square_free(half))
            throw std::invalid_argument("even radicand must be 2p' with p' odd square-free >= 3");
    } else {
        require_twist(radicand);
    }
}

std::uint64_t FieldLayerSpec::degree() const {
    return (base == Base::rational ? std::uint64_t{1} : std::uint64_t{2}) << layer;
}

std::optional<std::uint64_t> FieldLayerSpec::g2() const {
    if (base == Base::rational) return 1;
    const std::int64_t p = radicand % 2 == 0 ? radicand / 2 : radicand;
    if (is_prime(p) && (p % 8 == 3 || p % 8 == 5)) return 1;
    return std::nullopt;
}

std::string FieldLayerSpec::label() const {
    if (base == Base::rational) return "Q_" + std::to_string(layer);
    return "Q(sqrt " + std::to_string(radicand) + ")_" + std::to_string(layer);
}

std::string TameKernelStructure::describe() const {
    if (determined) return "elementary abelian (Z/2)^" + std::to_string(upper);
    return "undetermined: " + std::to_string(lower) + " <= r_2 <= " + std::to_string(upper);
}

long sum_two_pow_f(std::int64_t d) {
    long s = 0;
    for (auto p : prime_divisors(d)) s += 1L << frobenius_constant(p).f;
    return s;
}

long max_f(std::int64_t d) {
    long f = 0;
    for (auto p : prime_divisors(d)) f = std::max<long>(f, frobenius_constant(p).f);
    return f;
}

Rational predicted_lvalue_ord(std::int64_t d, unsigned n, unsigned m) {
    require_even_m(m);
    if (n < 1) throw std::invalid_argument("predicted_lvalue_ord: n must be >= 1");
    if (d != 1) require_twist(d);
    Rational r = 1 + pow2(1 - static_cast<long>(n)) * (sum_two_pow_f(d) - 1);
    r.canonicalize();
    return r;
}

NdBound n_d_bound(std::int64_t d, unsigned m) {
    require_even_m(m);
    if (d == 1) throw std::invalid_argument("n_d_bound: d = 1 has threshold 1");
    require_twist(d);
    NdBound b;
    b.f = max_f(d);
    b.ceiling = b.f + 2 + ceil_log2(prime_divisors(d).size());
    if (m == 2) b.refined = b.f + 2;
    return b;
}

DyadicValuation twisted_lvalue_ord(const LValueEngine& engine, std::int64_t d, unsigned n, unsigned m) {
    const CharSpec spec = d == 1 ? CharSpec::chi(n) : CharSpec::chi_psi(n, d);
    return engine.l_value(spec, m).ord2;
}

Rational nu_prime(const LValueEngine& engine, std::int64_t d, unsigned m) {
    const long nd = n_d_bound(d, m).threshold();
    const long s = sum_two_pow_f(d);
    Rational v = finite_ord(engine.l_value(CharSpec::psi(d), m).ord2, "L(psi_d, 1-m)") - 2 - ord2_small(m);
    v -= pow2(nd);
    v += nd * (1 - s);
    for (long k = 1; k <= nd; ++k)
        v += pow2(k - 1) * finite_ord(twisted_lvalue_ord(engine, d, static_cast<unsigned>(k), m), "L(chi_k psi_d, 1-m)");
    v.canonicalize();
    return v;
}

long w_m_ord2(const FieldLayerSpec& field, unsigned m) {
    require_even_m(m);
    field.validate();
    return static_cast<long>(field.layer) + 2 + ord2_small(m);
}

Rational field_zeta(const LValueEngine& engine, const FieldLayerSpec& field, unsigned m) {
    require_even_m(m);
    field.validate();
    if (field.base == FieldLayerSpec::Base::rational) return engine.zeta_Qn(field.layer, m);
    if (field.radicand % 2 != 0) return engine.zeta_Kn(field.radicand, field.layer, m);
    if (field.layer >= 1) return engine.zeta_Kn(field.radicand / 2, field.layer, m);
    Rational z = engine.zeta_Qn(0, m) * engine.l_value(CharSpec::psi(field.radicand), m).value.as_rational();
    z.canonicalize();
    return z;
}

KGroupOrder k_group_ord2(const LValueEngine& engine, const FieldLayerSpec& field, unsigned m) {
    const Rational z = field_zeta(engine, field, m);
    if (z == 0) throw std::logic_error("zeta value vanishes for " + field.label());
    Rational e = Rational(w_m_ord2(field, m)) + Rational(ord2_rational(z));
    if (m % 4 == 0) e -= Rational(static_cast<long>(field.degree()));
    KGroupOrder out{field, m, to_long_exact(e, "K-group 2-order")};
    if (out.e < 0) throw std::logic_error("negative K-group 2-order " + std::to_string(out.e) + " for " + field.label());
    return out;
}

InvariantTriple invariant_triple(const LValueEngine& engine, std::int64_t d, unsigned m) {
    require_even_m(m);
    const long o = ord2_small(m);
    InvariantTriple t;
    if (d == 1) {
        t.mu = o == 1 ? 1 : 0;
        t.lambda = 0;
        t.nu_prime = Rational(-2 - o);
        t.nu = 0;
        t.n_threshold = 1;
        t.from_proof_form = true;
        return t;
    }
    require_twist(d);
    t.mu = o == 1 ? 2 : 0;
    t.lambda = sum_two_pow_f(d) - 1;
    t.nu_prime = nu_prime(engine, d, m);
    t.nu = to_long_exact(t.nu_prime + 2 + o, "nu");
    t.n_threshold = n_d_bound(d, m).threshold();
    return t;
}

TameKernelStructure rank_squeeze(std::uint64_t r1, std::uint64_t g2, std::uint64_t e) {
    if (r1 == 0 || g2 == 0) throw std::invalid_argument("rank_squeeze: r1 and g2 must be positive");
    TameKernelStructure s;
    s.r1 = r1;
    s.g2 = g2;
    s.lower = r1 + g2 - 1;
    s.upper = e;
    if (s.lower > s.upper)
        throw std::logic_error("2-rank lower bound " + std::to_string(s.lower) + " exceeds 2-order " + std::to_string(e));
    s.determined = s.lower == s.upper;
    return s;
}

TameKernelStructure tame_kernel_structure(const LValueEngine& engine, const FieldLayerSpec& field) {
    field.validate();
    const auto g2 = field.g2();
    if (!g2) throw std::invalid_argument("no hard-coded g2 for " + field.label());
    const KGroupOrder k = k_group_ord2(engine, field, 2);
    return rank_squeeze(field.r1(), *g2, static_cast<std::uint64_t>(k.e));
}

std::optional<unsigned> empirical_threshold(const LValueEngine& engine, std::int64_t d, unsigned m, unsigned n_max) {
    std::optional<unsigned> n0;
    for (unsigned n = n_max; n >= 1; --n) {
        const auto v = twisted_lvalue_ord(engine, d, n, m);
        if (v.is_infinite() || v.value() != predicted_lvalue_ord(d, n, m)) break;
        n0 = n;
    }
    return n0;
}

std::vector<SweepRow> sweep(const LValueEngine& engine, const SweepGrid& grid, unsigned jobs) {
    if (grid.n_min < 1 || grid.n_max < grid.n_min) throw std::invalid_argument("sweep: need 1 <= n_min <= n_max");
    std::vector<SweepRow> rows;
    for (auto d : grid.ds) {
        for (auto m : grid.ms) {
            long ceiling = 1;
            std::optional<long> refined;
            if (d == 1) {
                require_even_m(m);
                if (m == 2) refined = 1;
            } else {
                const NdBound b = n_d_bound(d, m);
                ceiling = b.ceiling;
                refined = b.refined;
            }
            for (unsigned n = grid.n_min; n <= grid.n_max; ++n) {
                SweepRow r;
                r.d = d;
                r.n = n;
                r.m = m;
                r.predicted = predicted_lvalue_ord(d, n, m);
                r.nd_ceiling = ceiling;
                r.nd_refined = refined;
                engine.check_size(d == 1 ? CharSpec::chi(n) : CharSpec::chi_psi(n, d));
                rows.push_back(std::move(r));
            }
        }
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                auto& r = rows[i];
                r.computed = twisted_lvalue_ord(engine, r.d, r.n, r.m);
                r.match = !r.computed.is_infinite() && r.computed.value() == r.predicted;
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = rows.size();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(rows.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.d << ',' << r.n << ',' << r.m << ',' << r.computed.to_string() << ',' << to_string(r.predicted) << ','
           << (r.match ? "true" : "false") << ',' << r.nd_ceiling << ',';
        if (r.nd_refined) os << *r.nd_refined;
        else os << "NA";
        os << '\n';
    }
}

}  // namespace ztwo
