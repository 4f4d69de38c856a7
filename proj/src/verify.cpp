#include "ztwo/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace ztwo {

namespace {

CyclotomicNumber constant(long c, unsigned level) { return CyclotomicNumber::from_rational(Rational(c), level); }

CyclotomicNumber bump(CyclotomicNumber x, bool perturb) {
    if (perturb) x += constant(1, x.level());
    return x;
}

DyadicValuation threshold_of(const Rational& q) { return DyadicValuation(q); }

Rational pow2(long k) {
    Rational r(1);
    if (k >= 0) mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
    else mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
    return r;
}

/// Fills lhs, rhs, difference, difference_ord2 and threshold into `w` and
/// returns ord2(lhs - rhs) >= threshold. An infinite threshold is equality.
bool compare(const CyclotomicNumber& lhs, const CyclotomicNumber& rhs, const DyadicValuation& threshold, Json& w) {
    const unsigned level = common_level(lhs, rhs);
    const CyclotomicNumber a = lhs.embed_to_level(level);
    const CyclotomicNumber b = rhs.embed_to_level(level);
    const CyclotomicNumber diff = a - b;
    const DyadicValuation v = ord2(diff);
    w["lhs"] = to_json(a);
    w["rhs"] = to_json(b);
    w["difference"] = to_json(diff);
    w["difference_ord2"] = v.to_string();
    w["threshold"] = threshold.to_string();
    return v >= threshold;
}

void require_even_m(unsigned m) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("m must be even and >= 2, got " + std::to_string(m));
}

void require_twist_or_one(std::int64_t d) {
    if (d == 1) return;
    if (d < 3 || d % 2 == 0 || !is_square_free(d))
        throw std::invalid_argument("d must be 1 or odd square-free >= 3, got " + std::to_string(d));
}

CharSpec eta_spec(unsigned n, std::int64_t d) { return d == 1 ? CharSpec::chi(n) : CharSpec::chi_psi(n, d); }

std::int64_t mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// sum_e buckets[e] zeta_{2^level}^e
CyclotomicNumber from_buckets(const std::vector<Integer>& buckets, unsigned level) {
    CyclotomicNumber out(level);
    for (std::size_t e = 0; e < buckets.size(); ++e) {
        if (buckets[e] == 0) continue;
        out += unit_to_cyclotomic(UnitValue{false, e}, level) * Rational(buckets[e]);
    }
    return out;
}

std::vector<std::int64_t> divisors_of(std::int64_t d) {
    std::vector<std::int64_t> out{1};
    for (auto p : prime_divisors(d)) {
        const std::size_t k = out.size();
        for (std::size_t i = 0; i < k; ++i) out.push_back(out[i] * p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Json to_json(const CheckReport& r) {
    return Json{{"check", r.check_name}, {"parameters", r.parameters}, {"passed", r.passed}, {"witness", r.witness}};
}

CheckReport check_prop_d1(const LValueEngine& engine, unsigned n, bool perturb) {
    if (n < 1) throw std::invalid_argument("prop_d1: n must be >= 1");
    CheckReport r{"prop_d1", Json{{"n", n}}};
    const CyclotomicNumber l = bump(engine.l_value(CharSpec::chi(n), 2).value, perturb);
    if (n == 1) {
        r.passed = compare(l, constant(-1, l.level()), DyadicValuation::infinity(), r.witness);
        return r;
    }
    CyclotomicNumber prod = constant(1, n);
    for (unsigned k = 2; k <= n; ++k) prod *= constant(1, n) - CyclotomicNumber::root_of_unity(n, k, 1);
    const bool congruent = compare(l, prod, threshold_of(1), r.witness);
    const DyadicValuation actual = ord2(l);
    const DyadicValuation expected(1 - pow2(1 - static_cast<long>(n)));
    r.witness["lhs_ord2"] = actual.to_string();
    r.witness["lhs_ord2_expected"] = expected.to_string();
    r.passed = congruent && actual == expected;
    return r;
}

CheckReport check_lvalue_mod2(const LValueEngine& engine, unsigned n, unsigned m, bool perturb) {
    require_even_m(m);
    if (n < 1) throw std::invalid_argument("lvalue_mod2: n must be >= 1");
    CheckReport r{"lvalue_mod2", Json{{"n", n}, {"m", m}}};
    const CyclotomicNumber lm = bump(engine.l_value(CharSpec::chi(n), m).value, perturb);
    const CyclotomicNumber l2 = engine.l_value(CharSpec::chi(n), 2).value;
    const DyadicValuation v = ord2(lm);
    const bool integral = v >= threshold_of(0);
    const bool congruent = compare(lm, l2, threshold_of(1), r.witness);
    r.witness["lhs_ord2"] = v.to_string();
    r.witness["lhs_integral"] = integral;
    r.passed = integral && congruent;
    return r;
}

CheckReport check_key_congruence(const LValueEngine& engine, std::int64_t d, unsigned n, unsigned m, bool perturb) {
    require_even_m(m);
    if (d == 1) throw std::invalid_argument("key_congruence: d must be >= 3");
    require_twist_or_one(d);
    if (n < 2) throw std::invalid_argument("key_congruence: n must be >= 2");
    CheckReport r{"key_congruence", Json{{"d", d}, {"n", n}, {"m", m}}};
    const CyclotomicNumber imprimitive = engine.l_value_imprimitive(CharSpec::chi(n), d, m).value;
    const CyclotomicNumber square_twist = engine.l_value_of_evaluation(CharSpec::chi_psi(n, d, 2), m).value;
    const CyclotomicNumber twisted = engine.l_value(CharSpec::chi_psi(n, d), m).value;
    const CyclotomicNumber sum = bump(imprimitive + twisted, perturb);
    const bool congruent = compare(sum, CyclotomicNumber(sum.level()), threshold_of(make_rational(3, 2)), r.witness);
    const bool same = imprimitive == square_twist;
    r.witness["imprimitive_equals_square_twist"] = same;
    r.passed = congruent && same;
    return r;
}

std::vector<CheckReport> check_sum_lemmas(const LValueEngine& engine, std::int64_t d, unsigned n, unsigned m,
                                          bool perturb) {
    require_even_m(m);
    require_twist_or_one(d);
    if (n < 1) throw std::invalid_argument("sum_lemmas: n must be >= 1");
    const std::int64_t big_d = (std::int64_t{1} << (n + 2)) * d;
    const CharSpec eta = eta_spec(n, d);
    const CharSpec chi = CharSpec::chi(n);
    const Json dn{{"d", d}, {"n", n}};
    const Json dnm{{"d", d}, {"n", n}, {"m", m}};
    std::vector<CheckReport> out;

    {
        CheckReport r{"sum_lemmas/no_D", dn};
        const auto lhs = bump(engine.l_value_minus1_quadsum(eta, static_cast<unsigned>(big_d / eta.modulus())), perturb);
        const auto rhs = engine.char_sum_S(eta, big_d / 2, 2).value;
        r.passed = compare(lhs, rhs, DyadicValuation::infinity(), r.witness);
        out.push_back(std::move(r));
    }
    {
        CheckReport r{"sum_lemmas/sec3_4_1", dnm};
        const auto s = bump(engine.char_sum_S(chi, big_d, m).value, perturb);
        r.passed = compare(s, CyclotomicNumber(s.level()), threshold_of(2), r.witness);
        out.push_back(std::move(r));
    }
    {
        CheckReport r{"sum_lemmas/sec3_4_2", dnm};
        const auto t = bump(engine.char_sum_T(chi, big_d, m).value, perturb);
        const auto s = engine.char_sum_S(chi, big_d / 2, m).value;
        r.passed = compare(t, s, threshold_of(n >= 2 ? 2 : 1), r.witness);
        out.push_back(std::move(r));
    }
    {
        CheckReport r{"sum_lemmas/cor1", dn};
        const auto lhs = bump(engine.l_value(chi, 2).value, perturb);
        const auto rhs = character_power_sums({chi, 1, big_d / 4, 1, std::nullopt}, engine.sum_options())[1];
        r.passed = compare(lhs, rhs, threshold_of(1), r.witness);
        out.push_back(std::move(r));
    }
    if (n < 2) return out;

    // chi_n(2^n d - 1) = s zeta_4
    const UnitValue u = char_unit(chi, (std::int64_t{1} << n) * d - 1);
    const std::uint64_t quarter = std::uint64_t{1} << (n - 2);
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    int s = 0;
    if (!u.zero && u.exponent == quarter) s = 1;
    else if (!u.zero && u.exponent == quarter + half) s = -1;
    if (s == 0) {
        CheckReport r{"sum_lemmas/mod_4", dn};
        r.passed = false;
        r.witness["error"] = "chi_n(2^n d - 1) is not +-zeta_4";
        r.witness["exponent"] = u.exponent;
        out.push_back(std::move(r));
        return out;
    }
    const CyclotomicNumber eps3 = CyclotomicNumber::root_of_unity(n, 2, 1) * Rational(s);
    const CyclotomicNumber factor = constant(1, n) - eps3;
    auto eps_sum = [&](const CharSpec& spec) {
        const auto ones = character_power_sums({spec, 1, big_d / 8, 1, 1}, engine.sum_options())[1];
        const auto threes = character_power_sums({spec, 1, big_d / 8, 1, 3}, engine.sum_options())[1];
        return factor * (ones + eps3 * threes);
    };
    auto note_sign = [&](Json& w) {
        w["sign"] = s;
        w["epsilon_3"] = to_json(eps3);
    };

    {
        CheckReport r{"sum_lemmas/mod_4", dn};
        const auto lhs = bump(engine.l_value_minus1_quadsum(eta, static_cast<unsigned>(big_d / eta.modulus())), perturb);
        r.passed = compare(lhs, eps_sum(eta), threshold_of(2), r.witness);
        note_sign(r.witness);
        out.push_back(std::move(r));
    }

    std::vector<CharSpec> etas{chi};
    if (d != 1) {
        etas.push_back(CharSpec::chi_psi(n, d, 1));
        etas.push_back(CharSpec::chi_psi(n, d, 2));
    }
    for (const auto& e : etas) {
        Json params = dnm;
        params["eta"] = e.label();
        const auto l = bump(engine.l_value_of_evaluation(e, m).value, perturb);
        {
            CheckReport r{"sum_lemmas/sec3_3_2", params};
            const auto rhs = character_power_sums({e, 1, big_d / 4, 1, std::nullopt}, engine.sum_options())[1];
            const DyadicValuation v = ord2(l);
            const bool congruent = compare(l, rhs, threshold_of(2), r.witness);
            r.witness["lhs_ord2"] = v.to_string();
            r.passed = congruent && v >= threshold_of(0);
            out.push_back(std::move(r));
        }
        {
            CheckReport r{"sum_lemmas/sec3_3_3", params};
            r.passed = compare(l, eps_sum(e), threshold_of(2), r.witness);
            note_sign(r.witness);
            out.push_back(std::move(r));
        }
    }
    return out;
}

CheckReport check_char_lemmas(unsigned n, bool perturb) {
    if (n < 2) throw std::invalid_argument("char_lemmas: n must be >= 2");
    if (n > 16) throw std::invalid_argument("char_lemmas: n too large for an exhaustive scan");
    CheckReport r{"char_lemmas", Json{{"n", n}}};
    const CharSpec chi = CharSpec::chi(n);
    const std::int64_t period = std::int64_t{1} << (n + 2);
    auto value = [&](std::int64_t a) { return unit_to_cyclotomic(char_unit(chi, mod(a, period)), n); };
    auto value_rhs = [&](std::int64_t b) { return bump(value(b), perturb && mod(b, period) == 1); };

    std::size_t cases = 0;
    Json failure = nullptr;
    auto record = [&](const std::string& lemma, std::int64_t b, long k, const CyclotomicNumber& lhs,
                      const CyclotomicNumber& rhs, const DyadicValuation& threshold) {
        ++cases;
        if (!failure.is_null()) return;
        Json w;
        if (compare(lhs, rhs, threshold, w)) return;
        w["lemma"] = lemma;
        w["b"] = b;
        if (k > 0) w["k"] = k;
        failure = std::move(w);
    };

    const CyclotomicNumber at_2n_minus_1 = value((std::int64_t{1} << n) - 1);
    for (std::int64_t b = 0; b < period; ++b) {
        record("lem2_1_1", b, 0, value((std::int64_t{1} << (n + 1)) - b), -value_rhs(b), DyadicValuation::infinity());
        record("lem2_1_2", b, 0, value((std::int64_t{1} << n) - b),
               at_2n_minus_1 * Rational(kronecker(-1, b)) * value_rhs(b), DyadicValuation::infinity());
        for (unsigned k = 2; k <= n; ++k) {
            const auto lhs = value((period >> k) - b);
            const auto rhs = CyclotomicNumber::root_of_unity(n, k, 1) * value_rhs(b);
            record("sec3_1", b, k, lhs, rhs, threshold_of(pow2(2 - static_cast<long>(k))));
        }
    }
    r.witness["cases"] = cases;
    r.witness["first_failure"] = failure;
    r.passed = failure.is_null();
    return r;
}

CheckReport check_section5_recursion(const LValueEngine& engine, std::int64_t d, unsigned n, bool perturb) {
    require_twist_or_one(d);
    const auto primes = prime_divisors(d);
    const std::size_t tau = primes.size();
    if (tau < 2) throw std::invalid_argument("section5_recursion: d needs at least two prime factors");
    if (n < 2) throw std::invalid_argument("section5_recursion: n must be >= 2");
    CheckReport r{"section5_recursion", Json{{"d", d}, {"n", n}}};

    CyclotomicNumber total(n);
    for (auto b : divisors_of(d)) {
        const CharSpec spec = b == 1 ? CharSpec::chi(n) : CharSpec::chi_psi(n, b);
        total += engine.l_value_imprimitive(spec, d / b, 2).value.embed_to_level(n);
    }

    // (1/2) sum_{a <= D/2} chi_n(a) psi_d(a) a prod_{p | d} (1 + psi_p(a))
    const std::int64_t half_d = (std::int64_t{1} << (n + 1)) * d;
    const CharSpec chi = CharSpec::chi(n);
    std::vector<Integer> buckets(std::size_t{1} << n);
    for (std::int64_t a = 1; a <= half_d; a += 2) {
        const int pd = psi_eval(d, a);
        if (pd == 0) continue;
        long weight = pd;
        for (auto p : primes) weight *= 1 + psi_eval(p, a);
        if (weight == 0) continue;
        const UnitValue u = char_unit(chi, a);
        buckets[u.exponent] += Integer(weight) * Integer(static_cast<long>(a));
    }
    const CyclotomicNumber direct = from_buckets(buckets, n) * make_rational(1, 2);

    const CyclotomicNumber lhs = bump(total, perturb);
    const bool bounded = compare(lhs, CyclotomicNumber(n), threshold_of(static_cast<long>(tau)), r.witness);
    const bool same = total == direct;
    r.witness["direct_sum"] = to_json(direct);
    r.witness["divisor_sum_equals_direct_sum"] = same;
    r.witness["tau"] = tau;
    r.passed = bounded && same;
    return r;
}

VerifyGrid VerifyGrid::default_grid() {
    return VerifyGrid{{1, 2, 3, 4, 5, 6}, {1, 3, 5, 7, 15, 17, 21, 33, 105}, {2, 4, 6}};
}

std::vector<CheckReport> run_all(const LValueEngine& engine, const VerifyGrid& grid, const VerifyOptions& opts) {
    static const std::vector<std::string> families{"prop_d1",    "lvalue_mod2",  "key_congruence",
                                                   "sum_lemmas", "char_lemmas", "section5_recursion"};
    auto selected = [&](const std::string& family) {
        if (!opts.only) return true;
        return *opts.only == family || opts.only->starts_with(family + "/");
    };
    if (opts.only && std::none_of(families.begin(), families.end(), selected))
        throw std::invalid_argument("unknown check " + *opts.only);

    auto sorted = [](auto v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto ns = sorted(grid.ns);
    const auto ds = sorted(grid.ds);
    const auto ms = sorted(grid.ms);
    for (auto m : ms) require_even_m(m);
    for (auto d : ds) require_twist_or_one(d);

    using Task = std::function<std::vector<CheckReport>()>;
    std::vector<Task> tasks;
    auto one = [](CheckReport r) { return std::vector<CheckReport>{std::move(r)}; };

    if (selected("prop_d1"))
        for (auto n : ns)
            if (n >= 1) tasks.push_back([&, n] { return one(check_prop_d1(engine, n)); });
    if (selected("lvalue_mod2"))
        for (auto n : ns)
            for (auto m : ms)
                if (n >= 1) tasks.push_back([&, n, m] { return one(check_lvalue_mod2(engine, n, m)); });
    if (selected("key_congruence"))
        for (auto d : ds)
            for (auto n : ns)
                for (auto m : ms)
                    if (d != 1 && n >= 2) tasks.push_back([&, d, n, m] { return one(check_key_congruence(engine, d, n, m)); });
    if (selected("sum_lemmas"))
        for (auto d : ds)
            for (auto n : ns)
                for (auto m : ms)
                    if (n >= 1) tasks.push_back([&, d, n, m] { return check_sum_lemmas(engine, d, n, m); });
    if (selected("char_lemmas"))
        for (auto n : ns)
            if (n >= 2) tasks.push_back([&one, n] { return one(check_char_lemmas(n)); });
    if (selected("section5_recursion"))
        for (auto d : ds)
            for (auto n : ns)
                if (d != 1 && n >= 2 && prime_divisors(d).size() >= 2)
                    tasks.push_back([&, d, n] { return one(check_section5_recursion(engine, d, n)); });
    if (opts.inject_fault)
        tasks.push_back([&] {
            CheckReport r = check_prop_d1(engine, 2, true);
            r.parameters["injected_fault"] = true;
            return one(std::move(r));
        });

    std::vector<std::vector<CheckReport>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                results[i] = tasks[i]();
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = tasks.size();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(tasks.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<CheckReport> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (auto& batch : results) {
        for (auto& r : batch) {
            const bool wanted = !opts.only || r.parameters.contains("injected_fault") || r.check_name == *opts.only ||
                                r.check_name.starts_with(*opts.only + "/");
            if (!wanted) continue;
            if (!seen.emplace(r.check_name, r.parameters.dump()).second) continue;
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace ztwo
