// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ztwo/cache.hpp"
#include "ztwo/iwasawa.hpp"
#include "ztwo/lvalues.hpp"
#include "ztwo/verify.hpp"

using namespace ztwo;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::int64_t> kTwists{3, 5, 7, 15, 17, 21, 33, 105};

unsigned hardware_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

Rational pow2(long k) {
    Rational r = 1;
    if (k >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(k));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-k));
    return r;
}

struct Outcome {
    bool passed = true;
    std::string detail;
};

// Collects the first few mismatches of a criterion.
class Tally {
public:
    void expect(bool ok, const std::string& what) {
        ++checked_;
        if (ok) return;
        ++failed_;
        if (failed_ <= 3) notes_ << (failed_ > 1 ? "; " : "") << what;
    }
    std::size_t checked() const { return checked_; }
    Outcome outcome(const std::string& summary) const {
        if (failed_ == 0) return {true, summary};
        return {false, std::to_string(failed_) + "/" + std::to_string(checked_) + " failed: " + notes_.str()};
    }

private:
    std::size_t checked_ = 0;
    std::size_t failed_ = 0;
    std::ostringstream notes_;
};

Outcome criterion1() {
    const LValueEngine engine(EngineOptions{hardware_jobs(), false, true});
    const auto start = Clock::now();
    Tally t;
    for (unsigned n = 1; n <= 8; ++n) {
        const auto v = engine.l_value(CharSpec::chi(n), 2).ord2;
        t.expect(!v.is_infinite() && v.value() == 1 - pow2(1 - static_cast<long>(n)),
                 "n=" + std::to_string(n) + " gave " + v.to_string());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    t.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    return t.outcome("n=1..8 exact, " + std::to_string(secs) + " s");
}

Outcome criterion2() {
    const LValueEngine engine;
    Tally t;
    const auto chi1 = engine.l_value(CharSpec::chi(1), 2).value;
    const auto zeta = engine.l_value(CharSpec{}, 2).value;
    t.expect(chi1.is_rational() && chi1.as_rational() == -1, "L(chi_1,-1) = " + to_string(chi1));
    t.expect(zeta.is_rational() && zeta.as_rational() == make_rational(-1, 12), "zeta(-1) = " + to_string(zeta));
    const Rational zeta_sqrt2 = zeta.as_rational() * chi1.as_rational();
    t.expect(zeta_sqrt2 == make_rational(1, 12), "zeta_Q(sqrt2)(-1) = " + to_string(zeta_sqrt2));
    t.expect(engine.zeta_Qn(1, 2) == make_rational(1, 12), "zeta_Q1(-1) = " + to_string(engine.zeta_Qn(1, 2)));
    return t.outcome("-1, -1/12, 1/12");
}

Outcome criterion3(const LValueEngine& engine) {
    Tally t;
    for (unsigned n = 1; n <= 6; ++n) {
        for (unsigned m : {2u, 4u, 6u}) {
            const auto r = check_lvalue_mod2(engine, n, m);
            t.expect(r.passed && r.witness.at("lhs_integral").get<bool>(),
                     "n=" + std::to_string(n) + " m=" + std::to_string(m));
        }
    }
    return t.outcome(std::to_string(t.checked()) + " checks");
}

Outcome criterion4() {
    const LValueEngine engine(EngineOptions{hardware_jobs(), false, true});
    const auto start = Clock::now();
    Tally t;
    for (auto d : kTwists) {
        for (unsigned m : {2u, 4u}) {
            const long nd = n_d_bound(d, m).ceiling;
            for (long n = nd; n <= std::min<long>(nd + 3, 6); ++n) {
                const auto v = twisted_lvalue_ord(engine, d, static_cast<unsigned>(n), m);
                const Rational p = predicted_lvalue_ord(d, static_cast<unsigned>(n), m);
                t.expect(!v.is_infinite() && v.value() == p, "d=" + std::to_string(d) + " n=" + std::to_string(n) +
                                                                 " m=" + std::to_string(m) + ": " + v.to_string() +
                                                                 " vs " + to_string(p));
            }
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    t.expect(secs < 600.0, "runtime " + std::to_string(secs) + " s");
    return t.outcome(std::to_string(t.checked() - 1) + " grid points, " + std::to_string(secs) + " s");
}

Outcome criterion5(const LValueEngine& engine) {
    Tally t;
    for (auto d : kTwists) {
        const auto bound = n_d_bound(d, 2);
        const long start = bound.f + 2;
        t.expect(bound.refined && *bound.refined == start, "refined bound for d=" + std::to_string(d));
        for (long n = start; n <= std::min<long>(bound.ceiling + 3, 6); ++n) {
            const auto v = twisted_lvalue_ord(engine, d, static_cast<unsigned>(n), 2);
            t.expect(!v.is_infinite() && v.value() == predicted_lvalue_ord(d, static_cast<unsigned>(n), 2),
                     "d=" + std::to_string(d) + " n=" + std::to_string(n));
        }
    }
    const auto b15 = n_d_bound(15, 2);
    t.expect(b15.refined == 2 && b15.ceiling == 3, "d=15 bounds");
    const auto v = twisted_lvalue_ord(engine, 15, 2, 2);
    t.expect(!v.is_infinite() && v.value() == predicted_lvalue_ord(15, 2, 2), "d=15 n=2 below the ceiling");
    return t.outcome("match from n=f+2, including d=15 at n=2 < 3");
}

Outcome criterion6(const LValueEngine& engine) {
    Tally t;
    for (unsigned n = 0; n <= 6; ++n) {
        for (unsigned m : {2u, 4u, 6u}) {
            const long got = ord2_rational(engine.zeta_Qn(n, m));
            const long want = (1L << n) - static_cast<long>(n) - 2 - ord2_integer(Integer(m));
            t.expect(got == want, "n=" + std::to_string(n) + " m=" + std::to_string(m) + ": " + std::to_string(got));
        }
    }
    return t.outcome(std::to_string(t.checked()) + " values");
}

Outcome criterion7(const LValueEngine& engine) {
    Tally t;
    for (unsigned n = 0; n <= 6; ++n) {
        const auto k2 = k_group_ord2(engine, FieldLayerSpec::rational(n), 2).e;
        const auto k6 = k_group_ord2(engine, FieldLayerSpec::rational(n), 4).e;
        t.expect(k2 == (1L << n), "K2(Q_" + std::to_string(n) + ") = " + std::to_string(k2));
        t.expect(k6 == 0, "K6(Q_" + std::to_string(n) + ") = " + std::to_string(k6));
    }
    const auto triple = invariant_triple(engine, 5, 2);
    t.expect(triple.mu == 2 && triple.lambda == 0, "triple for d=5");
    for (unsigned n = 0; n <= 4; ++n) {
        const auto e = k_group_ord2(engine, FieldLayerSpec::quadratic(5, n), 2).e;
        t.expect(e == (2L << n), "K2(Q(sqrt5)_" + std::to_string(n) + ") = " + std::to_string(e));
        t.expect(e == triple.at(n), "triple at n=" + std::to_string(n));
    }
    return t.outcome("K2(Q_n)=2^n, K6(Q_n)=0, K2(Q(sqrt5)_n)=2^{n+1}");
}

Outcome criterion8(const LValueEngine& engine) {
    Tally t;
    for (unsigned n = 0; n <= 4; ++n) {
        const auto s = tame_kernel_structure(engine, FieldLayerSpec::rational(n));
        t.expect(s.determined && s.rank() == (1u << n), "Q_" + std::to_string(n) + ": " + s.describe());
    }
    for (std::int64_t p : {3, 5, 11, 13}) {
        for (std::int64_t r : {p, 2 * p}) {
            for (unsigned n = 0; n <= 4; ++n) {
                const auto f = FieldLayerSpec::quadratic(r, n);
                const auto s = tame_kernel_structure(engine, f);
                t.expect(s.determined && s.rank() == (2u << n), f.label() + ": " + s.describe());
            }
        }
    }
    return t.outcome(std::to_string(t.checked()) + " fields, all squeezes closed");
}

Outcome criterion9(const LValueEngine& engine) {
    std::vector<CharSpec> specs;
    for (unsigned n = 1; n <= 6; ++n) specs.push_back(CharSpec::chi(n));
    for (auto d : kTwists) {
        specs.push_back(CharSpec::psi(d));
        for (unsigned n = 1; n <= 4; ++n) specs.push_back(CharSpec::chi_psi(n, d));
    }
    Tally t;
    for (const auto& spec : specs) {
        const auto bernoulli = engine.l_value(spec, 2).value;
        for (unsigned k : {1u, 2u, 3u})
            t.expect(engine.l_value_minus1_quadsum(spec, k) == bernoulli, spec.label() + " k=" + std::to_string(k));
    }
    t.expect(t.checked() >= 50, "fewer than 50 comparisons");
    return t.outcome(std::to_string(t.checked() - 1) + " comparisons over " + std::to_string(specs.size()) + " characters");
}

Outcome criterion10(const LValueEngine& engine) {
    Tally t;
    std::size_t count = 0;
    for (const char* family : {"key_congruence", "section5_recursion"}) {
        const auto reports = run_all(engine, VerifyGrid::default_grid(), VerifyOptions{hardware_jobs(), false, family});
        t.expect(!reports.empty(), std::string(family) + " produced no checks");
        for (const auto& r : reports) {
            ++count;
            t.expect(r.passed, r.check_name + " " + r.parameters.dump());
            const auto d = r.parameters.at("d").get<std::int64_t>();
            const auto n = r.parameters.at("n").get<unsigned>();
            const CheckReport control = r.check_name == "key_congruence"
                                            ? check_key_congruence(engine, d, n, r.parameters.at("m").get<unsigned>(), true)
                                            : check_section5_recursion(engine, d, n, true);
            t.expect(!control.passed, "negative control passed for " + r.check_name + " " + r.parameters.dump());
        }
    }
    return t.outcome(std::to_string(count) + " checks pass, every negative control fails");
}

Outcome criterion11() {
    const SweepGrid grid{kTwists, 1, 6, {2, 4}};
    auto csv = [&](unsigned jobs) {
        const LValueEngine engine;
        std::ostringstream os;
        write_sweep_csv(os, sweep(engine, grid, jobs));
        return os.str();
    };
    const std::string reference = csv(1);
    Tally t;
    t.expect(csv(1) == reference, "second run with 1 job differs");
    for (unsigned jobs : {4u, 8u}) t.expect(csv(jobs) == reference, std::to_string(jobs) + " jobs differ");
    return t.outcome(std::to_string(reference.size()) + " bytes identical for jobs 1, 1, 4, 8");
}

}  // namespace

int main() {
    LValueCache cache;
    const LValueEngine shared(EngineOptions{hardware_jobs(), false, true}, &cache);

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, criterion1},
        {2, criterion2},
        {3, [&] { return criterion3(shared); }},
        {4, criterion4},
        {5, [&] { return criterion5(shared); }},
        {6, [&] { return criterion6(shared); }},
        {7, [&] { return criterion7(shared); }},
        {8, [&] { return criterion8(shared); }},
        {9, [&] { return criterion9(shared); }},
        {10, [&] { return criterion10(shared); }},
        {11, criterion11},
    };

    int failures = 0;
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failures;
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all 11 criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
