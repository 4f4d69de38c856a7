#include <doctest.h>

#include <string>

#include "ztwo/verify.hpp"

using namespace ztwo;

namespace {

const LValueEngine& engine() {
    static const LValueEngine e(EngineOptions{1, false, true});
    return e;
}

// Re-derives a failing verdict from the witness alone.
bool witness_confirms_failure(const Json& w) {
    const CyclotomicNumber diff = cyclotomic_from_json(w.at("difference"));
    const auto threshold = DyadicValuation::parse(w.at("threshold").get<std::string>());
    return ord2(diff) < threshold && ord2(diff).to_string() == w.at("difference_ord2").get<std::string>();
}

const CheckReport* find(const std::vector<CheckReport>& v, const std::string& name) {
    for (const auto& r : v)
        if (r.check_name == name) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("prop_d1") {
    for (unsigned n : {1u, 2u, 5u, 7u}) {
        CAPTURE(n);
        CHECK(check_prop_d1(engine(), n).passed);
    }
    const auto bad = check_prop_d1(engine(), 3, true);
    CHECK_FALSE(bad.passed);
    CHECK(witness_confirms_failure(bad.witness));
    CHECK_FALSE(check_prop_d1(engine(), 1, true).passed);
}

TEST_CASE("lvalue_mod2") {
    CHECK(check_lvalue_mod2(engine(), 3, 4).passed);
    CHECK(check_lvalue_mod2(engine(), 1, 6).passed);
    CHECK_FALSE(check_lvalue_mod2(engine(), 3, 4, true).passed);
    CHECK_THROWS_AS(check_lvalue_mod2(engine(), 3, 3), std::invalid_argument);
}

TEST_CASE("key congruence") {
    CHECK(check_key_congruence(engine(), 3, 2, 2).passed);
    CHECK(check_key_congruence(engine(), 15, 3, 4).passed);
    const auto r = check_key_congruence(engine(), 5, 2, 2);
    CHECK(r.passed);
    CHECK(r.witness.contains("difference_ord2"));
    CHECK(r.witness.at("threshold") == "3/2");
    const auto bad = check_key_congruence(engine(), 5, 2, 2, true);
    CHECK_FALSE(bad.passed);
}

TEST_CASE("sum lemmas") {
    const auto reports = check_sum_lemmas(engine(), 3, 2, 2);
    const auto* no_d = find(reports, "sum_lemmas/no_D");
    REQUIRE(no_d != nullptr);
    CHECK(no_d->passed);
    CHECK(no_d->witness.at("threshold") == "inf");
    for (const auto& r : reports) {
        CAPTURE(r.check_name);
        CHECK(r.passed);
    }

    const auto s = check_sum_lemmas(engine(), 5, 3, 2);
    REQUIRE(find(s, "sum_lemmas/sec3_4_1") != nullptr);
    CHECK(find(s, "sum_lemmas/sec3_4_1")->passed);

    const auto* mod4 = find(s, "sum_lemmas/mod_4");
    REQUIRE(mod4 != nullptr);
    CHECK(mod4->passed);
    const int sign = mod4->witness.at("sign").get<int>();
    const auto eps3 = cyclotomic_from_json(mod4->witness.at("epsilon_3"));
    CHECK(eps3 == CyclotomicNumber::root_of_unity(3, 2, sign == 1 ? 1 : 3));

    const auto one_layer = check_sum_lemmas(engine(), 7, 1, 4);
    CHECK(find(one_layer, "sum_lemmas/mod_4") == nullptr);

    for (const auto& r : check_sum_lemmas(engine(), 15, 3, 2, true)) {
        CAPTURE(r.check_name);
        CHECK_FALSE(r.passed);
    }
}

TEST_CASE("character lemmas") {
    const auto r2 = check_char_lemmas(2);
    CHECK(r2.passed);
    CHECK(r2.witness.at("first_failure").is_null());
    CHECK(check_char_lemmas(4).passed);
    const auto bad = check_char_lemmas(4, true);
    CHECK_FALSE(bad.passed);
    CHECK_FALSE(bad.witness.at("first_failure").is_null());
}

TEST_CASE("section 5 divisor sum") {
    const auto r = check_section5_recursion(engine(), 15, 2);
    CHECK(r.passed);
    CHECK(r.witness.at("divisor_sum_equals_direct_sum") == true);
    CHECK(check_section5_recursion(engine(), 105, 3).passed);
    CHECK_FALSE(check_section5_recursion(engine(), 21, 3, true).passed);
    CHECK_THROWS_AS(check_section5_recursion(engine(), 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(check_section5_recursion(engine(), 15, 1), std::invalid_argument);
}

TEST_CASE("run_all") {
    SUBCASE("empty grid") { CHECK(run_all(engine(), VerifyGrid{}).empty()); }

    SUBCASE("small grid passes and is deterministic across job counts") {
        const VerifyGrid grid{{1, 2, 3}, {1, 3, 15}, {2, 4}};
        const auto a = run_all(engine(), grid, VerifyOptions{1});
        const auto b = run_all(engine(), grid, VerifyOptions{6});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(to_json(a[i]) == to_json(b[i]));
            CHECK(a[i].passed);
        }
    }

    SUBCASE("injected fault gives exactly one failure") {
        const VerifyGrid grid{{2, 3}, {5}, {2}};
        const auto reports = run_all(engine(), grid, VerifyOptions{2, true});
        int failures = 0;
        for (const auto& r : reports)
            if (!r.passed) {
                ++failures;
                CHECK(r.parameters.at("injected_fault") == true);
                CHECK(witness_confirms_failure(r.witness));
            }
        CHECK(failures == 1);
    }

    SUBCASE("filtering") {
        const VerifyGrid grid{{4}, {1}, {2}};
        const auto only = run_all(engine(), grid, VerifyOptions{1, false, "prop_d1"});
        REQUIRE(only.size() == 1);
        CHECK(only.front().check_name == "prop_d1");
        const auto sub = run_all(engine(), VerifyGrid{{3}, {5}, {2}}, VerifyOptions{1, false, "sum_lemmas/cor1"});
        REQUIRE(sub.size() == 1);
        CHECK(sub.front().check_name == "sum_lemmas/cor1");
        CHECK_THROWS_AS(run_all(engine(), grid, VerifyOptions{1, false, "nonsense"}), std::invalid_argument);
    }

    SUBCASE("invalid grids") {
        CHECK_THROWS_AS(run_all(engine(), VerifyGrid{{2}, {9}, {2}}), std::invalid_argument);
        CHECK_THROWS_AS(run_all(engine(), VerifyGrid{{2}, {3}, {3}}), std::invalid_argument);
    }
}

TEST_CASE("report JSON layout") {
    const Json j = to_json(check_prop_d1(engine(), 2));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"check", "parameters", "passed", "witness"});
    for (const char* k : {"lhs", "rhs", "difference", "difference_ord2", "threshold"}) CHECK(j.at("witness").contains(k));
}
