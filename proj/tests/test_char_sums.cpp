#include <doctest.h>

#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <vector>

#include "ztwo/char_sums.hpp"

using namespace ztwo;

namespace {

CyclotomicNumber direct_sum(const CharSpec& spec, std::int64_t lo, std::int64_t hi, unsigned j, std::optional<int> residue) {
    CyclotomicNumber acc(spec.value_level());
    for (std::int64_t a = lo; a <= hi; ++a) {
        if (residue && a % 4 != *residue) continue;
        acc += char_eval(spec, a) * Rational(pow_integer(Integer(static_cast<long>(a)), j));
    }
    return acc;
}

}  // namespace

TEST_CASE("kernel sums equal a direct evaluation") {
    const CharSpec specs[] = {CharSpec::chi(1), CharSpec::chi(3), CharSpec::chi_psi(2, 5), CharSpec::chi_psi(3, 21, 2),
                              CharSpec::psi(7), CharSpec::psi(10), CharSpec{}};
    for (const auto& spec : specs) {
        CAPTURE(spec.label());
        for (std::optional<int> residue : {std::optional<int>{}, std::optional<int>{1}, std::optional<int>{3}}) {
            const PowerSumRequest req{spec, 3, 411, 5, residue};
            const auto sums = character_power_sums(req);
            REQUIRE(sums.size() == 6);
            for (unsigned j = 0; j <= 5; ++j) CHECK(sums[j] == direct_sum(spec, 3, 411, j, residue));
            CHECK(character_power_sums_naive(req) == sums);
        }
    }
}

TEST_CASE("job count does not change the result") {
    const PowerSumRequest req{CharSpec::chi_psi(5, 33), 1, 128 * 33, 7, std::nullopt};
    const auto one = character_power_sums(req, SumOptions{1});
    for (unsigned jobs : {2u, 3u, 8u, 16u}) CHECK(character_power_sums(req, SumOptions{jobs}) == one);
}

TEST_CASE("folded full-period sums are bit-identical to unfolded ones") {
    std::mt19937_64 rng(12);
    const std::int64_t ds[] = {1, 3, 5, 7, 15, 17, 21};
    for (int t = 0; t < 25; ++t) {
        const unsigned n = 1 + rng() % 5;
        const std::int64_t d = ds[rng() % std::size(ds)];
        const unsigned power = 1 + rng() % 2;
        const auto spec = CharSpec::chi_psi(n, d, d == 1 ? 0 : power);
        const std::int64_t period = spec.modulus() * static_cast<std::int64_t>(1 + rng() % 3);
        CAPTURE(spec.label());
        CAPTURE(period);
        const auto folded = full_period_power_sums(spec, period, 6, true, SumOptions{2});
        const auto plain = full_period_power_sums(spec, period, 6, false);
        CHECK(folded == plain);
    }
}

TEST_CASE("full_period_power_sums rejects bad periods") {
    CHECK_THROWS_AS(full_period_power_sums(CharSpec::chi(2), 12, 2, true), std::invalid_argument);
    CHECK_THROWS_AS(full_period_power_sums(CharSpec::chi(2), 0, 2, true), std::invalid_argument);
}

TEST_CASE("request validation") {
    CHECK_THROWS_AS(character_power_sums(PowerSumRequest{CharSpec::chi(2), 0, 10, 1, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(character_power_sums(PowerSumRequest{CharSpec::chi(2), 1, 10, 1, 4}), std::invalid_argument);
    CHECK(character_power_sums(PowerSumRequest{CharSpec::chi(2), 5, 4, 2, std::nullopt}) ==
          std::vector<CyclotomicNumber>(3, CyclotomicNumber(2)));
}

TEST_CASE("evenness detection") {
    CHECK(is_even_character(CharSpec::chi(3)));
    CHECK(is_even_character(CharSpec::chi_psi(2, 7)));
    CHECK(is_even_character(CharSpec::psi(3)));
    CHECK(is_even_character(CharSpec{}));
}
