#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "ztwo/char_sums.hpp"
#include "ztwo/kernels/crt.hpp"
#include "ztwo/kernels/power_sum.hpp"

using namespace ztwo;
using namespace ztwo::kernels;

namespace {

std::vector<std::uint32_t> gmp_power_sums(const std::vector<std::uint32_t>& values, std::uint32_t p, std::size_t terms) {
    std::vector<std::uint32_t> out(terms);
    const mpz_class mod(static_cast<unsigned long>(p));
    for (std::size_t j = 0; j < terms; ++j) {
        mpz_class acc = 0;
        for (auto v : values) {
            mpz_class t;
            mpz_powm_ui(t.get_mpz_t(), mpz_class(static_cast<unsigned long>(v)).get_mpz_t(), j, mod.get_mpz_t());
            acc += t;
        }
        acc %= mod;
        out[j] = static_cast<std::uint32_t>(acc.get_ui());
    }
    return out;
}

std::vector<std::uint32_t> random_values(std::mt19937_64& rng, std::size_t count, std::uint32_t p) {
    std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
    std::vector<std::uint32_t> v(count);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

// Runs first (doctest orders by line within a file) so the environment
// variable is read before anything else touches the dispatcher.
TEST_CASE("ZTWO_ISA=scalar pins the scalar kernel") {
    setenv("ZTWO_ISA", "scalar", 1);
    CHECK(active_isa() == Isa::scalar);
    unsetenv("ZTWO_ISA");
}

TEST_CASE("isa names and availability") {
    CHECK(isa_name(Isa::scalar) == "scalar");
    CHECK(isa_name(Isa::avx2) == "avx2");
    CHECK(isa_available(Isa::scalar));
    MESSAGE("avx2 available: " << isa_available(Isa::avx2));
    if (!isa_available(Isa::avx2)) CHECK_THROWS_AS(set_active_isa(Isa::avx2), std::invalid_argument);
}

TEST_CASE("scalar kernel matches GMP") {
    std::mt19937_64 rng(4);
    for (std::uint32_t p : {3u, 65537u, 2147483647u, 2147483629u}) {
        for (std::size_t count : {0u, 1u, 7u, 64u, 333u}) {
            const auto values = random_values(rng, count, p);
            std::vector<std::uint32_t> out(9);
            power_sums_mod_scalar(values, p, out);
            CHECK(out == gmp_power_sums(values, p, out.size()));
        }
    }
}

TEST_CASE("avx2 kernel is bit-identical to scalar") {
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available on this machine; equivalence test skipped");
        return;
    }
    std::mt19937_64 rng(5);
    for (std::uint32_t p : crt_primes(4)) {
        for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 8u, 31u, 1000u, 4099u}) {
            for (std::size_t terms : {1u, 2u, 5u, 8u}) {
                const auto values = random_values(rng, count, p);
                std::vector<std::uint32_t> a(terms), b(terms);
                power_sums_mod(Isa::scalar, values, p, a);
                power_sums_mod(Isa::avx2, values, p, b);
                CHECK(a == b);
            }
        }
    }
    std::vector<std::uint32_t> edge{0, 1, 2147483646u, 2147483645u, 1u << 30};
    std::vector<std::uint32_t> a(6), b(6);
    power_sums_mod(Isa::scalar, edge, 2147483647u, a);
    power_sums_mod(Isa::avx2, edge, 2147483647u, b);
    CHECK(a == b);
    CHECK(a == gmp_power_sums(edge, 2147483647u, 6));
}

TEST_CASE("character sums do not depend on the active ISA") {
    const PowerSumRequest req{CharSpec::chi_psi(4, 15), 1, 64 * 15 * 3, 6, std::nullopt};
    set_active_isa(Isa::scalar);
    const auto scalar = character_power_sums(req);
    if (isa_available(Isa::avx2)) {
        set_active_isa(Isa::avx2);
        CHECK(character_power_sums(req) == scalar);
    }
    CHECK(character_power_sums_naive(req) == scalar);
}

TEST_CASE("crt primes") {
    const auto primes = crt_primes(5);
    REQUIRE(primes.size() == 5);
    CHECK(primes[0] == 2147483647u);
    for (std::size_t i = 1; i < primes.size(); ++i) {
        CHECK(primes[i] < primes[i - 1]);
        CHECK(mpz_probab_prime_p(mpz_class(static_cast<unsigned long>(primes[i])).get_mpz_t(), 30) > 0);
    }
    CHECK(crt_primes(3) == std::vector<std::uint32_t>(primes.begin(), primes.begin() + 3));
}

TEST_CASE("crt lifts signed integers symmetrically") {
    std::mt19937_64 rng(6);
    const Integer bound = pow_integer(Integer(10), 40);
    const auto basis = CrtBasis::for_bound(bound);
    CHECK(basis.modulus() > 2 * bound);
    for (int t = 0; t < 200; ++t) {
        Integer x = 0;
        for (int i = 0; i < 4; ++i) x = x * Integer(static_cast<unsigned long>(rng() >> 32)) + Integer(static_cast<unsigned long>(rng() % 1000));
        x %= bound;
        if (t % 2) x = -x;
        std::vector<std::uint32_t> residues;
        for (auto p : basis.primes()) {
            Integer r = x % Integer(static_cast<unsigned long>(p));
            if (r < 0) r += p;
            residues.push_back(static_cast<std::uint32_t>(r.get_ui()));
        }
        CHECK(basis.lift(residues) == x);
    }
    CHECK_THROWS_AS(CrtBasis({}), std::invalid_argument);
}
