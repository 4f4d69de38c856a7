#include "ztwo/kernels/crt.hpp"

#include <mutex>
#include <stdexcept>

namespace ztwo::kernels {

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t q = 3; static_cast<std::uint64_t>(q) * q <= n; q += 2)
        if (n % q == 0) return false;
    return true;
}

}  // namespace

std::vector<std::uint32_t> crt_primes(std::size_t count) {
    static std::mutex mu;
    static std::vector<std::uint32_t> table;
    std::lock_guard<std::mutex> lock(mu);
    std::uint32_t candidate = table.empty() ? (1u << 31) - 1 : table.back() - 2;
    while (table.size() < count) {
        if (is_prime_u32(candidate)) table.push_back(candidate);
        candidate -= 2;
    }
    return {table.begin(), table.begin() + static_cast<std::ptrdiff_t>(count)};
}

CrtBasis CrtBasis::for_bound(const Integer& bound) {
    const Integer target = 2 * abs(bound) + 1;
    // Each prime exceeds 2^30, which gives a cheap upper estimate.
    std::size_t count = mpz_sizeinbase(target.get_mpz_t(), 2) / 30 + 1;
    auto primes = crt_primes(count);
    Integer m = 1;
    for (auto p : primes) m *= p;
    while (m <= target) {
        primes = crt_primes(++count);
        m *= primes.back();
    }
    return CrtBasis(std::move(primes));
}

CrtBasis::CrtBasis(std::vector<std::uint32_t> primes) : primes_(std::move(primes)), modulus_(1) {
    if (primes_.empty()) throw std::invalid_argument("CrtBasis: empty prime set");
    for (auto p : primes_) modulus_ *= p;
    half_ = modulus_ / 2;
    weights_.reserve(primes_.size());
    for (auto p : primes_) {
        const Integer co = modulus_ / p;
        Integer inv;
        const Integer pz(static_cast<unsigned long>(p));
        const Integer co_mod = co % pz;
        if (mpz_invert(inv.get_mpz_t(), co_mod.get_mpz_t(), pz.get_mpz_t()) == 0)
            throw std::invalid_argument("CrtBasis: primes are not coprime");
        weights_.push_back(co * inv);
    }
}

Integer CrtBasis::lift(std::span<const std::uint32_t> residues) const {
    if (residues.size() != primes_.size()) throw std::invalid_argument("CrtBasis::lift: residue count mismatch");
    Integer acc = 0;
    for (std::size_t i = 0; i < primes_.size(); ++i) acc += weights_[i] * static_cast<unsigned long>(residues[i]);
    acc %= modulus_;
    if (acc > half_) acc -= modulus_;
    return acc;
}

}  // namespace ztwo::kernels
