#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ztwo/rational.hpp"

namespace ztwo::kernels {

/// The `count` largest primes below 2^31, in decreasing order. Deterministic.
std::vector<std::uint32_t> crt_primes(std::size_t count);

/// Chinese remaindering over a fixed prime set with symmetric lifting into
/// (-M/2, M/2].
class CrtBasis {
public:
    /// Smallest basis from crt_primes() whose modulus exceeds 2*bound.
    static CrtBasis for_bound(const Integer& bound);
    explicit CrtBasis(std::vector<std::uint32_t> primes);

    std::span<const std::uint32_t> primes() const { return primes_; }
    const Integer& modulus() const { return modulus_; }

    Integer lift(std::span<const std::uint32_t> residues) const;

private:
    std::vector<std::uint32_t> primes_;
    Integer modulus_;
    Integer half_;
    std::vector<Integer> weights_;  // M/p_i * ((M/p_i)^{-1} mod p_i)
};

}  // namespace ztwo::kernels
