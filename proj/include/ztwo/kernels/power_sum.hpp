#pragma once

// Modular power-sum kernels: the inner loop of every character sum.
//
// Each kernel computes out[j] = sum_i values[i]^j (mod p) for
// j = 0 .. out.size() - 1. Preconditions shared by all variants:
//   - p is an odd prime below 2^31,
//   - every value is < p.
// All variants are exact, so their outputs must agree bit for bit.

#include <cstdint>
#include <span>
#include <string_view>

namespace ztwo::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Reference implementation: 64-bit products reduced with '%'.
void power_sums_mod_scalar(std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out);

#if defined(ZTWO_BUILD_AVX2) || defined(ZTWO_DECLARE_AVX2)
/// Four 64-bit lanes, Montgomery multiplication on _mm256_mul_epu32.
void power_sums_mod_avx2(std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out);
#endif

/// True when the AVX2 variant was compiled in and the CPU reports AVX2.
bool isa_available(Isa isa);

/// Best available ISA, unless ZTWO_ISA=scalar|avx2 overrides it.
Isa active_isa();
/// Process-wide override; throws std::invalid_argument if unavailable.
void set_active_isa(Isa isa);

/// Dispatches to the active variant.
void power_sums_mod(std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out);
void power_sums_mod(Isa isa, std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out);

}  // namespace ztwo::kernels
