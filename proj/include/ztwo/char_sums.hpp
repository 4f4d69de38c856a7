#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ztwo/characters.hpp"
#include "ztwo/cyclotomic.hpp"

namespace ztwo {

struct SumOptions {
    /// Worker threads for the block loop; results do not depend on it.
    unsigned jobs = 1;
};

/// sum_{a = lo}^{hi} chi(a) a^j for j = 0 .. max_exponent, optionally only over
/// a == residue_mod4 (mod 4).
struct PowerSumRequest {
    CharSpec spec;
    std::int64_t lo = 1;
    std::int64_t hi = 0;
    unsigned max_exponent = 0;
    std::optional<int> residue_mod4;
};

/// Exact sums, one CyclotomicNumber (integral coefficients) per exponent, at
/// level spec.layer. Runs on the multi-modular kernels and lifts by CRT.
std::vector<CyclotomicNumber> character_power_sums(const PowerSumRequest& req, const SumOptions& opts = {});

/// Term-by-term GMP evaluation; the reference the kernel path is checked against.
std::vector<CyclotomicNumber> character_power_sums_naive(const PowerSumRequest& req);

/// sum_{a=1}^{period} chi(a) a^j for j = 0 .. max_exponent. With fold = true and
/// chi verified even, only a <= period/2 is visited and the upper half is
/// recovered from chi(period - a) = chi(a) by binomial expansion.
std::vector<CyclotomicNumber> full_period_power_sums(const CharSpec& spec, std::int64_t period, unsigned max_exponent,
                                                     bool fold, const SumOptions& opts = {});

/// chi(-1) == 1, checked by evaluation.
bool is_even_character(const CharSpec& spec);

}  // namespace ztwo
