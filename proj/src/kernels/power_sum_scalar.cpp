#include <vector>

#include "ztwo/kernels/power_sum.hpp"

namespace ztwo::kernels {

void power_sums_mod_scalar(std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out) {
    if (out.empty()) return;
    const std::size_t terms = out.size();
    std::vector<std::uint64_t> acc(terms, 0);
    for (std::uint32_t x : values) {
        std::uint64_t pw = 1;
        for (std::size_t j = 0; j < terms; ++j) {
            acc[j] += pw;
            pw = (pw * x) % p;
        }
    }
    for (std::size_t j = 0; j < terms; ++j) out[j] = static_cast<std::uint32_t>(acc[j] % p);
}

}  // namespace ztwo::kernels
