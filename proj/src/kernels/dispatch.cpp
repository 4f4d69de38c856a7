#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ztwo/kernels/power_sum.hpp"

namespace ztwo::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(ZTWO_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa default_isa() {
    if (const char* env = std::getenv("ZTWO_ISA")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    }
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& isa_slot() {
    static std::atomic<int> slot{static_cast<int>(default_isa())};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return cpu_has_avx2();
    }
    return false;
}

Isa active_isa() { return static_cast<Isa>(isa_slot().load(std::memory_order_relaxed)); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("ISA " + std::string(isa_name(isa)) + " is not available");
    isa_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void power_sums_mod(Isa isa, std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out) {
    switch (isa) {
        case Isa::scalar: power_sums_mod_scalar(values, p, out); return;
        case Isa::avx2:
#if defined(ZTWO_BUILD_AVX2)
            if (cpu_has_avx2()) {
                power_sums_mod_avx2(values, p, out);
                return;
            }
#endif
            throw std::invalid_argument("AVX2 kernel unavailable");
    }
}

void power_sums_mod(std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out) {
    power_sums_mod(active_isa(), values, p, out);
}

}  // namespace ztwo::kernels
