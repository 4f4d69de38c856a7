// Compiled with -mavx2; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <vector>

#include "ztwo/kernels/power_sum.hpp"

namespace ztwo::kernels {

namespace {

struct Montgomery {
    std::uint32_t p;
    std::uint32_t neg_pinv;  // -p^{-1} mod 2^32
    std::uint32_t r2;        // 2^64 mod p

    explicit Montgomery(std::uint32_t prime) : p(prime) {
        std::uint32_t inv = prime;
        for (int i = 0; i < 5; ++i) inv *= 2 - prime * inv;
        neg_pinv = 0u - inv;
        const unsigned __int128 r = static_cast<unsigned __int128>(1) << 64;
        r2 = static_cast<std::uint32_t>(r % prime);
    }

    std::uint32_t redc(std::uint64_t t) const {
        const std::uint32_t m = static_cast<std::uint32_t>(t) * neg_pinv;
        std::uint64_t u = (t + static_cast<std::uint64_t>(m) * p) >> 32;
        return static_cast<std::uint32_t>(u >= p ? u - p : u);
    }
};

// Lanes hold values < p in their low 32 bits.
inline __m256i mont_mul(__m256i a, __m256i b, __m256i p, __m256i neg_pinv) {
    const __m256i t = _mm256_mul_epu32(a, b);
    const __m256i m = _mm256_mul_epu32(t, neg_pinv);
    const __m256i u = _mm256_srli_epi64(_mm256_add_epi64(t, _mm256_mul_epu32(m, p)), 32);
    // u < 2p < 2^32, so a signed 64-bit compare is safe.
    const __m256i below = _mm256_cmpgt_epi64(p, u);
    return _mm256_sub_epi64(u, _mm256_andnot_si256(below, p));
}

struct Lane {
    __m256i v;
};

}  // namespace

void power_sums_mod_avx2(std::span<const std::uint32_t> values, std::uint32_t p, std::span<std::uint32_t> out) {
    if (out.empty()) return;
    const std::size_t terms = out.size();
    const Montgomery mont(p);
    const __m256i vp = _mm256_set1_epi64x(p);
    const __m256i vinv = _mm256_set1_epi64x(mont.neg_pinv);
    const __m256i vr2 = _mm256_set1_epi64x(mont.r2);

    // acc[j] collects x^j * R (mod p) per lane, j >= 1. Each add is < 2^31,
    // so 64-bit lanes cannot overflow for any span below 2^33 elements.
    std::vector<Lane> acc(terms, Lane{_mm256_setzero_si256()});
    const std::size_t n = values.size();
    std::size_t i = 0;
    auto consume = [&](__m256i x) {
        const __m256i xm = mont_mul(x, vr2, vp, vinv);
        __m256i pw = xm;
        for (std::size_t j = 1; j < terms; ++j) {
            acc[j].v = _mm256_add_epi64(acc[j].v, pw);
            pw = mont_mul(pw, xm, vp, vinv);
        }
    };
    for (; i + 4 <= n; i += 4) {
        const __m128i raw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(values.data() + i));
        consume(_mm256_cvtepu32_epi64(raw));
    }
    if (i < n) {
        // Zero padding contributes 0^j = 0 for j >= 1.
        alignas(16) std::uint32_t tail[4] = {0, 0, 0, 0};
        for (std::size_t k = 0; i + k < n; ++k) tail[k] = values[i + k];
        consume(_mm256_cvtepu32_epi64(_mm_load_si128(reinterpret_cast<const __m128i*>(tail))));
    }

    out[0] = static_cast<std::uint32_t>(n % p);
    for (std::size_t j = 1; j < terms; ++j) {
        alignas(32) std::uint64_t lanes[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc[j].v);
        std::uint64_t s = 0;
        for (std::uint64_t lane : lanes) s += lane % p;
        out[j] = mont.redc(s % p);
    }
}

}  // namespace ztwo::kernels
