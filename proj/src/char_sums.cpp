#include "ztwo/char_sums.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "ztwo/kernels/crt.hpp"
#include "ztwo/kernels/power_sum.hpp"

namespace ztwo {

namespace {

constexpr std::int64_t kBlock = 1 << 15;
constexpr std::int64_t kMaxArgument = std::int64_t{1} << 30;
constexpr unsigned kMaxChiTableLayer = 20;

// Maps a to -1 (character vanishes) or to the exponent of zeta_{2^L}.
class CharacterCoder {
public:
    explicit CharacterCoder(const CharSpec& spec) : spec_(spec) {
        spec_.validate();
        level_ = spec.layer >= 1 ? spec.layer : 1;
        order_ = std::int64_t{1} << level_;
        if (spec.layer >= 1 && spec.layer <= kMaxChiTableLayer) {
            const std::int64_t m = std::int64_t{1} << (spec.layer + 2);
            chi_table_.assign(static_cast<std::size_t>(m), -1);
            for (std::int64_t a = 1; a < m; a += 2) chi_table_[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(dlog5(spec.layer, a));
            chi_mask_ = m - 1;
        }
        if (spec.has_twist()) {
            disc_ = fundamental_discriminant(spec.twist);
            psi_table_.resize(static_cast<std::size_t>(disc_));
            for (std::int64_t a = 0; a < disc_; ++a) psi_table_[static_cast<std::size_t>(a)] = static_cast<std::int8_t>(kronecker(disc_, a));
        }
    }

    std::int64_t order() const { return order_; }

    std::int64_t code(std::int64_t a) const {
        std::int64_t e = 0;
        if (spec_.layer >= 1) {
            if ((a & 1) == 0) return -1;
            e = chi_table_.empty() ? static_cast<std::int64_t>(dlog5(spec_.layer, a)) : chi_table_[static_cast<std::size_t>(a & chi_mask_)];
        }
        if (!psi_table_.empty()) {
            std::int64_t r = a % disc_;
            if (r < 0) r += disc_;
            const int s = psi_table_[static_cast<std::size_t>(r)];
            if (s == 0) return -1;
            if (spec_.twist_power == 1 && s < 0) e += order_ / 2;
        }
        return e & (order_ - 1);
    }

private:
    CharSpec spec_;
    unsigned level_ = 1;
    std::int64_t order_ = 2;
    std::vector<std::int32_t> chi_table_;
    std::int64_t chi_mask_ = 0;
    std::vector<std::int8_t> psi_table_;
    std::int64_t disc_ = 1;
};

bool admitted(std::int64_t a, const std::optional<int>& residue_mod4) {
    if (!residue_mod4) return true;
    std::int64_t r = a % 4;
    if (r < 0) r += 4;
    return r == *residue_mod4;
}

// Residues per (prime, exponent, bucket), bucket = exponent of zeta_{2^L}.
struct ResidueAccumulator {
    std::size_t primes, terms, buckets;
    std::vector<std::uint64_t> data;

    ResidueAccumulator(std::size_t p, std::size_t t, std::size_t b) : primes(p), terms(t), buckets(b), data(p * t * b, 0) {}
    std::uint64_t& at(std::size_t pi, std::size_t j, std::size_t bucket) { return data[(pi * terms + j) * buckets + bucket]; }
};

void accumulate_range(const CharacterCoder& coder, const PowerSumRequest& req, std::int64_t lo, std::int64_t hi,
                      const kernels::CrtBasis& basis, ResidueAccumulator& acc) {
    const std::size_t buckets = acc.buckets;
    const auto primes = basis.primes();
    std::vector<std::uint32_t> residues(acc.terms);
    std::vector<std::uint32_t> counts(buckets + 1), sorted;
    std::vector<std::int64_t> codes;
    for (std::int64_t start = lo; start <= hi; start += kBlock) {
        const std::int64_t stop = std::min(hi, start + kBlock - 1);
        codes.resize(static_cast<std::size_t>(stop - start + 1));
        std::fill(counts.begin(), counts.end(), 0);
        for (std::int64_t a = start; a <= stop; ++a) {
            const std::int64_t c = admitted(a, req.residue_mod4) ? coder.code(a) : -1;
            codes[static_cast<std::size_t>(a - start)] = c;
            if (c >= 0) ++counts[static_cast<std::size_t>(c) + 1];
        }
        for (std::size_t b = 0; b < buckets; ++b) counts[b + 1] += counts[b];
        sorted.assign(counts[buckets], 0);
        std::vector<std::uint32_t> fill(counts.begin(), counts.end() - 1);
        for (std::int64_t a = start; a <= stop; ++a) {
            const std::int64_t c = codes[static_cast<std::size_t>(a - start)];
            if (c >= 0) sorted[fill[static_cast<std::size_t>(c)]++] = static_cast<std::uint32_t>(a);
        }
        for (std::size_t b = 0; b < buckets; ++b) {
            const std::span<const std::uint32_t> values(sorted.data() + counts[b], counts[b + 1] - counts[b]);
            if (values.empty()) continue;
            for (std::size_t pi = 0; pi < primes.size(); ++pi) {
                kernels::power_sums_mod(values, primes[pi], residues);
                for (std::size_t j = 0; j < acc.terms; ++j) {
                    auto& slot = acc.at(pi, j, b);
                    slot = (slot + residues[j]) % primes[pi];
                }
            }
        }
    }
}

void check_request(const PowerSumRequest& req) {
    req.spec.validate();
    if (req.lo < 1) throw std::invalid_argument("power sums: lower bound must be >= 1");
    if (req.hi >= kMaxArgument) throw std::invalid_argument("power sums: upper bound exceeds 2^30");
    if (req.residue_mod4 && (*req.residue_mod4 < 0 || *req.residue_mod4 > 3)) throw std::invalid_argument("power sums: bad residue");
}

std::vector<CyclotomicNumber> empty_result(const PowerSumRequest& req) {
    return std::vector<CyclotomicNumber>(req.max_exponent + 1, CyclotomicNumber(req.spec.layer));
}

}  // namespace

std::vector<CyclotomicNumber> character_power_sums(const PowerSumRequest& req, const SumOptions& opts) {
    check_request(req);
    if (req.hi < req.lo) return empty_result(req);

    const CharacterCoder coder(req.spec);
    const std::size_t terms = req.max_exponent + 1;
    const std::size_t buckets = static_cast<std::size_t>(coder.order());
    const Integer count = Integer(static_cast<long>(req.hi - req.lo + 1));
    const Integer bound = count * pow_integer(Integer(static_cast<long>(req.hi)), req.max_exponent);
    const auto basis = kernels::CrtBasis::for_bound(bound);
    const std::size_t np = basis.primes().size();

    // Contiguous slices per worker; modular addition makes the merge exact
    // and independent of the split.
    const std::int64_t total = req.hi - req.lo + 1;
    const std::int64_t blocks = (total + kBlock - 1) / kBlock;
    const unsigned workers = static_cast<unsigned>(std::clamp<std::int64_t>(opts.jobs == 0 ? 1 : opts.jobs, 1, blocks));
    std::vector<ResidueAccumulator> partial(workers, ResidueAccumulator(np, terms, buckets));
    auto slice = [&](unsigned w) {
        const std::int64_t b0 = blocks * w / workers, b1 = blocks * (w + 1) / workers;
        const std::int64_t lo = req.lo + b0 * kBlock;
        const std::int64_t hi = std::min(req.hi, req.lo + b1 * kBlock - 1);
        if (lo <= hi) accumulate_range(coder, req, lo, hi, basis, partial[w]);
    };
    if (workers == 1) {
        slice(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(slice, w);
        for (auto& t : pool) t.join();
    }
    ResidueAccumulator& acc = partial[0];
    for (unsigned w = 1; w < workers; ++w)
        for (std::size_t pi = 0; pi < np; ++pi)
            for (std::size_t j = 0; j < terms; ++j)
                for (std::size_t b = 0; b < buckets; ++b) {
                    auto& slot = acc.at(pi, j, b);
                    slot = (slot + partial[w].at(pi, j, b)) % basis.primes()[pi];
                }

    // zeta^e for e >= order/2 is -zeta^{e - order/2}.
    const unsigned level = req.spec.layer;
    const std::size_t dim = cyclotomic_dimension(level);
    std::vector<CyclotomicNumber> out;
    out.reserve(terms);
    std::vector<std::uint32_t> residues(np);
    for (std::size_t j = 0; j < terms; ++j) {
        std::vector<Rational> coeffs(dim);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            for (std::size_t pi = 0; pi < np; ++pi) {
                const std::uint64_t p = basis.primes()[pi];
                residues[pi] = static_cast<std::uint32_t>((acc.at(pi, j, idx) + p - acc.at(pi, j, idx + buckets / 2)) % p);
            }
            coeffs[idx] = Rational(basis.lift(residues));
        }
        out.emplace_back(level, std::move(coeffs));
    }
    return out;
}

std::vector<CyclotomicNumber> character_power_sums_naive(const PowerSumRequest& req) {
    check_request(req);
    auto out = empty_result(req);
    const unsigned level = req.spec.layer;
    const std::size_t dim = cyclotomic_dimension(level);
    std::vector<std::vector<Integer>> sums(req.max_exponent + 1, std::vector<Integer>(dim));
    for (std::int64_t a = req.lo; a <= req.hi; ++a) {
        if (!admitted(a, req.residue_mod4)) continue;
        const UnitValue u = char_unit(req.spec, a);
        if (u.zero) continue;
        const std::uint64_t half = dim;  // order / 2
        const bool neg = u.exponent >= half;
        const std::size_t idx = static_cast<std::size_t>(neg ? u.exponent - half : u.exponent);
        Integer pw = 1;
        for (unsigned j = 0; j <= req.max_exponent; ++j) {
            if (neg)
                sums[j][idx] -= pw;
            else
                sums[j][idx] += pw;
            pw *= static_cast<long>(a);
        }
    }
    for (unsigned j = 0; j <= req.max_exponent; ++j) {
        std::vector<Rational> coeffs(sums[j].begin(), sums[j].end());
        out[j] = CyclotomicNumber(level, std::move(coeffs));
    }
    return out;
}

bool is_even_character(const CharSpec& spec) {
    const UnitValue u = char_unit(spec, -1);
    return !u.zero && u.exponent == 0;
}

std::vector<CyclotomicNumber> full_period_power_sums(const CharSpec& spec, std::int64_t period, unsigned max_exponent,
                                                     bool fold, const SumOptions& opts) {
    if (period < 1) throw std::invalid_argument("full_period_power_sums: period must be positive");
    if (period % spec.modulus() != 0) throw std::invalid_argument("full_period_power_sums: period is not a multiple of the modulus");
    if (!fold || !is_even_character(spec)) {
        return character_power_sums({spec, 1, period, max_exponent, std::nullopt}, opts);
    }
    // Pairs (a, period - a) for 1 <= a <= H; the middle term period/2 and the
    // endpoint are added separately.
    const std::int64_t h = (period - 1) / 2;
    const auto half = character_power_sums({spec, 1, h, max_exponent, std::nullopt}, opts);
    const Integer dz(static_cast<long>(period));
    std::vector<CyclotomicNumber> out;
    out.reserve(max_exponent + 1);
    for (unsigned j = 0; j <= max_exponent; ++j) {
        CyclotomicNumber s = half[j];
        for (unsigned i = 0; i <= j; ++i) {
            Integer c = binomial(j, i) * pow_integer(dz, j - i);
            if (i % 2 == 1) c = -c;
            s += half[i] * Rational(c);
        }
        if (period % 2 == 0) s += char_eval(spec, period / 2) * Rational(pow_integer(Integer(static_cast<long>(period / 2)), j));
        s += char_eval(spec, period) * Rational(pow_integer(dz, j));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace ztwo
