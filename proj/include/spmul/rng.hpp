#pragma once

// Seedable deterministic random stream. xoshiro256** with a splitmix64 seed
// expansion; all derived draws (bounded integers, big integers, sub-streams)
// are built from next_u64() with fixed algorithms and fixed byte order, so a
// given seed produces the same stream on every platform. Deliberately avoids
// std::uniform_int_distribution, whose output is implementation-defined.

#include <cstdint>
#include <stdexcept>
#include <vector>
#include <gmpxx.h>

namespace spmul {

class RandomSource {
    std::uint64_t s_[4];

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

public:
    explicit RandomSource(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, n). Rejection against 2^64 mod n keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("RandomSource::below: n == 0");
        const std::uint64_t rej = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= rej || rej == 0) return r % n;
        }
    }

    // Uniform in [0, n) for arbitrary-precision n >= 1. Draws
    // least-significant-first 64-bit words, masks the top word to the bit
    // length of n-1, rejects values >= n.
    mpz_class below(const mpz_class& n) {
        if (n <= 0) throw std::invalid_argument("RandomSource::below: n <= 0");
        if (n == 1) return 0;
        mpz_class top = n - 1;
        const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
        const std::size_t words = (bits + 63) / 64;
        const unsigned top_bits = static_cast<unsigned>(bits - 64 * (words - 1));
        const std::uint64_t mask =
            top_bits >= 64 ? ~0ULL : ((std::uint64_t{1} << top_bits) - 1);
        std::uint64_t buf[64];
        std::vector<std::uint64_t> heap;
        std::uint64_t* w = buf;
        if (words > 64) {
            heap.resize(words);
            w = heap.data();
        }
        mpz_class r;
        for (;;) {
            for (std::size_t i = 0; i < words; ++i) w[i] = next_u64();
            w[words - 1] &= mask;
            mpz_import(r.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, w);
            if (r < n) return r;
        }
    }

    // Uniform in [lo, hi] inclusive.
    mpz_class range(const mpz_class& lo, const mpz_class& hi) {
        if (lo > hi) throw std::invalid_argument("RandomSource::range: lo > hi");
        return lo + below(mpz_class(hi - lo + 1));
    }

    // Deterministically derived independent sub-stream.
    RandomSource split() {
        std::uint64_t child = next_u64() ^ 0xd1b54a32d192ed03ULL;
        return RandomSource(child);
    }
};

} // namespace spmul
