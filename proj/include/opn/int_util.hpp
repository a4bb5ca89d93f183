#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace opn {

// All public arithmetic is arbitrary precision; uint64_t shows up only in
// internal fast paths and the range sieve.
using Int = mpz_class;

inline bool fits_u64(const Int& n) {
    return mpz_sgn(n.get_mpz_t()) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

inline uint64_t to_u64(const Int& n) {
    uint64_t lo = mpz_getlimbn(n.get_mpz_t(), 0);
    return mpz_size(n.get_mpz_t()) == 0 ? 0 : lo;
}

inline Int from_u64(uint64_t v) {
    Int n;
    mpz_import(n.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return n;
}

inline uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(__builtin_sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) r--;
    while ((r + 1) * (r + 1) <= n && (r + 1) <= 4294967295ull) r++;
    return r;
}

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t r = mod == 1 ? 0 : 1;
    base %= mod;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, mod);
        base = mulmod_u64(base, base, mod);
        exp >>= 1;
    }
    return r;
}

// Deterministic 64-bit generator (splitmix64); used wherever a seed parameter
// promises reproducible runs, independent of the standard library's
// implementation-defined distributions.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound); bound > 0
    uint64_t below(uint64_t bound) { return next() % bound; }

private:
    uint64_t state_;
};

}  // namespace opn
