#pragma once

// Test-only big-integer oracle: full 128-bit arithmetic followed by % P,
// with no dependency on the library's reduction or lane code paths.

#include <cstdint>

#include "glv/field.hpp"

namespace oracle {

using u128 = unsigned __int128;

inline constexpr uint64_t P = glv::kPrime;

inline uint64_t mod_p(u128 x) { return static_cast<uint64_t>(x % P); }

inline uint64_t add(uint64_t a, uint64_t b) { return mod_p(u128(a) + b); }

inline uint64_t sub(uint64_t a, uint64_t b) { return mod_p(u128(a) + P - (b % P)); }

inline uint64_t mul(uint64_t a, uint64_t b) { return mod_p(u128(a) * b); }

inline uint64_t reduce(uint64_t hi, uint64_t lo) { return mod_p((u128(hi) << 64) | lo); }

inline uint64_t pow_mod(uint64_t base, unsigned exp) {
    u128 acc = 1;
    for (unsigned i = 0; i < exp; ++i) {
        acc = (acc * base) % P;
    }
    return static_cast<uint64_t>(acc);
}

} // namespace oracle
