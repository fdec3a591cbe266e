#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>

#include "glv/errors.hpp"

namespace glv {

// Goldilocks prime P = 2^64 - 2^32 + 1.
inline constexpr uint64_t kPrime = 0xFFFFFFFF00000001ULL;

// 2^64 mod P = 2^32 - 1.
inline constexpr uint64_t kEpsilon = 0xFFFFFFFFULL;

// A canonical residue modulo P, i.e. a value in [0, P). Every public
// operation below takes canonical elements and returns canonical elements.
class Element {
  public:
    constexpr Element() : v_(0) {}

    explicit constexpr Element(uint64_t canonical) : v_(canonical) {
        assert(v_ < kPrime);
    }

    constexpr uint64_t value() const { return v_; }

    friend constexpr bool operator==(Element a, Element b) { return a.v_ == b.v_; }
    friend constexpr bool operator!=(Element a, Element b) { return a.v_ != b.v_; }

  private:
    uint64_t v_;
};

// An exact 128-bit product hi*2^64 + lo. No implicit reduction.
struct WideProduct {
    uint64_t hi = 0;
    uint64_t lo = 0;

    friend constexpr bool operator==(const WideProduct& a, const WideProduct& b) {
        return a.hi == b.hi && a.lo == b.lo;
    }
};

// Reduces x to its canonical residue with one conditional subtract. Every
// uint64 lies in [0, 2*P) since 2*P > 2^64, so a single subtract suffices.
inline Element to_canonical(uint64_t x) {
    return Element(x < kPrime ? x : x - kPrime);
}

// (a + b) mod P via the unsigned branch-on-(b >= P - a) method. The sum may
// wrap past 2^64; subtracting P in that case lands back in [0, P).
inline Element add(Element a, Element b) {
    uint64_t c = a.value() + b.value();
    uint64_t d = kPrime - a.value(); // no underflow: a < P
    if (b.value() >= d) {
        c -= kPrime;
    }
    return Element(c);
}

// (a - b) mod P; underflow corrected by adding P.
inline Element sub(Element a, Element b) {
    uint64_t c = a.value() - b.value();
    if (a.value() < b.value()) {
        c += kPrime;
    }
    return Element(c);
}

namespace detail {

inline constexpr uint64_t kSignBit = 1ULL << 63;

// to_canonical applied to a value living in the XOR-2^63 shifted domain,
// using signed comparisons the way the AVX path does.
inline uint64_t to_canonical_shifted(uint64_t xs) {
    auto s = static_cast<int64_t>(xs);
    auto ps = static_cast<int64_t>(kPrime ^ kSignBit);
    if (s >= ps) {
        xs -= kPrime;
    }
    return xs;
}

} // namespace detail

// Signed-integer reference addition: shifts one operand by 2^63, adds, and
// detects field overflow with a signed compare. Tolerates any uint64 input
// (all of which are < 2*P); kept as a cross-check of the unsigned method.
inline Element add_signed_ref(uint64_t a, uint64_t b) {
    uint64_t as = a ^ detail::kSignBit;
    uint64_t asc = detail::to_canonical_shifted(as);
    uint64_t cs = asc + b;
    if (static_cast<int64_t>(asc) > static_cast<int64_t>(cs)) {
        cs -= kPrime;
    }
    uint64_t c = cs ^ detail::kSignBit;
    return to_canonical(c);
}

// Signed-integer reference subtraction: both operands shifted, subtrahend
// canonicalized, underflow corrected by adding P.
inline Element sub_signed_ref(uint64_t a, uint64_t b) {
    uint64_t as = a ^ detail::kSignBit;
    uint64_t bs = b ^ detail::kSignBit;
    uint64_t bsc = detail::to_canonical_shifted(bs);
    uint64_t c = as - bsc; // both shifted, so the difference is unshifted
    if (static_cast<int64_t>(bsc) > static_cast<int64_t>(as)) {
        c += kPrime;
    }
    return to_canonical(c);
}

// Full 128-bit product through the compiler's widening multiply (the
// two-instruction high/low path).
inline WideProduct mul_wide_direct(Element a, Element b) {
    unsigned __int128 r =
        static_cast<unsigned __int128>(a.value()) * static_cast<unsigned __int128>(b.value());
    return WideProduct{static_cast<uint64_t>(r >> 64), static_cast<uint64_t>(r)};
}

// Full 128-bit product from four 32x32 multiplications with explicit carry
// assembly; only 64-bit low-half multiplies are used. Bit-identical to
// mul_wide_direct.
inline WideProduct mul_wide_split(Element a, Element b) {
    uint64_t a_h = a.value() >> 32;
    uint64_t a_l = a.value() & kEpsilon;
    uint64_t b_h = b.value() >> 32;
    uint64_t b_l = b.value() & kEpsilon;

    uint64_t c_ll = a_l * b_l;
    uint64_t c_lh = a_l * b_h;
    uint64_t c_hl = a_h * b_l;
    uint64_t c_hh = a_h * b_h;

    uint64_t r0 = c_hl + (c_ll >> 32);          // <= (2^32-1)^2 + 2^32-1, no overflow
    uint64_t r1 = c_lh + (r0 & kEpsilon);       // same bound
    uint64_t lo = (r1 << 32) | (c_ll & kEpsilon);
    uint64_t hi = c_hh + (r0 >> 32) + (r1 >> 32);
    return WideProduct{hi, lo};
}

// Reduces hi*2^64 + lo to a canonical element: with r_hh and r_hl the 32-bit
// halves of hi, the residue is r_hl*(2^32-1) + lo - r_hh < 2*P, followed by
// the underflow/overflow fix-ups.
inline Element reduce_128(WideProduct r) {
    uint64_t r_l = r.lo;
    uint64_t r_hl = r.hi & kEpsilon;
    uint64_t r_hh = r.hi >> 32;

    uint64_t tmp1 = r_l - r_hh;
    if (r_hh > r_l) {
        tmp1 -= kEpsilon; // fix underflow: wrapped value minus (2^32 - 1) is r_l - r_hh + P
    }
    uint64_t tmp2 = kEpsilon * r_hl;
    uint64_t res = tmp1 + tmp2;
    if (tmp1 > ~tmp2) {
        res += kEpsilon; // fix overflow; always lands < P
    } else if (res >= kPrime) {
        res -= kPrime;
    }
    return Element(res);
}

inline Element mul(Element a, Element b) {
    return reduce_128(mul_wide_direct(a, b));
}

inline Element square(Element a) {
    return mul(a, a);
}

// a*b with b < 2^8: the product fits in 72 bits, so hi < 2^8 and the
// reduction collapses to lo + hi*(2^32-1) with a single correction.
inline Element mult_72(Element a, uint8_t b) {
    uint64_t bw = b;
    uint64_t t = (a.value() >> 32) * bw;      // < 2^40
    uint64_t lo_part = (a.value() & kEpsilon) * bw;
    uint64_t lo = (t << 32) + lo_part;
    uint64_t hi = (t >> 32) + (lo < (t << 32) ? 1 : 0); // < 2^8

    uint64_t folded = hi * kEpsilon; // < 2^40
    uint64_t res = lo + folded;
    if (res < lo) {
        res += kEpsilon; // overflow: result < 2^40 + 2^32 < P
    } else if (res >= kPrime) {
        res -= kPrime;
    }
    return Element(res);
}

// a^7 as x4*x3 with x2 = a^2, x3 = x2*a, x4 = x2^2 (2 squares + 2 multiplies).
inline Element pow7(Element a) {
    Element x2 = square(a);
    Element x3 = mul(x2, a);
    Element x4 = square(x2);
    return mul(x4, x3);
}

// 8-byte little-endian serialization; the convention for all file formats
// and digests downstream.
inline void store_le(Element e, uint8_t out[8]) {
    uint64_t v = e.value();
    for (int i = 0; i < 8; ++i) {
        out[i] = static_cast<uint8_t>(v >> (8 * i));
    }
}

inline uint64_t load_le_u64(const uint8_t in[8]) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<uint64_t>(in[i]) << (8 * i);
    }
    return v;
}

} // namespace glv
