#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "glv/field.hpp"
#include "glv/rng.hpp"
#include "oracle.hpp"

using namespace glv;

namespace {

const uint64_t kBoundary[] = {0, 1, (1ULL << 32) - 1, 1ULL << 32, 1ULL << 63, kPrime - 1};

} // namespace

TEST_CASE("to_canonical") {
    CHECK(to_canonical(0).value() == 0);
    CHECK(to_canonical(kPrime).value() == 0);
    CHECK(to_canonical(kPrime + 5).value() == 5);
    CHECK(to_canonical(UINT64_MAX).value() == UINT64_MAX - kPrime);
}

TEST_CASE("add examples") {
    CHECK(add(Element(0), Element(0)).value() == 0);
    CHECK(add(Element(kPrime - 1), Element(1)).value() == 0);
    // 2^63 + 2^63 = 2^64 = 2^32 - 1 mod P
    CHECK(add(Element(1ULL << 63), Element(1ULL << 63)).value() == 0xFFFFFFFFULL);
}

TEST_CASE("sub examples") {
    CHECK(sub(Element(5), Element(5)).value() == 0);
    CHECK(sub(Element(0), Element(1)).value() == kPrime - 1);
    CHECK(sub(Element(1), Element(kPrime - 1)).value() == 2);
}

TEST_CASE("signed reference variants") {
    CHECK(add_signed_ref(0, 0).value() == 0);
    CHECK(add_signed_ref(kPrime, 1).value() == 1);
    CHECK(sub_signed_ref(kPrime, 1).value() == kPrime - 1);
    CHECK(add_signed_ref(UINT64_MAX, 0).value() == UINT64_MAX - kPrime);
    CHECK(sub_signed_ref(0, UINT64_MAX).value() == kPrime - (UINT64_MAX - kPrime));

    SplitMix64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        Element a = rng.next_element();
        Element b = rng.next_element();
        CHECK(add_signed_ref(a.value(), b.value()) == add(a, b));
        CHECK(sub_signed_ref(a.value(), b.value()) == sub(a, b));
    }
    // arbitrary (possibly non-canonical) inputs agree with the oracle
    for (int i = 0; i < 20000; ++i) {
        uint64_t a = rng.next();
        uint64_t b = rng.next();
        CHECK(add_signed_ref(a, b).value() == oracle::add(a % kPrime, b % kPrime));
        CHECK(sub_signed_ref(a, b).value() == oracle::sub(a % kPrime, b % kPrime));
    }
}

TEST_CASE("widening multiplies") {
    Element x(123456789);
    CHECK(mul_wide_direct(Element(0), x) == WideProduct{0, 0});
    CHECK(mul_wide_direct(Element(1), x) == WideProduct{0, x.value()});
    CHECK(mul_wide_direct(Element(1ULL << 32), Element(1ULL << 32)) == WideProduct{1, 0});

    CHECK(mul_wide_split(Element(0), Element(0)) == WideProduct{0, 0});
    uint64_t m = (1ULL << 32) - 1;
    CHECK(mul_wide_split(Element(m), Element(m)) ==
          WideProduct{0, 0xFFFFFFFE00000001ULL}); // 2^64 - 2^33 + 1

    SplitMix64 rng(22);
    for (int i = 0; i < 50000; ++i) {
        Element a = rng.next_element();
        Element b = rng.next_element();
        CHECK(mul_wide_split(a, b) == mul_wide_direct(a, b));
    }
}

TEST_CASE("reduce_128") {
    CHECK(reduce_128(WideProduct{0, 0}).value() == 0);
    CHECK(reduce_128(WideProduct{1, 0}).value() == 4294967295ULL);
    CHECK(reduce_128(WideProduct{1ULL << 32, 0}).value() == 18446744069414584320ULL);

    SplitMix64 rng(33);
    for (int i = 0; i < 50000; ++i) {
        uint64_t hi = rng.next();
        uint64_t lo = rng.next();
        CHECK(reduce_128(WideProduct{hi, lo}).value() == oracle::reduce(hi, lo));
    }
    for (uint64_t hi : kBoundary) {
        for (uint64_t lo : kBoundary) {
            CHECK(reduce_128(WideProduct{hi, lo}).value() == oracle::reduce(hi, lo));
        }
    }
}

TEST_CASE("mul, square, mult_72, pow7 examples") {
    Element x(987654321);
    CHECK(mul(Element(1), x) == x);
    CHECK(mul(Element(1ULL << 32), Element(1ULL << 32)).value() == 4294967295ULL);
    CHECK(mul(Element(kPrime - 1), Element(kPrime - 1)).value() == 1);

    CHECK(square(Element(0)).value() == 0);
    CHECK(square(Element(kPrime - 1)).value() == 1);
    CHECK(square(Element(1ULL << 32)).value() == 4294967295ULL);

    CHECK(mult_72(x, 0).value() == 0);
    CHECK(mult_72(x, 1) == x);
    CHECK(mult_72(Element(1ULL << 63), 255).value() == oracle::mul(1ULL << 63, 255));

    CHECK(pow7(Element(0)).value() == 0);
    CHECK(pow7(Element(1)).value() == 1);
    CHECK(pow7(Element(2)).value() == 128);
}

TEST_CASE("oracle equivalence on random and boundary inputs") {
    SplitMix64 rng(44);
    for (int i = 0; i < 50000; ++i) {
        Element a = rng.next_element();
        Element b = rng.next_element();
        uint8_t s = static_cast<uint8_t>(rng.next());
        CHECK(add(a, b).value() == oracle::add(a.value(), b.value()));
        CHECK(sub(a, b).value() == oracle::sub(a.value(), b.value()));
        CHECK(mul(a, b).value() == oracle::mul(a.value(), b.value()));
        CHECK(square(a).value() == oracle::mul(a.value(), a.value()));
        CHECK(mult_72(a, s).value() == oracle::mul(a.value(), s));
        CHECK(pow7(a).value() == oracle::pow_mod(a.value(), 7));
    }
    for (uint64_t av : kBoundary) {
        for (uint64_t bv : kBoundary) {
            Element a(av), b(bv);
            CHECK(add(a, b).value() == oracle::add(av, bv));
            CHECK(sub(a, b).value() == oracle::sub(av, bv));
            CHECK(mul(a, b).value() == oracle::mul(av, bv));
            CHECK(mult_72(a, 255).value() == oracle::mul(av, 255));
            CHECK(pow7(a).value() == oracle::pow_mod(av, 7));
        }
    }
}

TEST_CASE("mult_72 dense small-operand sweep") {
    // every 8-bit multiplier against a spread of first operands
    SplitMix64 rng(55);
    for (int rep = 0; rep < 200; ++rep) {
        Element a = rng.next_element();
        for (unsigned b = 0; b < 256; ++b) {
            CHECK(mult_72(a, static_cast<uint8_t>(b)).value() == oracle::mul(a.value(), b));
        }
    }
    for (uint64_t av : kBoundary) {
        for (unsigned b = 0; b < 256; ++b) {
            CHECK(mult_72(Element(av), static_cast<uint8_t>(b)).value() == oracle::mul(av, b));
        }
    }
}

TEST_CASE("field laws") {
    SplitMix64 rng(66);
    for (int i = 0; i < 100000; ++i) {
        Element a = rng.next_element();
        Element b = rng.next_element();
        Element c = rng.next_element();
        CHECK(add(a, b) == add(b, a));
        CHECK(mul(a, b) == mul(b, a));
        CHECK(add(add(a, b), c) == add(a, add(b, c)));
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
        CHECK(add(a, Element(0)) == a);
        CHECK(mul(a, Element(1)) == a);
        Element neg = a.value() == 0 ? Element(0) : Element(kPrime - a.value());
        CHECK(add(a, neg).value() == 0);
        // canonicality spot checks
        CHECK(add(a, b).value() < kPrime);
        CHECK(sub(a, b).value() < kPrime);
        CHECK(mul(a, b).value() < kPrime);
    }
}

TEST_CASE("little-endian serialization round-trip") {
    SplitMix64 rng(77);
    for (int i = 0; i < 1000; ++i) {
        Element e = rng.next_element();
        uint8_t buf[8];
        store_le(e, buf);
        CHECK(load_le_u64(buf) == e.value());
    }
    uint8_t buf[8];
    store_le(Element(0x0102030405060708ULL), buf);
    CHECK(buf[0] == 0x08);
    CHECK(buf[7] == 0x01);
}
