#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "glv/rng.hpp"
#include "glv/vecbackend.hpp"
#include "oracle.hpp"

using namespace glv;
using vec::Backend;
using vec::Batch;
using vec::MulMode;

namespace {

Batch random_batch(Backend& b, SplitMix64& rng) {
    std::vector<uint64_t> words(b.width());
    for (auto& w : words) {
        w = rng.next_element().value();
    }
    return b.load(words);
}

} // namespace

TEST_CASE("vadd trivial examples") {
    Backend b4(4);
    CHECK(b4.vadd(Batch{0, 0, 0, 0}, Batch{0, 0, 0, 0}) == Batch{0, 0, 0, 0});

    Backend b2(2);
    CHECK(b2.vadd(Batch{kPrime - 1, 1}, Batch{1, 1}) == Batch{0, 2});
}

TEST_CASE("vsub trivial examples") {
    Backend b2(2);
    CHECK(b2.vsub(Batch{7, 9}, Batch{7, 9}) == Batch{0, 0});
    CHECK(b2.vsub(Batch{0, 0}, Batch{1, 1}) == Batch{kPrime - 1, kPrime - 1});
}

TEST_CASE("width checks") {
    CHECK_THROWS_AS(Backend(3), DomainError);
    CHECK_THROWS_AS(Batch(5), DomainError);
    Backend b4(4);
    CHECK_THROWS_AS(b4.vadd(Batch{1, 2}, Batch{1, 2}), WidthMismatchError);
    std::vector<Batch> rows(2, Batch(4));
    CHECK_THROWS_AS(b4.transpose_block(rows), WidthMismatchError);
}

TEST_CASE("vmul_wide trivial examples") {
    Backend b2(2);
    Batch hi, lo;
    b2.vmul_wide(Batch{1, 1}, Batch{42, 7}, MulMode::direct, hi, lo);
    CHECK(hi == Batch{0, 0});
    CHECK(lo == Batch{42, 7});
    b2.vmul_wide(Batch{1ULL << 32, 1ULL << 32}, Batch{1ULL << 32, 1ULL << 32},
                 MulMode::split32, hi, lo);
    CHECK(hi == Batch{1, 1});
    CHECK(lo == Batch{0, 0});
}

TEST_CASE("vreduce_128 examples") {
    Backend b4(4);
    CHECK(b4.vreduce_128(Batch(4), Batch(4)) == Batch(4));
    Batch hi{1, 1, 1, 1};
    Batch lo(4);
    Batch expect{0xFFFFFFFF, 0xFFFFFFFF, 0xFFFFFFFF, 0xFFFFFFFF};
    CHECK(b4.vreduce_128(hi, lo) == expect);
}

TEST_CASE("lane-wise equivalence with scalar ops") {
    for (std::size_t w : vec::kWidths) {
        Backend b(w);
        SplitMix64 rng(100 + w);
        for (int i = 0; i < 10000; ++i) {
            Batch a = random_batch(b, rng);
            Batch c = random_batch(b, rng);
            Batch s = b.vadd(a, c);
            Batch d = b.vsub(a, c);
            Batch hi, lo;
            b.vmul_wide(a, c, MulMode::direct, hi, lo);
            Batch hi2, lo2;
            b.vmul_wide(a, c, MulMode::split32, hi2, lo2);
            Batch r = b.vreduce_128(hi, lo);
            CHECK(hi == hi2);
            CHECK(lo == lo2);
            for (std::size_t l = 0; l < w; ++l) {
                CHECK(s[l] == add(Element(a[l]), Element(c[l])).value());
                CHECK(d[l] == sub(Element(a[l]), Element(c[l])).value());
                WideProduct p = mul_wide_direct(Element(a[l]), Element(c[l]));
                CHECK(hi[l] == p.hi);
                CHECK(lo[l] == p.lo);
                CHECK(r[l] == reduce_128(p).value());
            }
        }
    }
}

TEST_CASE("transpose: identity pattern, index permutation, involution") {
    Backend b2(2);
    std::vector<Batch> id = {Batch{1, 0}, Batch{0, 1}};
    std::vector<Batch> id_copy = id;
    b2.transpose_block(id);
    CHECK(id == id_copy);

    Backend b4(4);
    std::vector<Batch> rows;
    for (uint64_t k = 0; k < 4; ++k) {
        Batch r(4);
        for (uint64_t j = 0; j < 4; ++j) {
            r[j] = 4 * k + j;
        }
        rows.push_back(r);
    }
    b4.transpose_block(rows);
    for (uint64_t i = 0; i < 4; ++i) {
        for (uint64_t j = 0; j < 4; ++j) {
            CHECK(rows[i][j] == 4 * j + i);
        }
    }

    for (std::size_t w : vec::kWidths) {
        Backend b(w);
        SplitMix64 rng(200 + w);
        std::vector<Batch> block;
        for (std::size_t i = 0; i < w; ++i) {
            block.push_back(random_batch(b, rng));
        }
        std::vector<Batch> original = block;
        b.transpose_block(block);
        b.transpose_block(block);
        CHECK(block == original);
    }
}

TEST_CASE("counters") {
    Backend b(4, /*counting=*/true);
    CHECK(b.counters().total() == 0);

    b.vadd(Batch(4), Batch(4));
    CHECK(b.counters().vadd == 1);
    CHECK(b.counters().total() == 1);

    SUBCASE("monotonic and reset") {
        uint64_t before = b.counters().total();
        Batch hi, lo;
        b.vmul_wide(Batch(4), Batch(4), MulMode::direct, hi, lo);
        b.vreduce_128(hi, lo);
        CHECK(b.counters().total() > before);
        b.reset_counters();
        CHECK(b.counters().total() == 0);
    }

    SUBCASE("counts are data-oblivious") {
        Backend x(2, true);
        Backend y(2, true);
        SplitMix64 rng(300);
        Batch a1 = random_batch(x, rng);
        Batch a2 = random_batch(x, rng);
        Batch b1 = random_batch(y, rng);
        Batch b2 = random_batch(y, rng);
        Batch hi, lo;
        x.vadd(a1, a2);
        x.vmul_wide(a1, a2, MulMode::split32, hi, lo);
        x.vreduce_128(hi, lo);
        y.vadd(b1, b2);
        y.vmul_wide(b1, b2, MulMode::split32, hi, lo);
        y.vreduce_128(hi, lo);
        CHECK(x.counters().total() == y.counters().total());
        CHECK(x.counters().vmul_lo == y.counters().vmul_lo);
    }

    SUBCASE("non-counting backend stays at zero") {
        Backend n(4);
        n.vadd(Batch(4), Batch(4));
        CHECK(n.counters().total() == 0);
    }
}
