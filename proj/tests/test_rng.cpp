#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <spmul/rng.hpp>

using spmul::RandomSource;
using ZZ = mpz_class;

TEST_CASE("same seed reproduces the same stream") {
    RandomSource a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    RandomSource a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("below stays in range and hits both ends") {
    RandomSource rng(7);
    bool low = false, high = false;
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t v = rng.below(10);
        REQUIRE(v < 10);
        if (v == 0) low = true;
        if (v == 9) high = true;
    }
    CHECK(low);
    CHECK(high);
}

TEST_CASE("below(1) is always zero") {
    RandomSource rng(3);
    for (int i = 0; i < 10; ++i) CHECK(rng.below(std::uint64_t(1)) == 0);
    for (int i = 0; i < 10; ++i) CHECK(rng.below(ZZ(1)) == 0);
}

TEST_CASE("below is roughly uniform") {
    RandomSource rng(11);
    double sum = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.below(100));
    double mean = sum / n;
    // mean of U{0..99} is 49.5, sd of the sample mean ~ 0.2
    CHECK(mean > 48.0);
    CHECK(mean < 51.0);
}

TEST_CASE("big-integer draws stay below the bound") {
    RandomSource rng(19);
    ZZ n("340282366920938463463374607431768211507"); // ~2^128
    std::set<ZZ> seen;
    for (int i = 0; i < 200; ++i) {
        ZZ v = rng.below(n);
        REQUIRE(v >= 0);
        REQUIRE(v < n);
        seen.insert(v);
    }
    // collisions at this width would signal a broken generator
    CHECK(seen.size() == 200);
}

TEST_CASE("big-integer draws cover high words") {
    RandomSource rng(23);
    ZZ n = ZZ(1) << 200;
    bool top_seen = false;
    for (int i = 0; i < 50; ++i) {
        if (rng.below(n) > (n >> 1)) top_seen = true;
    }
    CHECK(top_seen);
}

TEST_CASE("range is inclusive on both ends") {
    RandomSource rng(5);
    bool lo = false, hi = false;
    for (int i = 0; i < 500; ++i) {
        ZZ v = rng.range(ZZ(10), ZZ(13));
        REQUIRE(v >= 10);
        REQUIRE(v <= 13);
        if (v == 10) lo = true;
        if (v == 13) hi = true;
    }
    CHECK(lo);
    CHECK(hi);
}

TEST_CASE("split yields an independent but reproducible stream") {
    RandomSource a(99), b(99);
    RandomSource sa = a.split(), sb = b.split();
    for (int i = 0; i < 20; ++i) CHECK(sa.next_u64() == sb.next_u64());
    // parent and child should not mirror each other
    RandomSource c(99);
    RandomSource sc = c.split();
    int same = 0;
    for (int i = 0; i < 32; ++i)
        if (c.next_u64() == sc.next_u64()) ++same;
    CHECK(same == 0);
}
