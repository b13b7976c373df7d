#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "spmul/instrument.hpp"
#include "spmul/oracles.hpp"
#include "spmul/rng.hpp"
#include "spmul/sumset.hpp"

using namespace spmul;

namespace {

ExponentSet set_of(std::vector<long> v) {
    std::vector<ZZ> z;
    z.reserve(v.size());
    for (long x : v) z.push_back(ZZ(x));
    return ExponentSet::from_values(std::move(z));
}

std::vector<long> longs_of(const ExponentSet& s) {
    std::vector<long> v;
    v.reserve(s.size());
    for (const auto& z : s.values()) v.push_back(z.get_si());
    return v;
}

ExponentSet random_set(RandomSource& rng, std::size_t n, long lo, long hi) {
    std::vector<ZZ> v;
    while (v.size() < n) {
        ZZ x = rng.range(ZZ(lo), ZZ(hi));
        if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    }
    return ExponentSet::from_values(std::move(v));
}

} // namespace

TEST_CASE("sumset on fixed small sets") {
    RandomSource rng(0x5e7a11);

    SECTION("both singletons at zero") {
        for (int i = 0; i < 5; ++i) {
            auto r = sumset(set_of({0}), set_of({0}), 0.05, rng);
            REQUIRE(r.has_value());
            CHECK(longs_of(*r) == std::vector<long>{0});
        }
    }

    SECTION("distinct singletons") {
        auto r = sumset(set_of({5}), set_of({7}), 0.05, rng);
        REQUIRE(r.has_value());
        CHECK(longs_of(*r) == std::vector<long>{12});
    }

    SECTION("overlapping sums collapse") {
        // 1+2 = 3+0 = 3, so the result has five elements, not six
        auto r = sumset(set_of({0, 1, 3}), set_of({0, 2}), 0.05, rng);
        REQUIRE(r.has_value());
        CHECK(longs_of(*r) == std::vector<long>{0, 1, 2, 3, 5});
    }

    SECTION("negative elements") {
        auto r = sumset(set_of({-2, 1}), set_of({-1, 1}), 0.05, rng);
        REQUIRE(r.has_value());
        CHECK(longs_of(*r) == std::vector<long>{-3, -1, 0, 2});
    }

    SECTION("forty-bit elements") {
        ZZ big = ZZ(1) << 40;
        auto A = ExponentSet::from_values({ZZ(0), big});
        auto B = ExponentSet::from_values({ZZ(0), ZZ(1)});
        auto r = sumset(A, B, 0.05, rng);
        REQUIRE(r.has_value());
        std::vector<ZZ> want{ZZ(0), ZZ(1), big, big + 1};
        CHECK(r->values() == want);
    }
}

TEST_CASE("sumset input validation") {
    RandomSource rng(1);
    ExponentSet empty;
    CHECK_THROWS_AS(sumset(empty, set_of({0}), 0.05, rng), std::invalid_argument);
    CHECK_THROWS_AS(sumset(set_of({0}), empty, 0.05, rng), std::invalid_argument);
    CHECK_THROWS_AS(sumset(set_of({0}), set_of({0}), 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sumset(set_of({0}), set_of({0}), 1.5, rng), std::invalid_argument);
}

TEST_CASE("sparsity estimate basics") {
    RandomSource rng(0xe57);

    SECTION("trivial product never doubles") {
        auto A = set_of({0});
        ZZ p(7);
        auto f = detail::hashed_indicator(A, p);
        for (int i = 0; i < 5; ++i)
            CHECK(estimate_sparsity(f, f, p, 2, 0.05, rng) == 2);
    }

    SECTION("estimate stays within the doubling envelope") {
        // S*/4 < S <= S* should hold in the vast majority of runs
        int hits = 0;
        const int trials = 30;
        for (int t = 0; t < trials; ++t) {
            auto A = random_set(rng, 6, -200, 200);
            auto B = random_set(rng, 5, -200, 200);
            const std::uint64_t R = A.size() + B.size();
            const ZZ D = std::max(A.width_bound(), B.width_bound());
            const ZZ R2 = ZZ(R) * R;
            auto p = get_diff_prime(R2, 4 * D, 1.0, 0.05, rng);
            REQUIRE(p.has_value());
            auto f = detail::hashed_indicator(A, *p);
            auto g = detail::hashed_indicator(B, *p);
            std::uint64_t sstar = estimate_sparsity(f, g, *p, R, 0.05, rng);
            CHECK(sstar >= 2);
            CHECK(ZZ(sstar) <= 2 * R2);
            std::uint64_t s = naive_sumset(A, B).size();
            if (sstar / 4 < s && s <= sstar) ++hits;
        }
        CHECK(hits >= 21);
    }
}

TEST_CASE("sumset agrees with the quadratic oracle") {
    RandomSource rng(0xab5e7);
    int fails = 0;
    for (int t = 0; t < 60; ++t) {
        std::size_t na = 1 + rng.below(15), nb = 1 + rng.below(15);
        auto A = random_set(rng, na, -500, 500);
        auto B = random_set(rng, nb, -500, 500);
        auto r = sumset(A, B, 0.05, rng);
        if (!r) {
            ++fails;
            continue;
        }
        auto want = naive_sumset(A, B);
        REQUIRE(r->values() == want.values());

        // unconditional size and containment facts about any sumset
        const std::uint64_t R = A.size() + B.size();
        const std::uint64_t S = r->size();
        CHECK(S + 1 >= R);
        CHECK(ZZ(S) <= std::min(ZZ(A.size()) * B.size(), ZZ(R) * R));
        CHECK(r->values().front() == A.values().front() + B.values().front());
        CHECK(r->values().back() == A.values().back() + B.values().back());
    }
    CHECK(fails <= 10);
}

TEST_CASE("sumset cost grows subquadratically on progressions") {
    RandomSource rng(0x9c0de);
    // arithmetic progressions keep the output linear in the input: doubling
    // the sets should much less than quadruple the counted work
    std::vector<double> cost;
    for (std::size_t n : {64, 128, 256}) {
        ZZ step = (ZZ(1) << 30) / static_cast<unsigned long>(2 * n);
        std::vector<ZZ> v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(step * i);
        auto A = ExponentSet::from_values(v);
        instrument::reset();
        auto r = sumset(A, A, 0.05, rng);
        REQUIRE(r.has_value());
        REQUIRE(r->size() == 2 * n - 1);
        cost.push_back(static_cast<double>(instrument::snapshot().total));
    }
    CHECK(cost[1] < cost[0] * 3.0);
    CHECK(cost[2] < cost[1] * 3.0);
}
