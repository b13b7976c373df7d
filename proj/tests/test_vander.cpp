#include <catch2/catch_amalgamated.hpp>

#include <spmul/rng.hpp>
#include <spmul/vander.hpp>

using namespace spmul;

namespace {

std::vector<ZZ> random_residues(RandomSource& rng, std::size_t n, const ZZ& q) {
    std::vector<ZZ> out(n);
    for (auto& x : out) x = rng.below(q);
    return out;
}

std::vector<ZZ> distinct_residues(RandomSource& rng, std::size_t n, const ZZ& q) {
    std::vector<ZZ> out;
    std::set<ZZ> seen;
    while (out.size() < n) {
        ZZ x = rng.below(q);
        if (seen.insert(x).second) out.push_back(x);
    }
    return out;
}

const ZZ q62("4611686018427387847"); // prime just below 2^62

} // namespace

TEST_CASE("power projection: fixed example") {
    VandermondePoints pts(ZZ(7), {ZZ(1), ZZ(3)});
    auto out = vt_apply(pts, {ZZ(1), ZZ(1)});
    REQUIRE(out.size() == 2);
    CHECK(out[0] == 2);
    CHECK(out[1] == 4);
}

TEST_CASE("power projection: degenerate shapes") {
    VandermondePoints one(ZZ(11), {ZZ(6)});
    auto out = vt_apply(one, {ZZ(9)});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == 9);

    VandermondePoints pts(ZZ(11), {ZZ(2), ZZ(5), ZZ(7)});
    auto zeros = vt_apply(pts, {ZZ(0), ZZ(0), ZZ(0)});
    CHECK(zeros == std::vector<ZZ>(3, ZZ(0)));
    CHECK_THROWS_AS(vt_apply(pts, {ZZ(1)}), std::invalid_argument);
    CHECK_THROWS_AS(VandermondePoints(ZZ(11), {ZZ(11)}), std::invalid_argument);
}

TEST_CASE("solve inverts the fixed example") {
    VandermondePoints pts(ZZ(7), {ZZ(1), ZZ(3)});
    auto c = vt_solve(pts, {ZZ(2), ZZ(4)});
    REQUIRE(c.size() == 2);
    CHECK(c[0] == 1);
    CHECK(c[1] == 1);
}

TEST_CASE("coincident points are rejected") {
    VandermondePoints pts(ZZ(13), {ZZ(4), ZZ(9), ZZ(4)});
    CHECK_THROWS_AS(vt_solve(pts, {ZZ(1), ZZ(2), ZZ(3)}), NotInvertible);
    CHECK_THROWS_AS(vt_solve_naive(pts, {ZZ(1), ZZ(2), ZZ(3)}), NotInvertible);
    CHECK_THROWS_AS(vt_solve_fast(pts, {ZZ(1), ZZ(2), ZZ(3)}), NotInvertible);
}

TEST_CASE("solve after apply is the identity, exhaustively for tiny systems") {
    for (unsigned long qq : {7, 11, 13}) {
        const ZZ q(qq);
        RandomSource rng(1000 + qq);
        for (std::size_t S = 1; S <= 6 && S < qq; ++S) {
            // all distinct point tuples would be combinatorial; sweep many
            for (int rep = 0; rep < 60; ++rep) {
                auto v = distinct_residues(rng, S, q);
                VandermondePoints pts(q, v);
                auto c = random_residues(rng, S, q);
                auto a = vt_apply_naive(pts, c);
                CHECK(vt_solve_naive(pts, a) == c);
                CHECK(vt_solve_fast(pts, a) == c);
                CHECK(vt_apply_fast(pts, c) == a);
            }
        }
    }
}

TEST_CASE("fast and naive paths agree bit for bit at scale") {
    RandomSource rng(42);
    for (int rep = 0; rep < 12; ++rep) {
        std::size_t S = 33 + rng.below(std::uint64_t(80));
        auto v = distinct_residues(rng, S, q62);
        VandermondePoints pts(q62, v);
        auto c = random_residues(rng, S, q62);
        auto a_naive = vt_apply_naive(pts, c);
        auto a_fast = vt_apply_fast(pts, c);
        REQUIRE(a_naive == a_fast);
        auto c_fast = vt_solve_fast(pts, a_fast);
        REQUIRE(c_fast == c);
        auto c_naive = vt_solve_naive(pts, a_naive);
        REQUIRE(c_naive == c);
    }
}

TEST_CASE("zero point is a valid column") {
    RandomSource rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t S = 2 + rng.below(std::uint64_t(40));
        auto v = distinct_residues(rng, S - 1, q62);
        v.insert(v.begin() + (S > 2 ? rng.below(std::uint64_t(S - 1)) : 0), ZZ(0));
        // ensure distinctness survived the insert
        VandermondePoints pts(q62, v);
        if (!pts.points_distinct()) continue;
        auto c = random_residues(rng, S, q62);
        auto a = vt_apply_naive(pts, c);
        CHECK(vt_solve_fast(pts, a) == c);
        CHECK(vt_solve_naive(pts, a) == c);
    }
}

TEST_CASE("round trip at the largest test size") {
    RandomSource rng(4242);
    std::size_t S = 512;
    auto v = distinct_residues(rng, S, q62);
    VandermondePoints pts(q62, v);
    auto c = random_residues(rng, S, q62);
    auto a = vt_apply(pts, c);
    CHECK(vt_apply_fast(pts, c) == vt_apply_naive(pts, c));
    CHECK(vt_solve(pts, a) == c);
}

TEST_CASE("prefix application truncates and extends the projection") {
    RandomSource rng(99);
    std::size_t S = 40;
    auto v = distinct_residues(rng, S, q62);
    VandermondePoints pts(q62, v);
    auto c = random_residues(rng, S, q62);
    auto full = vt_apply_naive(pts, c);
    auto three = vt_apply_prefix(pts, c, 3);
    REQUIRE(three.size() == 3);
    CHECK(std::equal(three.begin(), three.end(), full.begin()));
    auto long_naive = vt_apply_prefix_naive(pts, c, 70);
    auto long_fast = vt_apply_prefix_fast(pts, c, 70);
    CHECK(long_naive == long_fast);
    CHECK(std::equal(full.begin(), full.end(), long_naive.begin()));
}

TEST_CASE("series helpers invert and divide correctly") {
    const ZZ q(101);
    modpoly::Poly a{ZZ(3), ZZ(5), ZZ(0), ZZ(7)};
    auto inv = modpoly::series_inv(a, q, 8);
    auto prod = modpoly::mul_trunc(a, inv, q, 8);
    REQUIRE(prod.size() >= 1);
    CHECK(prod[0] == 1);
    for (std::size_t i = 1; i < prod.size(); ++i) CHECK(prod[i] == 0);

    RandomSource rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        std::size_t na = 1 + rng.below(std::uint64_t(200));
        std::size_t nb = 1 + rng.below(std::uint64_t(na));
        modpoly::Poly A = random_residues(rng, na, q);
        modpoly::Poly B = random_residues(rng, nb, q);
        if (B.back() == 0) B.back() = 1;
        auto R = modpoly::rem(A, B, q);
        modpoly::Poly Bt = B;
        modpoly::trim(Bt);
        CHECK(R.size() < std::max<std::size_t>(Bt.size(), 1));
        // A - R must be divisible by B: verify at a handful of points
        auto diff = modpoly::sub(A, R, q);
        for (int pt = 0; pt < 5; ++pt) {
            ZZ x = rng.below(q);
            ZZ bx = 0, dx = 0, pw = 1;
            for (std::size_t i = 0; i < std::max(diff.size(), B.size()); ++i) {
                if (i < B.size()) bx = (bx + B[i] * pw) % q;
                if (i < diff.size()) dx = (dx + diff[i] * pw) % q;
                pw = (pw * x) % q;
            }
            if (bx != 0) {
                // (A-R)/B is a polynomial, so dx must be bx * something; just
                // check dx vanishes whenever bx does via resampling is weak --
                // instead check dx * inv(bx) stays consistent with quotient eval:
                // cheaper equivalent: dx == 0 mod gcd is trivial; accept bx | dx
                // by verifying dx mod bx computable -- skip, rely on rem porperty below
            }
        }
        // stronger: remainder of (A - R) by B is zero
        auto z = modpoly::rem(diff, B, q);
        CHECK(z.empty());
    }
}

TEST_CASE("multipoint evaluation matches direct evaluation") {
    const ZZ q(10007);
    RandomSource rng(55);
    for (int rep = 0; rep < 15; ++rep) {
        std::size_t deg = rng.below(std::uint64_t(150));
        std::size_t npts = 1 + rng.below(std::uint64_t(90));
        modpoly::Poly f = random_residues(rng, deg + 1, q);
        auto w = random_residues(rng, npts, q);
        auto vals = modpoly::multipoint_eval(f, w, q);
        REQUIRE(vals.size() == npts);
        for (std::size_t i = 0; i < npts; ++i) {
            ZZ acc = 0, pw = 1;
            for (const auto& cf : f) {
                acc = (acc + cf * pw) % q;
                pw = (pw * w[i]) % q;
            }
            REQUIRE(vals[i] == acc);
        }
    }
}
