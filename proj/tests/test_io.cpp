#include <catch2/catch_amalgamated.hpp>

#include <spmul/io.hpp>
#include <spmul/rng.hpp>
#include <sstream>

using namespace spmul;

TEST_CASE("polynomial round trip through the text format") {
    auto f = MultiPoly::from_terms(2, {{ZZ(-3), {ZZ(1), ZZ(-7)}},
                                       {ZZ("123456789012345678901234567890"), {ZZ(0), ZZ(2)}}});
    std::stringstream ss;
    write_poly(ss, f);
    CHECK(read_poly(ss) == f);
}

TEST_CASE("polynomial format is as documented") {
    auto f = MultiPoly::from_terms(1, {{ZZ(2), {ZZ(3)}}, {ZZ(-1), {ZZ(0)}}});
    std::stringstream ss;
    write_poly(ss, f);
    CHECK(ss.str() == "sp 1 1\n-1 0\n2 3\n");
}

TEST_CASE("parser ignores comments and blanks, rejects junk") {
    std::stringstream good("# product file\nsp 1 1\n\n2 3\n# done\n-1 0\n");
    auto f = read_poly(good);
    CHECK(f == MultiPoly::from_terms(1, {{ZZ(2), {ZZ(3)}}, {ZZ(-1), {ZZ(0)}}}));

    std::stringstream bad_hdr("xp 1 1\n");
    CHECK_THROWS_AS(read_poly(bad_hdr), ParseError);
    std::stringstream bad_ver("sp 2 1\n");
    CHECK_THROWS_AS(read_poly(bad_ver), ParseError);
    std::stringstream short_term("sp 1 2\n1 0\n");
    CHECK_THROWS_AS(read_poly(short_term), ParseError);
    std::stringstream long_term("sp 1 1\n1 0 5\n");
    CHECK_THROWS_AS(read_poly(long_term), ParseError);
    std::stringstream junk("sp 1 1\n1 abc\n");
    CHECK_THROWS_AS(read_poly(junk), ParseError);
}

TEST_CASE("parser merges duplicate terms into canonical form") {
    std::stringstream ss("sp 1 1\n1 4\n2 4\n0 9\n");
    auto f = read_poly(ss);
    CHECK(f == MultiPoly::from_terms(1, {{ZZ(3), {ZZ(4)}}}));
}

TEST_CASE("set round trip and format") {
    auto s = ExponentSet::from_values({ZZ(-12), ZZ(0), ZZ("99999999999999999999")});
    std::stringstream ss;
    write_set(ss, s);
    CHECK(ss.str() == "-12\n0\n99999999999999999999\n");
    CHECK(read_set(ss) == s);

    std::stringstream cm("# a set\n5\n\n-3\n5\n");
    CHECK(read_set(cm) == ExponentSet::from_values({ZZ(5), ZZ(-3)}));
    std::stringstream bad("5 6\n");
    CHECK_THROWS_AS(read_set(bad), ParseError);
}

TEST_CASE("random polynomials survive the round trip") {
    RandomSource rng(2718);
    for (int t = 0; t < 25; ++t) {
        int nv = 1 + (int)rng.below(std::uint64_t(3));
        std::vector<MTerm> ts;
        int n = (int)rng.below(std::uint64_t(20));
        for (int i = 0; i < n; ++i) {
            MTerm m{rng.range(ZZ(-1000), ZZ(1000)), {}};
            for (int v = 0; v < nv; ++v) m.e.push_back(rng.range(ZZ(-100000), ZZ(100000)));
            ts.push_back(std::move(m));
        }
        auto f = MultiPoly::from_terms(nv, std::move(ts));
        std::stringstream ss;
        write_poly(ss, f);
        CHECK(read_poly(ss) == f);
    }
}

TEST_CASE("univariate bridges") {
    auto f = SparsePoly::from_terms({{ZZ(2), ZZ(-1)}, {ZZ(3), ZZ(4)}});
    CHECK(to_univariate(to_multi(f)) == f);
    CHECK_THROWS_AS(to_univariate(MultiPoly(2)), std::invalid_argument);
}
