#pragma once

// Brute-force reference implementations. They ship with the library (not the
// test tree) so the CLI's --verify flag and the benchmark harness can call
// them; every randomized routine's statistical acceptance is defined
// relative to these.
//
// The naive Vandermonde twins (vt_apply_naive, vt_solve_naive) live in
// vander.hpp next to the fast paths they anchor; including this header pulls
// them in.

#include <map>
#include <vector>

#include "polycore.hpp"
#include "vander.hpp"

namespace spmul {

// all-pairs product with term merge; quadratic, total, exact
inline SparsePoly naive_mul(const SparsePoly& f, const SparsePoly& g) {
    std::map<ZZ, ZZ> acc;
    std::uint64_t words = 0;
    for (const auto& tf : f.terms())
        for (const auto& tg : g.terms()) {
            ZZ p = tf.c * tg.c;
            words += detail::limbs(p) + 2;
            acc[tf.e + tg.e] += p;
        }
    instrument::add(words);
    std::vector<Term> ts;
    for (auto& [e, c] : acc)
        if (c != 0) ts.push_back({std::move(c), e});
    return SparsePoly::from_terms(std::move(ts));
}

inline MultiPoly naive_mul(const MultiPoly& f, const MultiPoly& g) {
    if (f.nvars() != g.nvars())
        throw std::invalid_argument("naive_mul: variable count mismatch");
    std::map<std::vector<ZZ>, ZZ> acc;
    std::uint64_t words = 0;
    for (const auto& tf : f.terms())
        for (const auto& tg : g.terms()) {
            std::vector<ZZ> e(f.nvars());
            for (int v = 0; v < f.nvars(); ++v) e[v] = tf.e[v] + tg.e[v];
            ZZ p = tf.c * tg.c;
            words += detail::limbs(p) + 2;
            acc[std::move(e)] += p;
        }
    instrument::add(words);
    std::vector<MTerm> ts;
    for (auto& [e, c] : acc)
        if (c != 0) ts.push_back({std::move(c), e});
    return MultiPoly::from_terms(f.nvars(), std::move(ts));
}

// exact double-loop sumset, sorted and deduplicated
inline ExponentSet naive_sumset(const ExponentSet& A, const ExponentSet& B) {
    std::vector<ZZ> out;
    out.reserve(A.size() * B.size());
    for (const auto& a : A.values())
        for (const auto& b : B.values()) out.push_back(a + b);
    instrument::add(A.size() * B.size());
    return ExponentSet::from_values(std::move(out));
}

} // namespace spmul
