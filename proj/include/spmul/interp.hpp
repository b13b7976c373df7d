#pragma once

// Cyclic product images and the base-case sparse product.
//
// product_image answers the query H(alpha z) mod (q, z^r - 1) for H = FG
// without ever forming H. encoded_product_image pairs the plain image mod
// ell^2 with the image of the exponent-encoded inputs (coefficient c of x^e
// becomes c(e ell + 1)); for an uncollided slot the two values determine
// (c, e) exactly. basecase_multiply peels FG out of such image pairs at
// randomly drawn cyclic lengths, accepting a term only when two independent
// lengths decode it identically, and certifies the result against one
// final separating length before returning.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "numtheory.hpp"
#include "polycore.hpp"
#include "rng.hpp"

namespace spmul {

// F(alpha x) mod (q, x^r - 1): term c*x^e lands at slot e mod r with value
// c*alpha^e mod q. Exponents must be nonnegative.
inline DenseCyclicPoly scale_arg_reduce(const SparsePoly& f, const ZZ& alpha,
                                        std::uint64_t r, const ZZ& q) {
    DenseCyclicPoly out(r, q);
    const ZZ rz(static_cast<unsigned long>(r));
    const ZZ a = nonneg_rem(alpha, q);
    for (const auto& t : f.terms()) {
        if (t.e < 0) throw std::invalid_argument("scale_arg_reduce: negative exponent");
        ZZ v = mulmod(nonneg_rem(t.c, q), powmod(a, t.e, q), q);
        out.add_at(nonneg_rem(t.e, rz).get_ui(), v);
    }
    return out;
}

// (FG)(alpha x) mod (q, x^r - 1), computed from the two scaled input images.
inline DenseCyclicPoly product_image(const SparsePoly& f, const SparsePoly& g,
                                     const ZZ& alpha, std::uint64_t r, const ZZ& q) {
    return dense_mul_cyclic(scale_arg_reduce(f, alpha, r, q),
                            scale_arg_reduce(g, alpha, r, q));
}

namespace detail {

// c*x^e -> c(e ell + 1)*x^e
inline SparsePoly shift_encode(const SparsePoly& f, const ZZ& ell) {
    instrument::add(f.nnz() * (2 * limbs(ell) + 1));
    std::vector<Term> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) ts.push_back({t.c * (t.e * ell + 1), t.e});
    return SparsePoly::from_terms(std::move(ts));
}

// Inverts the slot pair (c mod ell^2, c(e ell + 1) mod ell^2) of a slot
// holding a single term; garbage slots mostly fail the divisibility check
// here and the range checks at the caller.
inline std::optional<std::pair<ZZ, ZZ>> decode_slot(const ZZ& plain, const ZZ& shifted,
                                                    const ZZ& ell, const ZZ& ell2) {
    ZZ c = centered_rem(plain, ell2);
    if (c == 0) return std::nullopt;
    ZZ cm = nonneg_rem(c, ell);
    if (cm == 0) return std::nullopt;
    ZZ diff = nonneg_rem(shifted - plain, ell2);
    if (!mpz_divisible_p(diff.get_mpz_t(), ell.get_mpz_t())) return std::nullopt;
    ZZ e = mulmod(diff / ell, invmod(cm, ell), ell);
    return std::make_pair(std::move(c), std::move(e));
}

} // namespace detail

// Plain and exponent-encoded images of FG mod (ell^2, x^r - 1).
inline std::pair<DenseCyclicPoly, DenseCyclicPoly>
encoded_product_image(const SparsePoly& f, const SparsePoly& g, const ZZ& ell,
                      std::uint64_t r) {
    const ZZ ell2 = ell * ell;
    return {dense_mul_cyclic(f, g, r, ell2),
            dense_mul_cyclic(detail::shift_encode(f, ell),
                             detail::shift_encode(g, ell), r, ell2)};
}

namespace detail {

// Candidate terms of FG - h read off the residual image pair at length r,
// keyed by exponent. Sets *residual_zero (when asked) and returns nothing if
// the plain residual vanishes identically.
inline std::map<ZZ, ZZ> residual_candidates(const SparsePoly& f, const SparsePoly& g,
                                            const SparsePoly& h, const ZZ& ell,
                                            const ZZ& ell2, std::uint64_t r,
                                            const ZZ& deg_bound, const ZZ& coeff_bound,
                                            bool* residual_zero) {
    auto [plain, shifted] = encoded_product_image(f, g, ell, r);
    reduce_cyclic(h, r, ell2).for_each_nonzero(
        [&](std::uint64_t i, const ZZ& c) { plain.add_at(i, -c); });
    reduce_cyclic(shift_encode(h, ell), r, ell2).for_each_nonzero(
        [&](std::uint64_t i, const ZZ& c) { shifted.add_at(i, -c); });
    if (residual_zero) {
        *residual_zero = plain.is_zero();
        if (*residual_zero) return {};
    }
    std::map<ZZ, ZZ> out;
    const ZZ rz(static_cast<unsigned long>(r));
    plain.for_each_nonzero([&](std::uint64_t i, const ZZ& pv) {
        auto dec = decode_slot(pv, shifted.get(i), ell, ell2);
        if (!dec) return;
        auto& [c, e] = *dec;
        if (abs(c) > coeff_bound) return;
        if (e >= deg_bound) return;
        if (nonneg_rem(e, rz).get_ui() != i) return;
        out.emplace(std::move(e), std::move(c));
    });
    return out;
}

// Exact comparison of the images of FG and h mod (ell2, x^rstar - 1); rstar
// may far exceed any dense length, so both sides stay sparse. The product
// side is accumulated pairwise (the callers' input sparsities keep this
// cheap relative to the peeling itself).
inline bool verify_image(const SparsePoly& f, const SparsePoly& g, const SparsePoly& h,
                         const ZZ& ell2, const ZZ& rstar) {
    const std::uint64_t L = limbs(ell2);
    instrument::add(f.nnz() * g.nnz() * (2 * L * L + 2 * L));
    std::map<ZZ, ZZ> acc;
    for (const auto& tf : f.terms())
        for (const auto& tg : g.terms())
            acc[nonneg_rem(tf.e + tg.e, rstar)] += tf.c * tg.c;
    std::vector<Term> img;
    for (auto& [e, c] : acc) {
        ZZ v = nonneg_rem(c, ell2);
        if (v != 0) img.push_back({std::move(v), e});
    }
    return SparsePoly::from_terms(std::move(img)) == sparse_cyclic_rem(h, rstar, ell2);
}

} // namespace detail

// FG over the integers for nonnegative-exponent inputs, given a bound
// S >= #F + #G + #(FG). Randomized: with probability >= 1 - mu the result is
// exact; detected trouble (non-convergence, certification mismatch, prime
// hunts coming up empty) returns nullopt rather than a wrong product.
inline std::optional<SparsePoly> basecase_multiply(const SparsePoly& f, const SparsePoly& g,
                                                   const ZZ& S, double mu,
                                                   RandomSource& rng) {
    detail::check_mu(mu);
    if (f.is_zero() || g.is_zero()) return SparsePoly();
    if (f.min_exponent() < 0 || g.min_exponent() < 0)
        throw std::invalid_argument("basecase_multiply: negative exponent");
    if (S < ZZ(static_cast<unsigned long>(f.nnz() + g.nnz() + 1)))
        throw std::invalid_argument("basecase_multiply: sparsity bound below #F+#G+1");

    const ZZ deg_bound = f.max_exponent() + g.max_exponent() + 1;
    const ZZ nf = f.max_norm(), ng = g.max_norm();
    // true coefficients of FG (and of any residual against a filtered h) stay
    // within twice the height bound min(#F,#G)*||F||*||G||
    const ZZ coeff_bound = 2 * ZZ(static_cast<unsigned long>(std::min(f.nnz(), g.nnz()))) * nf * ng;
    const double lam_ell =
        std::max({21.0, 4.0 * mpz_get_d(deg_bound.get_mpz_t()),
                  4.0 * mpz_get_d(ZZ(S * nf * ng).get_mpz_t())});
    auto ellq = get_prime(lam_ell, mu / 4.0, rng);
    if (!ellq) return std::nullopt;
    const ZZ ell = *ellq;
    const ZZ ell2 = ell * ell;

    const long cap = detail::ceil_pos(std::log2(mpz_get_d(S.get_mpz_t())) + 1.0) *
                     detail::ceil_pos(8.0 * std::log(4.0 / mu));
    const ZZ twoS = 2 * S;

    SparsePoly h;
    bool converged = false;
    for (long round = 0; round < cap && !converged; ++round) {
        // a failed hunt just forfeits the round; its 1/4 budget is part of
        // the per-round error rate the cap already absorbs
        auto r1q = get_diff_prime(twoS, deg_bound, 0.5, 0.25, rng);
        if (!r1q || !mpz_fits_ulong_p(r1q->get_mpz_t())) continue;
        const std::uint64_t r1 = r1q->get_ui();

        auto cand1 = detail::residual_candidates(f, g, h, ell, ell2, r1, deg_bound,
                                                 coeff_bound, &converged);
        if (converged) break;

        std::vector<Term> accepted;
        if (ZZ(static_cast<unsigned long>(r1)) >= deg_bound) {
            // the reduction cannot collide at all, so every decoded slot is a
            // true residual term (and tiny degree ranges may hold only one
            // prime, making a distinct second length impossible)
            for (const auto& [e, c] : cand1) accepted.push_back({c, e});
        } else {
            std::uint64_t r2 = 0;
            for (int tries = 0; tries < 16 && r2 == 0; ++tries) {
                auto r2q = get_diff_prime(twoS, deg_bound, 0.5, 0.25, rng);
                if (r2q && mpz_fits_ulong_p(r2q->get_mpz_t()) && r2q->get_ui() != r1)
                    r2 = r2q->get_ui();
            }
            if (r2 == 0) continue;
            auto cand2 = detail::residual_candidates(f, g, h, ell, ell2, r2, deg_bound,
                                                     coeff_bound, nullptr);
            for (const auto& [e, c] : cand1) {
                auto it = cand2.find(e);
                if (it != cand2.end() && it->second == c) accepted.push_back({c, e});
            }
        }
        if (!accepted.empty()) h = h + SparsePoly::from_terms(std::move(accepted));
    }
    if (!converged) return std::nullopt;

    auto rstar = get_diff_prime(twoS, deg_bound, 1.0, mu / 4.0, rng);
    if (!rstar) return std::nullopt;
    if (!detail::verify_image(f, g, h, ell2, *rstar)) return std::nullopt;
    return h;
}

} // namespace spmul
