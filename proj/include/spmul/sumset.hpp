#pragma once

// Sumsets A + B = {a+b} in time softly linear in the output size.
//
// The pipeline hashes elements through a random difference prime p, runs the
// indicator-polynomial product and its exponent-encoded twin through the
// base-case multiplier, and reads each element of the sumset back out of a
// coefficient pair mod ell^2. A doubling loop of cheap cyclic products first
// estimates the output size to within a factor of four so the base-case
// sparsity bound can be set.

#include <cstdint>
#include <optional>
#include <vector>

#include "interp.hpp"
#include "numtheory.hpp"
#include "polycore.hpp"
#include "rng.hpp"

namespace spmul {

// Doubling estimator for the nonzero count of F1*G1 mod x^p - 1. Returns S*
// with S*/4 < #(A+B) <= S* with probability >= 1 - mu. Inconclusive
// iterations (prime hunt came up empty, or the prime overflows a word) are
// simply consumed; their budget is the per-iteration error rate the
// iteration count already absorbs.
inline std::uint64_t estimate_sparsity(const SparsePoly& f1, const SparsePoly& g1,
                                       const ZZ& p, std::uint64_t R, double mu,
                                       RandomSource& rng) {
    detail::check_mu(mu);
    if (R < 2) throw std::invalid_argument("estimate_sparsity: need R >= 2");
    const long iters = detail::ceil_pos(
        std::max(8.0 * std::log(8.0 / mu), std::log2(static_cast<double>(R)) + 1.0));
    const ZZ twop = 2 * p;
    const ZZ m(static_cast<unsigned long>(R) * static_cast<unsigned long>(R));
    std::uint64_t sstar = 2;
    for (long i = 0; i < iters; ++i) {
        auto q = get_diff_prime(ZZ(2 * sstar), twop, 0.5, 0.25, rng);
        if (!q || !mpz_fits_ulong_p(q->get_mpz_t())) continue;
        auto himg = dense_mul_cyclic(f1, g1, q->get_ui(), m);
        if (himg.nnz() > sstar) sstar *= 2;
    }
    return sstar;
}

namespace detail {

// indicator sum_x x^{a rem p}, and its encoded twin sum (a*ell + 1) x^{a rem p}
inline SparsePoly hashed_indicator(const ExponentSet& s, const ZZ& p) {
    std::vector<Term> ts;
    ts.reserve(s.size());
    for (const auto& a : s.values()) ts.push_back({ZZ(1), nonneg_rem(a, p)});
    return SparsePoly::from_terms(std::move(ts));
}

inline SparsePoly hashed_encoded(const ExponentSet& s, const ZZ& p, const ZZ& ell) {
    std::vector<Term> ts;
    ts.reserve(s.size());
    for (const auto& a : s.values()) ts.push_back({a * ell + 1, nonneg_rem(a, p)});
    return SparsePoly::from_terms(std::move(ts));
}

} // namespace detail

// A + B with probability >= 1 - mu; detected inconsistencies return nullopt.
inline std::optional<ExponentSet> sumset(const ExponentSet& A, const ExponentSet& B,
                                         double mu, RandomSource& rng) {
    detail::check_mu(mu);
    if (A.empty() || B.empty())
        throw std::invalid_argument("sumset: operands must be nonempty");
    const std::uint64_t R = A.size() + B.size();
    const ZZ D = std::max(A.width_bound(), B.width_bound());
    const ZZ R2 = ZZ(static_cast<unsigned long>(R)) * static_cast<unsigned long>(R);

    auto pq = get_diff_prime(R2, 4 * D, 1.0, mu / 4.0, rng);
    if (!pq) return std::nullopt;
    const ZZ p = *pq;

    const SparsePoly f1 = detail::hashed_indicator(A, p);
    const SparsePoly g1 = detail::hashed_indicator(B, p);
    const std::uint64_t sstar = estimate_sparsity(f1, g1, p, R, mu / 4.0, rng);

    const ZZ ell = next_prime_at_least(8 * D);
    const ZZ ell2 = ell * ell;
    const ZZ sbound(static_cast<unsigned long>(R + 2 * sstar));

    auto h1 = basecase_multiply(f1, g1, sbound, mu / 4.0, rng);
    if (!h1) return std::nullopt;
    auto h2 = basecase_multiply(detail::hashed_encoded(A, p, ell),
                                detail::hashed_encoded(B, p, ell), sbound, mu / 4.0, rng);
    if (!h2) return std::nullopt;

    const SparsePoly r1 = sparse_cyclic_rem(*h1, p, ell2);
    const SparsePoly r2 = sparse_cyclic_rem(*h2, p, ell2);
    if (r1.support() != r2.support()) return std::nullopt;

    // slot pair (c, c') with c pairs of colliding summands decodes their
    // common sum e from c' = c(e*ell + 1) mod ell^2
    const ZZ sum_bound = 2 * (D - 1);
    std::vector<ZZ> out;
    out.reserve(r1.nnz());
    for (std::size_t i = 0; i < r1.nnz(); ++i) {
        const ZZ& c = r1.terms()[i].c;
        const ZZ& cp = r2.terms()[i].c;
        if (c >= ell) return std::nullopt;
        ZZ diff = nonneg_rem(cp - c, ell2);
        if (!mpz_divisible_p(diff.get_mpz_t(), ell.get_mpz_t())) return std::nullopt;
        ZZ e = centered_rem(mulmod(diff / ell, invmod(c, ell), ell), ell);
        if (c == 1 || mpz_divisible_p(cp.get_mpz_t(), c.get_mpz_t())) {
            // the integer-ratio reading must agree wherever it applies
            ZZ ratio = cp / c - 1;
            if (mpz_divisible_p(ratio.get_mpz_t(), ell.get_mpz_t()) &&
                centered_rem(ratio / ell, ell) != e)
                return std::nullopt;
        }
        if (abs(e) > sum_bound) return std::nullopt;
        if (nonneg_rem(e, p) != r1.terms()[i].e) return std::nullopt;
        out.push_back(std::move(e));
    }

    ExponentSet result = ExponentSet::from_values(std::move(out));
    // every correct sumset obeys these unconditionally
    const std::uint64_t S = result.size();
    if (S != r1.nnz()) return std::nullopt;
    if (S + 1 < R) return std::nullopt;
    const ZZ cap = std::min(ZZ(ZZ(static_cast<unsigned long>(A.size())) *
                               static_cast<unsigned long>(B.size())),
                            R2);
    if (ZZ(static_cast<unsigned long>(S)) > cap) return std::nullopt;
    if (result.values().front() < A.values().front() + B.values().front())
        return std::nullopt;
    if (result.values().back() > A.values().back() + B.values().back())
        return std::nullopt;
    return result;
}

} // namespace spmul
