#pragma once

// Output-sensitive products of sparse integer polynomials.
//
// mul_known_support recovers the coefficients of F*G on a known superset of
// its support: evaluate both factors at powers of a root of unity modulo
// several primes q = ap+1, solve one transposed Vandermonde system per
// prime, and Chinese-remainder the images. sparse_mult_zz finds the support
// first. A sumset of the input supports gives the structural candidates, a
// recovery pass with coefficients reduced modulo a vanish prime trims the
// candidates to the true support, and a second pass over just the trimmed
// set recovers the full coefficients. Work is booked to separate buckets so
// the two passes can be compared: on cancellation-heavy inputs nearly all
// the cost sits in the support-finding side.
//
// sparse_mult_ring layers Laurent recentring, Kronecker packing of several
// variables into one, and an optional final reduction mod m on top.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "instrument.hpp"
#include "numtheory.hpp"
#include "polycore.hpp"
#include "rng.hpp"
#include "sumset.hpp"
#include "vander.hpp"

namespace spmul {

// failure budget used by the CLI entry points when none is given
inline constexpr double default_mu = 0x1p-20;

// F and G presented as coefficient lists over one shared sorted support;
// zeros are allowed, which is what lets callers pad the support freely.
struct SupportedPair {
    ExponentSet exps;
    std::vector<ZZ> fcoeffs, gcoeffs;

    SupportedPair(ExponentSet e, std::vector<ZZ> f, std::vector<ZZ> g)
        : exps(std::move(e)), fcoeffs(std::move(f)), gcoeffs(std::move(g)) {
        if (fcoeffs.size() != exps.size() || gcoeffs.size() != exps.size())
            throw std::invalid_argument(
                "SupportedPair: coefficient lists must match the support size");
    }
};

namespace detail {

inline ZZ max_abs(const std::vector<ZZ>& v) {
    ZZ m = 0;
    for (const auto& x : v) {
        ZZ a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

inline bool all_distinct(std::vector<ZZ> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

inline std::vector<ZZ> residues_mod(const std::vector<ZZ>& es, const ZZ& p) {
    std::vector<ZZ> r(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) r[i] = nonneg_rem(es[i], p);
    return r;
}

inline std::vector<ZZ> reduce_coeffs(const std::vector<ZZ>& c, const ZZ& q) {
    std::vector<ZZ> r(c.size());
    instrument::add(c.size() * limbs(q));
    for (std::size_t i = 0; i < c.size(); ++i) r[i] = nonneg_rem(c[i], q);
    return r;
}

} // namespace detail

// Coefficients of FG on the support sp.exps, assuming supp(FG) is contained
// in it; wrong exponents elsewhere make the output unspecified. Fail
// (nullopt) when a usable prime bundle cannot be had after one resampling.
inline std::optional<std::vector<ZZ>> mul_known_support(const SupportedPair& sp, double mu,
                                                        RandomSource& rng) {
    detail::check_mu(mu);
    const std::size_t S = sp.exps.size();
    if (S == 0) return std::vector<ZZ>{};
    const ZZ cf = detail::max_abs(sp.fcoeffs);
    const ZZ cg = detail::max_abs(sp.gcoeffs);
    if (cf == 0 || cg == 0) return std::vector<ZZ>(S, ZZ(0));
    const ZZ C = ZZ(cf * cg * static_cast<unsigned long>(S));
    const ZZ twoC = 2 * C;
    const auto& es = sp.exps.values();
    const ZZ width = es.back() - es.front() + 1;

    for (int attempt = 0; attempt < 2; ++attempt) {
        auto bundle =
            get_prim_roots(width, ZZ(static_cast<unsigned long>(S)), C, mu, rng);
        if (!bundle) return std::nullopt;
        const std::vector<ZZ> res = detail::residues_mod(es, bundle->p);
        if (!detail::all_distinct(res)) continue;

        std::vector<ZZ> used_q;
        std::vector<std::vector<ZZ>> images;
        ZZ prod = 1;
        for (const auto& [q, w] : bundle->pairs) {
            std::vector<ZZ> v(S);
            for (std::size_t i = 0; i < S; ++i) v[i] = powmod(w, res[i], q);
            VandermondePoints pts(q, std::move(v));
            if (!pts.points_distinct()) continue;
            std::vector<ZZ> a = vt_apply(pts, detail::reduce_coeffs(sp.fcoeffs, q));
            std::vector<ZZ> b = vt_apply(pts, detail::reduce_coeffs(sp.gcoeffs, q));
            for (std::size_t j = 0; j < S; ++j) a[j] = mulmod(a[j], b[j], q);
            images.push_back(vt_solve(pts, a));
            used_q.push_back(q);
            prod *= q;
        }
        if (prod < twoC) continue; // not enough residue data to lift; resample

        std::vector<ZZ> out(S);
        for (std::size_t i = 0; i < S; ++i) {
            std::vector<ZZ> r(used_q.size());
            for (std::size_t k = 0; k < used_q.size(); ++k) r[k] = images[k][i];
            out[i] = centered_rem(crt(ResidueSystem(std::move(r), used_q)), prod);
        }
        return out;
    }
    return std::nullopt;
}

namespace detail {

// Coefficient recovery for FG restricted to a trimmed support. The probe
// values come straight from the inputs' own terms, so only the solve is
// sized by the trimmed set; evaluation work stays proportional to the input
// term counts. The two kinds of work go to the stage-1 / stage-2 buckets.
inline std::optional<SparsePoly> recover_trimmed(const std::vector<ZZ>& s2,
                                                 const SparsePoly& F, const SparsePoly& G,
                                                 double mu, RandomSource& rng) {
    const std::size_t S2 = s2.size();
    const ZZ C = ZZ(F.max_norm() * G.max_norm() *
                    static_cast<unsigned long>(std::min(F.nnz(), G.nnz())));
    const ZZ twoC = 2 * C;
    const ZZ width = s2.back() - s2.front() + 1;

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::optional<PrimRootBundle> bundle;
        std::vector<ZZ> fres, gres;
        {
            instrument::BucketScope scope(instrument::Bucket::stage1);
            bundle = get_prim_roots(width, ZZ(static_cast<unsigned long>(S2)), C, mu, rng);
            if (bundle) {
                fres = residues_mod(F.support(), bundle->p);
                gres = residues_mod(G.support(), bundle->p);
            }
        }
        if (!bundle) return std::nullopt;
        const std::vector<ZZ> res = residues_mod(s2, bundle->p);
        if (!all_distinct(res)) continue;

        std::vector<ZZ> used_q;
        std::vector<std::vector<ZZ>> images;
        ZZ prod = 1;
        for (const auto& [q, w] : bundle->pairs) {
            std::vector<ZZ> a, b;
            {
                instrument::BucketScope scope(instrument::Bucket::stage1);
                std::vector<ZZ> vf(F.nnz()), fc(F.nnz());
                for (std::size_t i = 0; i < F.nnz(); ++i) {
                    vf[i] = powmod(w, fres[i], q);
                    fc[i] = nonneg_rem(F.terms()[i].c, q);
                }
                instrument::add(F.nnz() * limbs(q));
                a = vt_apply_prefix(VandermondePoints(q, std::move(vf)), fc, S2);
                std::vector<ZZ> vg(G.nnz()), gc(G.nnz());
                for (std::size_t i = 0; i < G.nnz(); ++i) {
                    vg[i] = powmod(w, gres[i], q);
                    gc[i] = nonneg_rem(G.terms()[i].c, q);
                }
                instrument::add(G.nnz() * limbs(q));
                b = vt_apply_prefix(VandermondePoints(q, std::move(vg)), gc, S2);
            }
            instrument::BucketScope scope(instrument::Bucket::stage2);
            std::vector<ZZ> v(S2);
            for (std::size_t i = 0; i < S2; ++i) v[i] = powmod(w, res[i], q);
            VandermondePoints pts(q, std::move(v));
            if (!pts.points_distinct()) continue;
            for (std::size_t j = 0; j < S2; ++j) a[j] = mulmod(a[j], b[j], q);
            images.push_back(vt_solve(pts, a));
            used_q.push_back(q);
            prod *= q;
        }

        instrument::BucketScope scope(instrument::Bucket::stage2);
        if (prod < twoC) continue;
        std::vector<Term> ts;
        ts.reserve(S2);
        for (std::size_t i = 0; i < S2; ++i) {
            std::vector<ZZ> r(used_q.size());
            for (std::size_t k = 0; k < used_q.size(); ++k) r[k] = images[k][i];
            ts.push_back({centered_rem(crt(ResidueSystem(std::move(r), used_q)), prod), s2[i]});
        }
        return SparsePoly::from_terms(std::move(ts));
    }
    return std::nullopt;
}

} // namespace detail

// FG over the integers, output-sensitive in the true product sparsity.
inline std::optional<SparsePoly> sparse_mult_zz(const SparsePoly& F, const SparsePoly& G,
                                                double mu, RandomSource& rng) {
    detail::check_mu(mu);
    if (F.is_zero() || G.is_zero()) return SparsePoly();

    const ExponentSet suppF = ExponentSet::from_values(F.support());
    const ExponentSet suppG = ExponentSet::from_values(G.support());
    auto s1 = sumset(suppF, suppG, mu / 4.0, rng);
    if (!s1) return std::nullopt;

    const ZZ CH = ZZ(F.max_norm() * G.max_norm() *
                     static_cast<unsigned long>(std::max(F.nnz(), G.nnz())));
    auto pv = get_vanish_prime(ZZ(static_cast<unsigned long>(s1->size())), CH, 1.0,
                               mu / 4.0, rng);
    if (!pv) return std::nullopt;

    // stage 1: product with coefficients reduced mod the vanish prime, over
    // the candidate support padded with the input supports. A true product
    // term cannot vanish mod pv, so the surviving positions are the support.
    const ExponentSet padded = *s1 | suppF | suppG;
    std::vector<ZZ> fc(padded.size(), ZZ(0)), gc(padded.size(), ZZ(0));
    const auto& pv_es = padded.values();
    auto slot = [&pv_es](const ZZ& e) {
        return static_cast<std::size_t>(
            std::lower_bound(pv_es.begin(), pv_es.end(), e) - pv_es.begin());
    };
    for (const auto& t : F.terms()) fc[slot(t.e)] = centered_rem(t.c, *pv);
    for (const auto& t : G.terms()) gc[slot(t.e)] = centered_rem(t.c, *pv);

    std::optional<std::vector<ZZ>> h1;
    {
        instrument::BucketScope scope(instrument::Bucket::stage1);
        h1 = mul_known_support(SupportedPair(padded, std::move(fc), std::move(gc)),
                               mu / 4.0, rng);
    }
    if (!h1) return std::nullopt;

    std::vector<ZZ> s2;
    for (std::size_t i = 0; i < pv_es.size(); ++i)
        if (centered_rem((*h1)[i], *pv) != 0) s2.push_back(pv_es[i]);
    // a product of nonzero integer polynomials is never zero, so an empty
    // survivor set means the trim went wrong
    if (s2.empty()) return std::nullopt;

    return detail::recover_trimmed(s2, F, G, mu / 4.0, rng);
}

namespace detail {

inline SparsePoly shift_exponents(const SparsePoly& f, const ZZ& delta) {
    std::vector<Term> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) ts.push_back({t.c, ZZ(t.e + delta)});
    return SparsePoly::from_terms(std::move(ts));
}

inline MultiPoly shift_vars(const MultiPoly& f, const std::vector<ZZ>& delta) {
    std::vector<MTerm> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) {
        MTerm s{t.c, t.e};
        for (int v = 0; v < f.nvars(); ++v) s.e[v] += delta[v];
        ts.push_back(std::move(s));
    }
    return MultiPoly::from_terms(f.nvars(), std::move(ts));
}

inline SparsePoly reduce_mod(const SparsePoly& f, const ZZ& m) {
    std::vector<Term> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) ts.push_back({centered_rem(t.c, m), t.e});
    return SparsePoly::from_terms(std::move(ts));
}

inline MultiPoly reduce_mod(const MultiPoly& f, const ZZ& m) {
    std::vector<MTerm> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) ts.push_back({centered_rem(t.c, m), t.e});
    return MultiPoly::from_terms(f.nvars(), std::move(ts));
}

} // namespace detail

// Univariate product over ZZ or ZZ_m; Laurent (negative) exponents allowed.
inline std::optional<SparsePoly> sparse_mult_ring(const SparsePoly& F, const SparsePoly& G,
                                                  const std::optional<ZZ>& modulus,
                                                  double mu, RandomSource& rng) {
    if (modulus && *modulus < 1)
        throw std::invalid_argument("sparse_mult_ring: modulus must be positive");
    if (F.is_zero() || G.is_zero()) return SparsePoly();
    const ZZ shF = F.min_exponent(), shG = G.min_exponent();
    auto h = sparse_mult_zz(detail::shift_exponents(F, -shF),
                            detail::shift_exponents(G, -shG), mu, rng);
    if (!h) return std::nullopt;
    SparsePoly out = detail::shift_exponents(*h, shF + shG);
    if (modulus) out = detail::reduce_mod(out, *modulus);
    return out;
}

// Multivariate product by Kronecker substitution: recentre each variable,
// pack them into one with digits that cannot carry, multiply, unpack.
inline std::optional<MultiPoly> sparse_mult_ring(const MultiPoly& F, const MultiPoly& G,
                                                 const std::optional<ZZ>& modulus,
                                                 double mu, RandomSource& rng) {
    if (F.nvars() != G.nvars())
        throw std::invalid_argument("sparse_mult_ring: variable count mismatch");
    if (modulus && *modulus < 1)
        throw std::invalid_argument("sparse_mult_ring: modulus must be positive");
    const int n = F.nvars();
    if (F.is_zero() || G.is_zero()) return MultiPoly(n);

    auto [Fn, shF] = laurent_normalize(F);
    auto [Gn, shG] = laurent_normalize(G);
    std::vector<ZZ> degF(n, ZZ(0)), degG(n, ZZ(0));
    for (const auto& t : Fn.terms())
        for (int v = 0; v < n; ++v)
            if (t.e[v] > degF[v]) degF[v] = t.e[v];
    for (const auto& t : Gn.terms())
        for (int v = 0; v < n; ++v)
            if (t.e[v] > degG[v]) degG[v] = t.e[v];
    ZZ D = 1;
    for (int v = 0; v < n; ++v) D = std::max(D, ZZ(degF[v] + degG[v] + 1));

    // recentre so product digits stay inside the centered digit range [-D, D)
    std::vector<ZZ> cF(n), cG(n);
    for (int v = 0; v < n; ++v) {
        cF[v] = -ZZ(degF[v] / 2);
        cG[v] = -ZZ(degG[v] / 2);
    }
    auto h = sparse_mult_zz(kronecker_pack(detail::shift_vars(Fn, cF), D),
                            kronecker_pack(detail::shift_vars(Gn, cG), D), mu, rng);
    if (!h) return std::nullopt;

    std::vector<ZZ> back(n);
    for (int v = 0; v < n; ++v) back[v] = ZZ(shF[v] + shG[v] - cF[v] - cG[v]);
    MultiPoly out = detail::shift_vars(kronecker_unpack(*h, n, D), back);
    if (modulus) out = detail::reduce_mod(out, *modulus);
    return out;
}

} // namespace spmul
