#pragma once

// Transposed Vandermonde application and inversion over a prime field.
//
// vt_apply computes a_i = sum_j c_j v_j^i (power projections); vt_solve is
// its exact inverse for pairwise-distinct points. Both exist twice: a direct
// quadratic/cubic form (the oracle, and the default below S <= 32) and a
// softly-linear form built from a subproduct tree, truncated power series
// inversion, and multipoint evaluation. The two are bit-identical.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "instrument.hpp"
#include "numtheory.hpp"

namespace spmul {

struct NotInvertible : std::runtime_error {
    NotInvertible() : std::runtime_error("Vandermonde system has coincident points") {}
};

struct VandermondePoints {
    ZZ q;              // prime modulus
    std::vector<ZZ> v; // evaluation points, residues in [0, q)

    VandermondePoints(ZZ modulus, std::vector<ZZ> points)
        : q(std::move(modulus)), v(std::move(points)) {
        if (q < 2) throw std::invalid_argument("VandermondePoints: modulus must be >= 2");
        for (const auto& p : v)
            if (p < 0 || p >= q)
                throw std::invalid_argument("VandermondePoints: point outside [0, q)");
    }

    std::size_t size() const { return v.size(); }

    bool points_distinct() const {
        std::vector<ZZ> s = v;
        std::sort(s.begin(), s.end());
        return std::adjacent_find(s.begin(), s.end()) == s.end();
    }
};

inline constexpr std::size_t vt_fast_threshold = 32;

// ------------------------------------------------- dense series arithmetic

// Polynomials mod q as coefficient vectors, ascending, no trailing-zero
// guarantees (callers track lengths).
namespace modpoly {

using Poly = std::vector<ZZ>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly add(const Poly& a, const Poly& b, const ZZ& q) {
    Poly r(std::max(a.size(), b.size()));
    instrument::add(r.size() * detail::limbs(q));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
        if (r[i] >= q) r[i] -= q;
    }
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, const ZZ& q) {
    Poly r(std::max(a.size(), b.size()));
    instrument::add(r.size() * detail::limbs(q));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
        if (r[i] < 0) r[i] += q;
    }
    return r;
}

namespace detail_mp {

inline constexpr std::size_t karatsuba_threshold = 32;

inline void school_mul_acc(Poly& out, std::size_t off, const ZZ* a, std::size_t na,
                           const ZZ* b, std::size_t nb, const ZZ& q) {
    instrument::add(na * nb * (2 * spmul::detail::limbs(q) * spmul::detail::limbs(q) +
                              2 * spmul::detail::limbs(q)));
    ZZ t;
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < nb; ++j) {
            if (b[j] == 0) continue;
            t = a[i] * b[j];
            ZZ& slot = out[off + i + j];
            slot += t;
            if (mpz_size(slot.get_mpz_t()) > 2 * spmul::detail::limbs(q) + 1)
                mpz_mod(slot.get_mpz_t(), slot.get_mpz_t(), q.get_mpz_t());
        }
    }
}

// Karatsuba on raw spans, accumulating into out at offset.
inline void kara_mul_acc(Poly& out, std::size_t off, const ZZ* a, std::size_t na,
                         const ZZ* b, std::size_t nb, const ZZ& q) {
    if (na == 0 || nb == 0) return;
    if (std::min(na, nb) <= karatsuba_threshold) {
        school_mul_acc(out, off, a, na, b, nb, q);
        return;
    }
    const std::size_t h = std::max(na, nb) / 2;
    if (na <= h) {
        // b is much longer: split b
        kara_mul_acc(out, off, a, na, b, h, q);
        kara_mul_acc(out, off + h, a, na, b + h, nb - h, q);
        return;
    }
    if (nb <= h) {
        kara_mul_acc(out, off, a, h, b, nb, q);
        kara_mul_acc(out, off + h, a + h, na - h, b, nb, q);
        return;
    }
    // classic three-products split at h
    const std::size_t na1 = na - h, nb1 = nb - h;
    Poly z0(2 * h - 1, ZZ(0)), z2(na1 + nb1 - 1, ZZ(0));
    kara_mul_acc(z0, 0, a, h, b, h, q);
    kara_mul_acc(z2, 0, a + h, na1, b + h, nb1, q);
    Poly as(std::max(h, na1), ZZ(0)), bs(std::max(h, nb1), ZZ(0));
    instrument::add((as.size() + bs.size()) * spmul::detail::limbs(q));
    for (std::size_t i = 0; i < h; ++i) as[i] = a[i];
    for (std::size_t i = 0; i < na1; ++i) {
        as[i] += a[h + i];
        if (as[i] >= q) as[i] -= q;
    }
    for (std::size_t i = 0; i < h; ++i) bs[i] = b[i];
    for (std::size_t i = 0; i < nb1; ++i) {
        bs[i] += b[h + i];
        if (bs[i] >= q) bs[i] -= q;
    }
    Poly z1(as.size() + bs.size() - 1, ZZ(0));
    kara_mul_acc(z1, 0, as.data(), as.size(), bs.data(), bs.size(), q);
    instrument::add((z0.size() + z1.size() + z2.size()) * spmul::detail::limbs(q));
    for (std::size_t i = 0; i < z1.size(); ++i) {
        ZZ& s = out[off + h + i];
        s += z1[i];
        if (i < z0.size()) s -= z0[i];
        if (i < z2.size()) s -= z2[i];
    }
    for (std::size_t i = 0; i < z0.size(); ++i) out[off + i] += z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[off + 2 * h + i] += z2[i];
}

} // namespace detail_mp

inline Poly mul(const Poly& a, const Poly& b, const ZZ& q) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, ZZ(0));
    detail_mp::kara_mul_acc(out, 0, a.data(), a.size(), b.data(), b.size(), q);
    for (auto& c : out) {
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), q.get_mpz_t());
    }
    instrument::add(out.size() * spmul::detail::limbs(q));
    return out;
}

inline Poly mul_trunc(const Poly& a, const Poly& b, const ZZ& q, std::size_t n) {
    Poly r = mul(a, b, q);
    if (r.size() > n) r.resize(n);
    return r;
}

// inverse of a mod z^n (requires a[0] invertible), Newton iteration
inline Poly series_inv(const Poly& a, const ZZ& q, std::size_t n) {
    if (a.empty() || a[0] == 0)
        throw std::invalid_argument("series_inv: constant term not invertible");
    Poly b{invmod(a[0], q)};
    std::size_t k = 1;
    while (k < n) {
        k = std::min(2 * k, n);
        // b <- b(2 - a b) mod z^k
        Poly ab = mul_trunc(Poly(a.begin(), a.begin() + std::min(a.size(), k)), b, q, k);
        Poly two_minus(k, ZZ(0));
        instrument::add(k * spmul::detail::limbs(q));
        for (std::size_t i = 0; i < ab.size(); ++i) two_minus[i] = q - ab[i];
        two_minus[0] += 2;
        if (two_minus[0] >= q) two_minus[0] -= q;
        b = mul_trunc(b, two_minus, q, k);
    }
    b.resize(n, ZZ(0));
    return b;
}

// remainder a mod b; schoolbook below a size cutoff, reverse/Newton above
inline Poly rem(Poly a, Poly b, const ZZ& q) {
    trim(a);
    trim(b);
    if (b.empty()) throw std::invalid_argument("rem: division by zero polynomial");
    if (a.size() < b.size()) return a;
    const std::size_t qn = a.size() - b.size() + 1;
    if (qn <= 64 || b.size() <= 16) {
        // schoolbook long division
        instrument::add(qn * b.size() *
                        (2 * spmul::detail::limbs(q) * spmul::detail::limbs(q) + 2));
        const ZZ lead_inv = invmod(b.back(), q);
        for (std::size_t i = a.size(); i-- >= b.size();) {
            ZZ f = mulmod(a[i], lead_inv, q);
            if (f != 0) {
                for (std::size_t j = 0; j < b.size(); ++j) {
                    ZZ& s = a[i - b.size() + 1 + j];
                    s -= f * b[j];
                    mpz_mod(s.get_mpz_t(), s.get_mpz_t(), q.get_mpz_t());
                }
            }
        }
        a.resize(b.size() - 1);
        trim(a);
        return a;
    }
    // fast division: quotient = rev(a) * series_inv(rev(b)) mod z^qn, reversed
    Poly ra(a.rbegin(), a.rend());
    Poly rb(b.rbegin(), b.rend());
    ra.resize(std::min(ra.size(), qn));
    Poly rq = mul_trunc(ra, series_inv(rb, q, qn), q, qn);
    Poly quo(rq.rbegin(), rq.rend());
    Poly bq = mul(b, quo, q);
    Poly r = sub(a, bq, q);
    r.resize(b.size() - 1);
    trim(r);
    return r;
}

inline Poly derivative(const Poly& a, const ZZ& q) {
    if (a.size() <= 1) return {};
    Poly d(a.size() - 1);
    instrument::add(d.size() * spmul::detail::limbs(q));
    for (std::size_t i = 1; i < a.size(); ++i)
        d[i - 1] = mulmod(a[i], ZZ(static_cast<unsigned long>(i)), q);
    return d;
}

// subproduct tree of (z - w_j); level 0 = leaves
struct SubproductTree {
    std::vector<std::vector<Poly>> levels;
};

inline SubproductTree build_tree(const std::vector<ZZ>& w, const ZZ& q) {
    SubproductTree t;
    std::vector<Poly> cur;
    cur.reserve(w.size());
    for (const auto& x : w) cur.push_back(Poly{x == 0 ? ZZ(0) : q - x, ZZ(1)});
    t.levels.push_back(cur);
    while (t.levels.back().size() > 1) {
        const auto& prev = t.levels.back();
        std::vector<Poly> next;
        next.reserve((prev.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < prev.size(); i += 2)
            next.push_back(mul(prev[i], prev[i + 1], q));
        if (prev.size() % 2) next.push_back(prev.back());
        t.levels.push_back(std::move(next));
    }
    return t;
}

// evaluates f at every w_j by remaindering down the tree
inline std::vector<ZZ> multipoint_eval(const Poly& f, const std::vector<ZZ>& w, const ZZ& q) {
    if (w.empty()) return {};
    SubproductTree t = build_tree(w, q);
    std::vector<Poly> cur{rem(f, t.levels.back()[0], q)};
    for (std::size_t lvl = t.levels.size() - 1; lvl-- > 0;) {
        std::vector<Poly> next(t.levels[lvl].size());
        // a carried odd-tail node equals its parent, and remaindering by it
        // is then the identity, so uniform i/2 indexing is safe
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = rem(cur[i / 2], t.levels[lvl][i], q);
        cur = std::move(next);
    }
    std::vector<ZZ> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = cur[i].empty() ? ZZ(0) : cur[i][0];
    return out;
}

} // namespace modpoly

// --------------------------------------------------------------- naive twins

// direct power-sum accumulation, n output rows
inline std::vector<ZZ> vt_apply_prefix_naive(const VandermondePoints& pts,
                                             const std::vector<ZZ>& c, std::size_t n) {
    if (c.size() != pts.size())
        throw std::invalid_argument("vt_apply: coefficient count must match point count");
    std::vector<ZZ> pw(pts.size(), ZZ(1));
    std::vector<ZZ> out(n, ZZ(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i > 0) pw[j] = mulmod(pw[j], pts.v[j], pts.q);
            out[i] += mulmod(nonneg_rem(c[j], pts.q), pw[j], pts.q);
        }
        out[i] = nonneg_rem(out[i], pts.q);
    }
    return out;
}

inline std::vector<ZZ> vt_apply_naive(const VandermondePoints& pts, const std::vector<ZZ>& c) {
    return vt_apply_prefix_naive(pts, c, pts.size());
}

// Gaussian elimination on the transposed Vandermonde matrix
inline std::vector<ZZ> vt_solve_naive(const VandermondePoints& pts, const std::vector<ZZ>& a) {
    const std::size_t S = pts.size();
    if (a.size() != S)
        throw std::invalid_argument("vt_solve: vector length must match point count");
    if (!pts.points_distinct()) throw NotInvertible();
    if (S == 0) return {};
    // M[i][j] = v_j^i
    std::vector<std::vector<ZZ>> M(S, std::vector<ZZ>(S + 1));
    for (std::size_t j = 0; j < S; ++j) M[0][j] = ZZ(1);
    for (std::size_t i = 1; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j) M[i][j] = mulmod(M[i - 1][j], pts.v[j], pts.q);
    for (std::size_t i = 0; i < S; ++i) M[i][S] = nonneg_rem(a[i], pts.q);

    for (std::size_t col = 0; col < S; ++col) {
        std::size_t piv = col;
        while (piv < S && M[piv][col] == 0) ++piv;
        if (piv == S) throw NotInvertible();
        std::swap(M[piv], M[col]);
        const ZZ inv = invmod(M[col][col], pts.q);
        for (std::size_t k = col; k <= S; ++k) M[col][k] = mulmod(M[col][k], inv, pts.q);
        for (std::size_t row = 0; row < S; ++row) {
            if (row == col || M[row][col] == 0) continue;
            const ZZ f = M[row][col];
            for (std::size_t k = col; k <= S; ++k) {
                M[row][k] -= f * M[col][k];
                mpz_mod(M[row][k].get_mpz_t(), M[row][k].get_mpz_t(), pts.q.get_mpz_t());
            }
        }
    }
    std::vector<ZZ> x(S);
    for (std::size_t i = 0; i < S; ++i) x[i] = M[i][S];
    return x;
}

// ---------------------------------------------------------------- fast paths

namespace detail {

// sum of c_j / (1 - v_j z) as one reduced fraction via a balanced tree
inline std::pair<modpoly::Poly, modpoly::Poly>
fraction_tree(const VandermondePoints& pts, const std::vector<ZZ>& c,
              std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        modpoly::Poly num{nonneg_rem(c[lo], pts.q)};
        modpoly::Poly den{ZZ(1), pts.v[lo] == 0 ? ZZ(0) : pts.q - pts.v[lo]};
        return {std::move(num), std::move(den)};
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    auto [n1, d1] = fraction_tree(pts, c, lo, mid);
    auto [n2, d2] = fraction_tree(pts, c, mid, hi);
    modpoly::Poly num = modpoly::add(modpoly::mul(n1, d2, pts.q),
                                     modpoly::mul(n2, d1, pts.q), pts.q);
    return {std::move(num), modpoly::mul(d1, d2, pts.q)};
}

} // namespace detail

inline std::vector<ZZ> vt_apply_prefix_fast(const VandermondePoints& pts,
                                            const std::vector<ZZ>& c, std::size_t n) {
    if (c.size() != pts.size())
        throw std::invalid_argument("vt_apply: coefficient count must match point count");
    if (pts.size() == 0 || n == 0) return std::vector<ZZ>(n, ZZ(0));
    auto [num, den] = detail::fraction_tree(pts, c, 0, pts.size());
    modpoly::Poly inv = modpoly::series_inv(den, pts.q, n);
    modpoly::Poly res = modpoly::mul_trunc(num, inv, pts.q, n);
    res.resize(n, ZZ(0));
    return res;
}

inline std::vector<ZZ> vt_apply_fast(const VandermondePoints& pts, const std::vector<ZZ>& c) {
    return vt_apply_prefix_fast(pts, c, pts.size());
}

inline std::vector<ZZ> vt_solve_fast(const VandermondePoints& pts, const std::vector<ZZ>& a) {
    const std::size_t S = pts.size();
    if (a.size() != S)
        throw std::invalid_argument("vt_solve: vector length must match point count");
    if (!pts.points_distinct()) throw NotInvertible();
    if (S == 0) return {};

    // a zero point contributes only to row 0; peel it off and solve the
    // nonzero-point system of size S-1 on rows 1..S-1
    std::size_t zero_at = S;
    for (std::size_t j = 0; j < S; ++j)
        if (pts.v[j] == 0) zero_at = j;
    if (zero_at != S) {
        std::vector<ZZ> vv;
        for (std::size_t j = 0; j < S; ++j)
            if (j != zero_at) vv.push_back(pts.v[j]);
        std::vector<ZZ> aa(a.begin() + 1, a.end());
        VandermondePoints sub(pts.q, std::move(vv));
        std::vector<ZZ> d = S == 1 ? std::vector<ZZ>{} : vt_solve_fast(sub, aa);
        std::vector<ZZ> out(S);
        ZZ head = nonneg_rem(a[0], pts.q);
        std::size_t k = 0;
        for (std::size_t j = 0; j < S; ++j) {
            if (j == zero_at) continue;
            out[j] = mulmod(d[k], invmod(sub.v[k], pts.q), pts.q);
            head -= out[j];
            ++k;
        }
        out[zero_at] = nonneg_rem(head, pts.q);
        return out;
    }

    // numerator N = A * prod(1 - v_j z) mod z^S, then c_j = -v_j N(1/v_j)/D'(1/v_j)
    modpoly::Poly A(S);
    for (std::size_t i = 0; i < S; ++i) A[i] = nonneg_rem(a[i], pts.q);
    modpoly::Poly D{ZZ(1)};
    {
        std::vector<modpoly::Poly> leaves;
        leaves.reserve(S);
        for (std::size_t j = 0; j < S; ++j)
            leaves.push_back(modpoly::Poly{ZZ(1), pts.q - pts.v[j]});
        while (leaves.size() > 1) {
            std::vector<modpoly::Poly> next;
            next.reserve((leaves.size() + 1) / 2);
            for (std::size_t i = 0; i + 1 < leaves.size(); i += 2)
                next.push_back(modpoly::mul(leaves[i], leaves[i + 1], pts.q));
            if (leaves.size() % 2) next.push_back(leaves.back());
            leaves = std::move(next);
        }
        D = std::move(leaves[0]);
    }
    modpoly::Poly N = modpoly::mul_trunc(A, D, pts.q, S);
    modpoly::Poly Dp = modpoly::derivative(D, pts.q);

    // batch inversion of the points
    std::vector<ZZ> pref(S + 1);
    pref[0] = 1;
    for (std::size_t j = 0; j < S; ++j) pref[j + 1] = mulmod(pref[j], pts.v[j], pts.q);
    ZZ run = invmod(pref[S], pts.q);
    std::vector<ZZ> w(S);
    for (std::size_t j = S; j-- > 0;) {
        w[j] = mulmod(pref[j], run, pts.q);
        run = mulmod(run, pts.v[j], pts.q);
    }

    std::vector<ZZ> nw = modpoly::multipoint_eval(N, w, pts.q);
    std::vector<ZZ> dw = modpoly::multipoint_eval(Dp, w, pts.q);
    std::vector<ZZ> out(S);
    for (std::size_t j = 0; j < S; ++j) {
        ZZ t = mulmod(nw[j], invmod(dw[j], pts.q), pts.q);
        t = mulmod(t, pts.v[j], pts.q);
        out[j] = t == 0 ? t : pts.q - t;
    }
    return out;
}

// ---------------------------------------------------------------- dispatch

inline std::vector<ZZ> vt_apply(const VandermondePoints& pts, const std::vector<ZZ>& c) {
    return pts.size() <= vt_fast_threshold ? vt_apply_naive(pts, c)
                                           : vt_apply_fast(pts, c);
}

inline std::vector<ZZ> vt_apply_prefix(const VandermondePoints& pts,
                                       const std::vector<ZZ>& c, std::size_t n) {
    // direct summation beats the series machinery when either dimension is
    // small (few output rows over many points, or vice versa)
    return std::min(pts.size(), n) <= vt_fast_threshold
               ? vt_apply_prefix_naive(pts, c, n)
               : vt_apply_prefix_fast(pts, c, n);
}

inline std::vector<ZZ> vt_solve(const VandermondePoints& pts, const std::vector<ZZ>& a) {
    return pts.size() <= vt_fast_threshold ? vt_solve_naive(pts, a)
                                           : vt_solve_fast(pts, a);
}

} // namespace spmul
