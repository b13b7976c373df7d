#pragma once

// Polynomial core: sparse univariate polynomials with big-integer exponents,
// multivariate Laurent terms, dense cyclic images, and the conversions
// between them (cyclic reduction, Kronecker packing, Laurent shifts).
//
// Cyclic products charge the dense-transform cost ~ 3 p lg(p) L^2 for any
// length a dense transform could realistically run at (floored by the literal
// pairwise cost when that is larger); far beyond that only the sparse scatter
// is realizable and the pair cost is charged as-is. The wall-clock kernel
// always exploits input sparsity. Everything else charges actual limb work.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>
#include <gmpxx.h>

#include "instrument.hpp"
#include "numtheory.hpp"

namespace spmul {

struct Term {
    ZZ c; // coefficient, never zero in canonical form
    ZZ e; // exponent, may be negative (Laurent)

    friend bool operator==(const Term& a, const Term& b) {
        return a.c == b.c && a.e == b.e;
    }
};

// ------------------------------------------------------------- sparse (univ)

class SparsePoly {
public:
    SparsePoly() = default;

    // Canonicalizes: sorts by exponent, merges duplicates, drops zeros.
    static SparsePoly from_terms(std::vector<Term> ts) {
        std::sort(ts.begin(), ts.end(),
                  [](const Term& a, const Term& b) { return a.e < b.e; });
        SparsePoly f;
        for (auto& t : ts) {
            if (!f.terms_.empty() && f.terms_.back().e == t.e)
                f.terms_.back().c += t.c;
            else
                f.terms_.push_back(std::move(t));
        }
        std::erase_if(f.terms_, [](const Term& t) { return t.c == 0; });
        return f;
    }

    static SparsePoly zero() { return SparsePoly(); }

    static SparsePoly constant(const ZZ& c) {
        if (c == 0) return SparsePoly();
        return from_terms({{c, ZZ(0)}});
    }

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t nnz() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    const ZZ& min_exponent() const { require_nonzero(); return terms_.front().e; }
    const ZZ& max_exponent() const { require_nonzero(); return terms_.back().e; }

    // largest |e| over the support; 0 for the zero polynomial
    ZZ max_abs_exponent() const {
        ZZ m = 0;
        for (const auto& t : terms_) {
            ZZ a = abs(t.e);
            if (a > m) m = a;
        }
        return m;
    }

    ZZ max_norm() const {
        ZZ m = 0;
        for (const auto& t : terms_) {
            ZZ a = abs(t.c);
            if (a > m) m = a;
        }
        return m;
    }

    std::vector<ZZ> support() const {
        std::vector<ZZ> s;
        s.reserve(terms_.size());
        for (const auto& t : terms_) s.push_back(t.e);
        return s;
    }

    // evaluation at x mod m; exponents must be nonnegative
    ZZ eval_mod(const ZZ& x, const ZZ& m) const {
        ZZ acc = 0;
        for (const auto& t : terms_) {
            if (t.e < 0) throw std::invalid_argument("eval_mod: negative exponent");
            acc += mulmod(nonneg_rem(t.c, m), powmod(nonneg_rem(x, m), t.e, m), m);
        }
        return nonneg_rem(acc, m);
    }

    friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
        return a.terms_ == b.terms_;
    }

    friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
        std::vector<Term> ts = a.terms_;
        ts.insert(ts.end(), b.terms_.begin(), b.terms_.end());
        instrument::add(ts.size());
        return from_terms(std::move(ts));
    }

    friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) {
        std::vector<Term> ts = a.terms_;
        ts.reserve(ts.size() + b.terms_.size());
        for (const auto& t : b.terms_) ts.push_back({-t.c, t.e});
        instrument::add(ts.size());
        return from_terms(std::move(ts));
    }

private:
    void require_nonzero() const {
        if (terms_.empty()) throw std::logic_error("zero polynomial has no support");
    }
    std::vector<Term> terms_;
};

// ------------------------------------------------------------ exponent sets

// Sorted set of distinct integers, the support alphabet for structured
// multiplication.
class ExponentSet {
public:
    ExponentSet() = default;

    static ExponentSet from_values(std::vector<ZZ> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        ExponentSet s;
        s.vals_ = std::move(v);
        return s;
    }

    const std::vector<ZZ>& values() const { return vals_; }
    std::size_t size() const { return vals_.size(); }
    bool empty() const { return vals_.empty(); }

    bool contains(const ZZ& x) const {
        return std::binary_search(vals_.begin(), vals_.end(), x);
    }

    // 1 + max |a| over the set; 1 for the empty set
    ZZ width_bound() const {
        ZZ m = 0;
        for (const auto& v : vals_) {
            ZZ a = abs(v);
            if (a > m) m = a;
        }
        return m + 1;
    }

    friend bool operator==(const ExponentSet& a, const ExponentSet& b) {
        return a.vals_ == b.vals_;
    }

    friend ExponentSet operator|(const ExponentSet& a, const ExponentSet& b) {
        std::vector<ZZ> v = a.vals_;
        v.insert(v.end(), b.vals_.begin(), b.vals_.end());
        return from_values(std::move(v));
    }

private:
    std::vector<ZZ> vals_;
};

// --------------------------------------------------------- dense cyclic form

namespace detail {
// dense vector backing up to this length, ordered map above
inline constexpr std::uint64_t dense_backing_limit = std::uint64_t(1) << 16;

// transform lengths up to here are charged at the dense-transform model cost
inline constexpr std::uint64_t model_length_limit = std::uint64_t(1) << 32;

inline std::uint64_t ceil_lg(std::uint64_t n) {
    std::uint64_t b = 0;
    while ((std::uint64_t(1) << b) < n) ++b;
    return b < 1 ? 1 : b;
}
}

// Coefficient vector of a polynomial reduced mod (m, x^p - 1). Slots hold
// values in [0, m).
class DenseCyclicPoly {
public:
    DenseCyclicPoly(std::uint64_t length, ZZ modulus)
        : len_(length), mod_(std::move(modulus)),
          dense_(length <= detail::dense_backing_limit) {
        if (len_ == 0) throw std::invalid_argument("DenseCyclicPoly: zero length");
        if (mod_ < 2) throw std::invalid_argument("DenseCyclicPoly: modulus must be >= 2");
        if (dense_) vec_.resize(len_);
    }

    std::uint64_t length() const { return len_; }
    const ZZ& modulus() const { return mod_; }

    ZZ get(std::uint64_t i) const {
        check_index(i);
        if (dense_) return vec_[i];
        auto it = map_.find(i);
        return it == map_.end() ? ZZ(0) : it->second;
    }

    void add_at(std::uint64_t i, const ZZ& v) {
        check_index(i);
        if (dense_) {
            vec_[i] += v;
            clamp(vec_[i]);
        } else {
            ZZ& slot = map_[i];
            slot += v;
            clamp(slot);
            if (slot == 0) map_.erase(i);
        }
    }

    void set(std::uint64_t i, const ZZ& v) {
        check_index(i);
        ZZ r = nonneg_rem(v, mod_);
        if (dense_) {
            vec_[i] = std::move(r);
        } else if (r == 0) {
            map_.erase(i);
        } else {
            map_[i] = std::move(r);
        }
    }

    std::uint64_t nnz() const {
        if (!dense_) return map_.size();
        std::uint64_t n = 0;
        for (const auto& v : vec_)
            if (v != 0) ++n;
        return n;
    }

    bool is_zero() const { return nnz() == 0; }

    // visits (index, coefficient) for nonzero slots in ascending index order
    template <class F>
    void for_each_nonzero(F&& fn) const {
        if (dense_) {
            for (std::uint64_t i = 0; i < len_; ++i)
                if (vec_[i] != 0) fn(i, vec_[i]);
        } else {
            for (const auto& [i, v] : map_) fn(i, v);
        }
    }

    SparsePoly to_sparse() const {
        std::vector<Term> ts;
        for_each_nonzero([&](std::uint64_t i, const ZZ& c) {
            ts.push_back({c, ZZ(static_cast<unsigned long>(i))});
        });
        return SparsePoly::from_terms(std::move(ts));
    }

    friend bool operator==(const DenseCyclicPoly& a, const DenseCyclicPoly& b) {
        if (a.len_ != b.len_ || a.mod_ != b.mod_) return false;
        bool eq = true;
        a.for_each_nonzero([&](std::uint64_t i, const ZZ& c) {
            if (b.get(i) != c) eq = false;
        });
        if (!eq) return false;
        b.for_each_nonzero([&](std::uint64_t i, const ZZ& c) {
            if (a.get(i) != c) eq = false;
        });
        return eq;
    }

private:
    void check_index(std::uint64_t i) const {
        if (i >= len_) throw std::out_of_range("DenseCyclicPoly: index past length");
    }
    void clamp(ZZ& v) {
        if (v < 0 || v >= mod_)
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), mod_.get_mpz_t());
    }

    std::uint64_t len_;
    ZZ mod_;
    bool dense_;
    std::vector<ZZ> vec_;
    std::map<std::uint64_t, ZZ> map_;
};

// f mod (m, x^p - 1): folds every term onto its exponent class.
inline DenseCyclicPoly reduce_cyclic(const SparsePoly& f, std::uint64_t p, const ZZ& m) {
    DenseCyclicPoly out(p, m);
    const ZZ pz(static_cast<unsigned long>(p));
    const std::uint64_t L = detail::limbs(m);
    instrument::add(f.nnz() * 2 * L + 1);
    for (const auto& t : f.terms())
        out.add_at(nonneg_rem(t.e, pz).get_ui(), t.c);
    return out;
}

// Same folding but the length stays a big integer and the result stays
// sparse; for moduli x^p - 1 far too long to tabulate.
inline SparsePoly sparse_cyclic_rem(const SparsePoly& f, const ZZ& p, const ZZ& m) {
    if (p < 1) throw std::invalid_argument("sparse_cyclic_rem: length must be positive");
    const std::uint64_t L = detail::limbs(m);
    instrument::add(f.nnz() * 2 * L + 1);
    std::vector<Term> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms())
        ts.push_back({t.c, nonneg_rem(t.e, p)});
    auto folded = SparsePoly::from_terms(std::move(ts));
    std::vector<Term> out;
    out.reserve(folded.nnz());
    for (const auto& t : folded.terms()) {
        ZZ c = nonneg_rem(t.c, m);
        if (c != 0) out.push_back({std::move(c), t.e});
    }
    return SparsePoly::from_terms(std::move(out));
}

// f * g mod (m, x^p - 1). Inputs arrive sparse; the kernel scatters
// pairwise products onto exponent classes. The charge is the dense-transform
// model cost, floored by the literal pair cost.
inline DenseCyclicPoly dense_mul_cyclic(const SparsePoly& f, const SparsePoly& g,
                                        std::uint64_t p, const ZZ& m) {
    if (p == 0) throw std::invalid_argument("dense_mul_cyclic: length must be positive");
    const std::uint64_t L = detail::limbs(m);
    const std::uint64_t pairs = f.nnz() * g.nnz();
    // up to the model limit the reference cost is the dense transform; above
    // it only sparse scatter is realizable, so the pair cost is honest
    const std::uint64_t model = p <= detail::model_length_limit
                                    ? 3 * p * detail::ceil_lg(p) * L * L
                                    : 0;
    instrument::add(std::max(model, pairs * (2 * L * L + 2 * L)));

    DenseCyclicPoly out(p, m);
    const ZZ pz(static_cast<unsigned long>(p));
    std::vector<std::uint64_t> ge;
    ge.reserve(g.nnz());
    for (const auto& t : g.terms()) ge.push_back(nonneg_rem(t.e, pz).get_ui());
    ZZ prod;
    for (const auto& tf : f.terms()) {
        const std::uint64_t ef = nonneg_rem(tf.e, pz).get_ui();
        std::size_t j = 0;
        for (const auto& tg : g.terms()) {
            std::uint64_t idx = ef + ge[j++];
            if (idx >= p) idx -= p;
            prod = tf.c * tg.c;
            out.add_at(idx, prod);
        }
    }
    return out;
}

inline DenseCyclicPoly dense_mul_cyclic(const DenseCyclicPoly& a, const DenseCyclicPoly& b) {
    if (a.length() != b.length() || a.modulus() != b.modulus())
        throw std::invalid_argument("dense_mul_cyclic: operand length/modulus mismatch");
    return dense_mul_cyclic(a.to_sparse(), b.to_sparse(), a.length(), a.modulus());
}

// ----------------------------------------------------------- multivariate

struct MTerm {
    ZZ c;
    std::vector<ZZ> e; // one exponent per variable, may be negative

    friend bool operator==(const MTerm& a, const MTerm& b) {
        return a.c == b.c && a.e == b.e;
    }
};

class MultiPoly {
public:
    explicit MultiPoly(int nvars = 1) : nvars_(nvars) {
        if (nvars < 1) throw std::invalid_argument("MultiPoly: need at least one variable");
    }

    static MultiPoly from_terms(int nvars, std::vector<MTerm> ts) {
        MultiPoly f(nvars);
        for (const auto& t : ts)
            if ((int)t.e.size() != nvars)
                throw std::invalid_argument("MultiPoly: exponent arity mismatch");
        std::sort(ts.begin(), ts.end(),
                  [](const MTerm& a, const MTerm& b) { return a.e < b.e; });
        for (auto& t : ts) {
            if (!f.terms_.empty() && f.terms_.back().e == t.e)
                f.terms_.back().c += t.c;
            else
                f.terms_.push_back(std::move(t));
        }
        std::erase_if(f.terms_, [](const MTerm& t) { return t.c == 0; });
        return f;
    }

    int nvars() const { return nvars_; }
    const std::vector<MTerm>& terms() const { return terms_; }
    std::size_t nnz() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    ZZ max_norm() const {
        ZZ m = 0;
        for (const auto& t : terms_) {
            ZZ a = abs(t.c);
            if (a > m) m = a;
        }
        return m;
    }

    // largest |e_i| over all terms and variables
    ZZ max_abs_exponent() const {
        ZZ m = 0;
        for (const auto& t : terms_)
            for (const auto& e : t.e) {
                ZZ a = abs(e);
                if (a > m) m = a;
            }
        return m;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

private:
    int nvars_;
    std::vector<MTerm> terms_;
};

// Shifts each variable so its minimum exponent becomes zero. Returns the
// shifted polynomial and the per-variable shifts that were subtracted.
inline std::pair<MultiPoly, std::vector<ZZ>> laurent_normalize(const MultiPoly& f) {
    std::vector<ZZ> shift(f.nvars(), ZZ(0));
    if (!f.is_zero()) {
        for (int v = 0; v < f.nvars(); ++v) {
            shift[v] = f.terms().front().e[v];
            for (const auto& t : f.terms())
                if (t.e[v] < shift[v]) shift[v] = t.e[v];
        }
    }
    std::vector<MTerm> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) {
        MTerm s{t.c, t.e};
        for (int v = 0; v < f.nvars(); ++v) s.e[v] -= shift[v];
        ts.push_back(std::move(s));
    }
    return {MultiPoly::from_terms(f.nvars(), std::move(ts)), std::move(shift)};
}

// Maps e = (e_1,...,e_n) to sum e_i * (2D)^(i-1). Injective, and invertible
// by centered digits, as long as every e_i lies in [-D, D).
inline SparsePoly kronecker_pack(const MultiPoly& f, const ZZ& D) {
    if (D < 1) throw std::invalid_argument("kronecker_pack: D must be positive");
    const ZZ base = 2 * D;
    std::vector<Term> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) {
        for (const auto& e : t.e)
            if (e < -D || e >= D)
                throw std::invalid_argument("kronecker_pack: exponent outside [-D, D)");
        ZZ packed = 0;
        ZZ scale = 1;
        for (const auto& e : t.e) {
            packed += e * scale;
            scale *= base;
        }
        ts.push_back({t.c, std::move(packed)});
    }
    instrument::add(f.nnz() * f.nvars() * detail::limbs(base));
    return SparsePoly::from_terms(std::move(ts));
}

inline MultiPoly kronecker_unpack(const SparsePoly& f, int nvars, const ZZ& D) {
    if (D < 1) throw std::invalid_argument("kronecker_unpack: D must be positive");
    const ZZ base = 2 * D;
    std::vector<MTerm> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) {
        MTerm m{t.c, std::vector<ZZ>(nvars)};
        ZZ v = t.e;
        for (int i = 0; i < nvars; ++i) {
            ZZ d = centered_rem(v, base);
            m.e[i] = d;
            v = (v - d) / base;
        }
        if (v != 0) throw std::invalid_argument("kronecker_unpack: value outside packed range");
        ts.push_back(std::move(m));
    }
    instrument::add(f.nnz() * nvars * detail::limbs(base));
    return MultiPoly::from_terms(nvars, std::move(ts));
}

} // namespace spmul
