#pragma once

// Number-theoretic kernel: remainder conventions, primality, the randomized
// prime samplers (plain, coefficient-preserving, difference-preserving), the
// prime/primitive-root bundle generator, and Chinese remaindering.
//
// Primality uses Miller-Rabin: deterministic witness set below 2^64, the
// first 64 prime bases above (fixed bases, so the predicate is a pure
// function of n; callers fold the negligible error into their own budgets).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>
#include <gmpxx.h>

#include "instrument.hpp"
#include "rng.hpp"

namespace spmul {

using ZZ = mpz_class;

namespace config {
// Stand-in for the unknown constant in the arithmetic-progression density
// bound; raise it (e.g. via the CLI's SPMUL_LAMBDA0 / retry doubling) if
// prime/root bundle generation keeps failing.
inline std::atomic<double> lambda0{1.0};
}

// ---------------------------------------------------------------- remainders

inline ZZ nonneg_rem(const ZZ& n, const ZZ& m) {
    if (m <= 0) throw std::invalid_argument("nonneg_rem: modulus must be positive");
    ZZ r;
    mpz_mod(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Representative in [-m/2, m/2).
inline ZZ centered_rem(const ZZ& n, const ZZ& m) {
    ZZ r = nonneg_rem(n, m);
    if (2 * r >= m) r -= m;
    return r;
}

// ------------------------------------------------------- counted arithmetic

namespace detail {
inline std::uint64_t limbs(const ZZ& n) {
    return std::max<std::uint64_t>(1, mpz_size(n.get_mpz_t()));
}
}

inline ZZ mulmod(const ZZ& a, const ZZ& b, const ZZ& m) {
    const std::uint64_t L = detail::limbs(m);
    instrument::add(L * L + L);
    ZZ t = a * b;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
    return t;
}

inline ZZ powmod(const ZZ& base, const ZZ& exp, const ZZ& m) {
    if (exp < 0) throw std::invalid_argument("powmod: negative exponent");
    const std::uint64_t L = detail::limbs(m);
    const std::uint64_t eb = mpz_sizeinbase(exp.get_mpz_t(), 2);
    instrument::add(2 * eb * L * L);
    ZZ r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline ZZ powmod(const ZZ& base, unsigned long exp, const ZZ& m) {
    const std::uint64_t L = detail::limbs(m);
    instrument::add(2 * 64 * L * L);
    ZZ r;
    mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), exp, m.get_mpz_t());
    return r;
}

inline ZZ invmod(const ZZ& a, const ZZ& m) {
    const std::uint64_t L = detail::limbs(m);
    instrument::add(4 * L * L);
    ZZ r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("invmod: element not invertible");
    return r;
}

// ----------------------------------------------------------------- primality

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m == 1 ? 0 : 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

inline bool mr_witness_u64(std::uint64_t a, std::uint64_t d, int s, std::uint64_t n) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic for all n < 2^64 (Sorenson & Webster).
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (mr_witness_u64(a, d, s, n)) return false;
    }
    return true;
}

inline const std::vector<unsigned long>& mr_big_bases() {
    static const std::vector<unsigned long> bases = [] {
        std::vector<unsigned long> b;
        for (unsigned long c = 2; b.size() < 64; ++c)
            if (is_prime_u64(c)) b.push_back(c);
        return b;
    }();
    return bases;
}

inline bool mr_witness_mpz(const ZZ& a, const ZZ& d, unsigned long s, const ZZ& n) {
    ZZ x = powmod(a, d, n);
    const ZZ nm1 = n - 1;
    if (x == 1 || x == nm1) return false;
    for (unsigned long i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == nm1) return false;
    }
    return true;
}

} // namespace detail

inline bool is_prime(const ZZ& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        instrument::add(768);
        return detail::is_prime_u64(n.get_ui());
    }
    for (unsigned long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    ZZ d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    for (unsigned long a : detail::mr_big_bases()) {
        if (detail::mr_witness_mpz(ZZ(a), d, s, n)) return false;
    }
    return true;
}

inline ZZ next_prime_at_least(const ZZ& n) {
    if (n <= 2) return 2;
    ZZ c = n;
    if (mpz_even_p(c.get_mpz_t())) c += 1;
    while (!is_prime(c)) c += 2;
    return c;
}

// ------------------------------------------------------------ prime sampling

namespace detail {

// Natural log of an arbitrary-precision positive integer.
inline double ln_mpz(const ZZ& n) {
    if (n <= 0) throw std::invalid_argument("ln_mpz: nonpositive argument");
    long e = 0;
    double d = mpz_get_d_2exp(&e, n.get_mpz_t());
    return std::log(d) + static_cast<double>(e) * 0.6931471805599453;
}

inline long ceil_pos(double x) {
    long c = static_cast<long>(std::ceil(x));
    return c < 1 ? 1 : c;
}

inline long getprime_rounds(double ln_lambda, double mu) {
    return ceil_pos((5.0 / 6.0) * ln_lambda * std::log(1.0 / mu));
}

// Repeats `rounds` times: draw a random odd integer in (lo, hi], return it if
// prime. Fail (nullopt) if no round succeeds.
inline std::optional<ZZ> prime_hunt(const ZZ& lo, const ZZ& hi, long rounds,
                                    RandomSource& rng) {
    ZZ first = lo + 1;
    if (mpz_even_p(first.get_mpz_t())) first += 1;
    if (first > hi) return std::nullopt;
    ZZ count = (hi - first) / 2 + 1;
    for (long i = 0; i < rounds; ++i) {
        ZZ cand = first + 2 * rng.below(count);
        if (is_prime(cand)) return cand;
    }
    return std::nullopt;
}

inline void check_mu(double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("mu must lie in (0,1)");
}

} // namespace detail

// Random prime in (floor(lambda), floor(2 lambda)], failure probability < mu.
inline std::optional<ZZ> get_prime(double lambda, double mu, RandomSource& rng) {
    if (!(lambda >= 21.0))
        throw std::invalid_argument("get_prime: lambda must be >= 21");
    detail::check_mu(mu);
    ZZ lo(lambda);
    ZZ hi(2.0 * lambda);
    return detail::prime_hunt(lo, hi, detail::getprime_rounds(std::log(lambda), mu), rng);
}

// Prime that, with probability >= 1-mu, keeps at least a gamma fraction of any
// hidden S-subset of integers bounded by D nonzero mod p (all of it if
// gamma = 1).
inline std::optional<ZZ> get_vanish_prime(const ZZ& S, const ZZ& D, double gamma,
                                          double mu, RandomSource& rng) {
    if (S < 1 || D < 1) throw std::invalid_argument("get_vanish_prime: need S >= 1, D >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("get_vanish_prime: gamma must lie in (0,1]");
    detail::check_mu(mu);
    const double Sd = mpz_get_d(S.get_mpz_t());
    const double mins = gamma >= 1.0 ? Sd : std::min(Sd, 1.0 / (1.0 - gamma));
    const double lnD = D == 1 ? 0.0 : detail::ln_mpz(D);
    const double lam = std::max(21.0, (10.0 / (3.0 * mu)) * mins * lnD);
    return get_prime(lam, mu / 2.0, rng);
}

// Prime that, with probability >= 1-mu, separates at least a gamma fraction
// of any hidden S-subset of an interval of width < D pairwise mod p.
inline std::optional<ZZ> get_diff_prime(const ZZ& S, const ZZ& D, double gamma,
                                        double mu, RandomSource& rng) {
    if (S < 1 || D < 1) throw std::invalid_argument("get_diff_prime: need S >= 1, D >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("get_diff_prime: gamma must lie in (0,1]");
    detail::check_mu(mu);
    if (S == 1) return get_prime(21.0, mu / 2.0, rng);
    const double Sd = mpz_get_d(S.get_mpz_t());
    const double mins = gamma >= 1.0 ? Sd : std::min(Sd, 1.0 / (1.0 - gamma));
    const double lnD = D == 1 ? 0.0 : detail::ln_mpz(D);
    const double lam = (10.0 / (3.0 * mu)) * (Sd - 1.0) * mins * lnD;
    if (lam < 21.0) return get_prime(21.0, mu / 2.0, rng);
    if (mpz_cmp_d(D.get_mpz_t(), lam) < 0) {
        // lambda overshoots the interval width; any prime in (D, 2D] works.
        return detail::prime_hunt(D, 2 * D,
                                  detail::getprime_rounds(detail::ln_mpz(D), mu / 2.0),
                                  rng);
    }
    return get_prime(lam, mu / 2.0, rng);
}

// ------------------------------------------------------ prime + root bundles

struct PrimRootBundle {
    ZZ p;                                 // common order of all the roots
    std::vector<std::pair<ZZ, ZZ>> pairs; // (q, omega): q = ap+1 prime, ord(omega) = p

    ZZ q_product() const {
        ZZ prod = 1;
        for (const auto& [q, w] : pairs) prod *= q;
        return prod;
    }
};

// Bundle of primes q = ap+1 with elements omega of order exactly p, where p
// is (with probability >= 1-mu) a difference prime for any hidden T-subset of
// [0, D], and the product of the q exceeds 2C.
inline std::optional<PrimRootBundle> get_prim_roots(const ZZ& D, const ZZ& T,
                                                    const ZZ& C, double mu,
                                                    RandomSource& rng) {
    if (D < 1 || T < 1 || C < 1)
        throw std::invalid_argument("get_prim_roots: need D, T, C >= 1");
    detail::check_mu(mu);
    const long m = detail::ceil_pos(std::log2(2.0 / mu));
    const double Td = mpz_get_d(T.get_mpz_t());
    const double lnD = D == 1 ? 0.0 : detail::ln_mpz(D);
    const double ln2C = detail::ln_mpz(ZZ(2 * C));
    const double lam = std::max(
        std::max(786.0, config::lambda0.load()),
        std::max((20.0 / (3.0 * mu)) * static_cast<double>(m) * Td * (Td - 1.0) * lnD,
                 1.35 * std::pow(ln2C, 3.13)));
    const double lnlam = std::log(lam);
    const std::uint64_t acount =
        static_cast<std::uint64_t>(detail::ceil_pos(1.1 * ln2C * lnlam * lnlam));
    std::uint64_t amax = static_cast<std::uint64_t>(2.0 * std::pow(lam, 0.89));
    amax -= amax & 1;
    const std::uint64_t avail = amax / 2; // even values in [2, amax]
    const ZZ target = 2 * C;

    for (long round = 0; round < m; ++round) {
        auto p = get_prime(lam, mu / (4.0 * static_cast<double>(m)), rng);
        if (!p) return std::nullopt;
        std::set<std::uint64_t> seen;
        std::vector<std::uint64_t> as;
        const std::uint64_t need = std::min<std::uint64_t>(acount, avail);
        while (as.size() < need) {
            std::uint64_t a = 2 * (1 + rng.below(avail));
            if (seen.insert(a).second) as.push_back(a);
        }
        std::vector<std::pair<ZZ, ZZ>> pairs;
        ZZ prod = 1;
        for (std::uint64_t a : as) {
            ZZ q = ZZ(static_cast<unsigned long>(a)) * *p + 1;
            ZZ zeta = 1 + rng.below(ZZ(q - 1));
            if (!is_prime(q)) continue;
            ZZ omega = powmod(zeta, static_cast<unsigned long>(a), q);
            if (omega == 1) continue;
            pairs.emplace_back(std::move(q), std::move(omega));
            prod *= pairs.back().first;
            if (prod >= target) return PrimRootBundle{*p, std::move(pairs)};
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------ Chinese remaindering

struct ResidueSystem {
    std::vector<ZZ> residues;
    std::vector<ZZ> moduli;

    ResidueSystem(std::vector<ZZ> r, std::vector<ZZ> m)
        : residues(std::move(r)), moduli(std::move(m)) {
        if (residues.size() != moduli.size() || residues.empty())
            throw std::invalid_argument("ResidueSystem: need equally many residues and moduli");
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            if (moduli[i] < 2)
                throw std::invalid_argument("ResidueSystem: moduli must be >= 2");
            if (residues[i] < 0 || residues[i] >= moduli[i])
                throw std::invalid_argument("ResidueSystem: residue out of range");
        }
        ZZ g;
        for (std::size_t i = 0; i < moduli.size(); ++i)
            for (std::size_t j = i + 1; j < moduli.size(); ++j) {
                mpz_gcd(g.get_mpz_t(), moduli[i].get_mpz_t(), moduli[j].get_mpz_t());
                if (g != 1)
                    throw std::invalid_argument("ResidueSystem: moduli share a factor");
            }
    }

    ZZ modulus_product() const {
        ZZ prod = 1;
        for (const auto& m : moduli) prod *= m;
        return prod;
    }
};

// Unique x in [0, prod(moduli)) matching every residue.
inline ZZ crt(const ResidueSystem& rs) {
    ZZ x = rs.residues[0];
    ZZ M = rs.moduli[0];
    for (std::size_t i = 1; i < rs.moduli.size(); ++i) {
        const ZZ& mi = rs.moduli[i];
        ZZ t = mulmod(nonneg_rem(rs.residues[i] - x, mi), invmod(nonneg_rem(M, mi), mi), mi);
        x += M * t;
        M *= mi;
        instrument::add(detail::limbs(M) * 2);
    }
    return x;
}

} // namespace spmul
