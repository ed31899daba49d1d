#pragma once

// Factorization of monic integer polynomials over ℤ: modular factorization
// (distinct-degree + Cantor–Zassenhaus), linear Hensel lifting and exhaustive
// recombination of the lifted factors.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "aperiodica/polynomial.hpp"

namespace aperiodica {

namespace detail::modp {

using u64 = std::uint64_t;
using FpPoly = std::vector<u64>;

struct Field {
    u64 p;

    u64 add(u64 a, u64 b) const { return (a + b) % p; }
    u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
    u64 mul(u64 a, u64 b) const { return (a * b) % p; }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }

    static void trim(FpPoly& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    static int deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

    FpPoly reduce(const poly::ZPoly& f) const {
        FpPoly r(f.size());
        const BigInt P = p;
        for (std::size_t i = 0; i < f.size(); ++i) {
            BigInt c = f[i] % P;
            if (c < 0) c += P;
            r[i] = static_cast<u64>(c);
        }
        trim(r);
        return r;
    }

    FpPoly add(const FpPoly& a, const FpPoly& b) const {
        FpPoly r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = add(r[i], b[i]);
        trim(r);
        return r;
    }
    FpPoly sub(const FpPoly& a, const FpPoly& b) const {
        FpPoly r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
        trim(r);
        return r;
    }
    FpPoly mul(const FpPoly& a, const FpPoly& b) const {
        if (a.empty() || b.empty()) return {};
        FpPoly r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
        }
        trim(r);
        return r;
    }
    /// Quotient and remainder; b must be nonzero.
    std::pair<FpPoly, FpPoly> divmod(FpPoly a, const FpPoly& b) const {
        const int db = deg(b);
        const u64 inv_lead = inv(b.back());
        FpPoly q;
        if (deg(a) >= db) q.assign(static_cast<std::size_t>(deg(a) - db + 1), 0);
        while (!a.empty() && deg(a) >= db) {
            const u64 f = mul(a.back(), inv_lead);
            const int shift = deg(a) - db;
            q[static_cast<std::size_t>(shift)] = f;
            for (int i = 0; i <= db; ++i) {
                auto& slot = a[static_cast<std::size_t>(i + shift)];
                slot = sub(slot, mul(f, b[static_cast<std::size_t>(i)]));
            }
            trim(a);
        }
        trim(q);
        return {q, a};
    }
    FpPoly mod(const FpPoly& a, const FpPoly& b) const { return divmod(a, b).second; }

    FpPoly monic(FpPoly f) const {
        if (f.empty()) return f;
        const u64 il = inv(f.back());
        for (auto& c : f) c = mul(c, il);
        return f;
    }
    FpPoly gcd(FpPoly a, FpPoly b) const {
        while (!b.empty()) {
            FpPoly r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }
    /// s, t with s·a + t·b = 1 (a, b coprime).
    std::pair<FpPoly, FpPoly> bezout(const FpPoly& a, const FpPoly& b) const {
        FpPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
        while (!r1.empty()) {
            auto [q, r] = divmod(r0, r1);
            FpPoly s2 = sub(s0, mul(q, s1));
            FpPoly t2 = sub(t0, mul(q, t1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        // r0 is a nonzero constant
        const u64 il = inv(r0.at(0));
        for (auto& c : s0) c = mul(c, il);
        for (auto& c : t0) c = mul(c, il);
        return {s0, t0};
    }
    FpPoly powmod(FpPoly base, const BigInt& e, const FpPoly& m) const {
        FpPoly result{1};
        base = mod(base, m);
        if (e == 0) return mod(result, m);
        const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(e));
        for (int i = static_cast<int>(bits); i >= 0; --i) {
            result = mod(mul(result, result), m);
            if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) result = mod(mul(result, base), m);
        }
        return result;
    }
    FpPoly derivative(const FpPoly& f) const {
        if (f.size() <= 1) return {};
        FpPoly d(f.size() - 1);
        for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = mul(f[i], static_cast<u64>(i) % p);
        trim(d);
        return d;
    }
};

/// Distinct-degree factorization of a squarefree monic polynomial: pairs (product, degree).
inline std::vector<std::pair<FpPoly, int>> distinct_degree(const Field& F, FpPoly f) {
    std::vector<std::pair<FpPoly, int>> out;
    const FpPoly x{0, 1};
    FpPoly w = x;
    for (int d = 1; 2 * d <= Field::deg(f); ++d) {
        w = F.powmod(w, BigInt(F.p), f);
        FpPoly g = F.gcd(f, F.sub(w, x));
        if (Field::deg(g) > 0) {
            out.emplace_back(g, d);
            f = F.divmod(f, g).first;
            w = F.mod(w, f);
        }
    }
    if (Field::deg(f) > 0) out.emplace_back(f, Field::deg(f));
    return out;
}

/// Cantor–Zassenhaus equal-degree splitting (odd p).
inline void equal_degree(const Field& F, const FpPoly& g, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
    if (Field::deg(g) == d) {
        out.push_back(F.monic(g));
        return;
    }
    BigInt e = 1;
    for (int i = 0; i < d; ++i) e *= F.p;
    e = (e - 1) / 2;
    std::uniform_int_distribution<u64> coeff(0, F.p - 1);
    while (true) {
        FpPoly a(static_cast<std::size_t>(Field::deg(g)));
        for (auto& c : a) c = coeff(rng);
        Field::trim(a);
        if (Field::deg(a) < 1) continue;
        FpPoly b = F.gcd(a, g);
        if (Field::deg(b) == 0) {
            FpPoly c = F.sub(F.powmod(a, e, g), FpPoly{1});
            b = F.gcd(c, g);
        }
        if (Field::deg(b) > 0 && Field::deg(b) < Field::deg(g)) {
            equal_degree(F, b, d, rng, out);
            equal_degree(F, F.divmod(g, b).first, d, rng, out);
            return;
        }
    }
}

inline std::vector<u64> small_odd_primes(u64 limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<u64> primes;
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        if (i > 2) primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

inline BigInt symmetric_mod(const BigInt& c, const BigInt& m) {
    BigInt r = c % m;
    if (r < 0) r += m;
    if (r > m / 2) r -= m;
    return r;
}

inline poly::ZPoly to_z(const FpPoly& f) {
    poly::ZPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    return r;
}

/// Lifts f ≡ g·h (mod p), g and h monic and coprime, to a factorization mod p^k.
/// Returns the lifted g with coefficients reduced into [0, p^k).
inline poly::ZPoly hensel_lift(const Field& F, const poly::ZPoly& f, const FpPoly& g0, const FpPoly& h0, int k) {
    auto [s, t] = F.bezout(g0, h0);
    poly::ZPoly g = to_z(g0), h = to_z(h0);
    BigInt pj = F.p;
    for (int j = 1; j < k; ++j) {
        poly::ZPoly diff = poly::sub(f, poly::mul(g, h));
        for (auto& c : diff) c /= pj; // exact: f ≡ g·h (mod p^j)
        const FpPoly e = F.reduce(diff);
        auto [q, dg] = F.divmod(F.mul(t, e), g0);
        const FpPoly dh = F.divmod(F.sub(e, F.mul(h0, dg)), g0).first;
        const BigInt next = pj * F.p;
        poly::ZPoly zdg = to_z(dg), zdh = to_z(dh);
        g = poly::add(g, poly::scale(zdg, pj));
        h = poly::add(h, poly::scale(zdh, pj));
        for (auto& c : g) { c %= next; if (c < 0) c += next; }
        for (auto& c : h) { c %= next; if (c < 0) c += next; }
        pj = next;
        (void)q;
    }
    return g;
}

} // namespace detail::modp

/// Irreducible factors over ℤ of a squarefree monic polynomial of degree ≥ 1.
inline std::vector<poly::ZPoly> factor_squarefree_monic(const poly::ZPoly& f) {
    using namespace detail::modp;
    const int n = poly::degree(f);
    if (n < 1 || poly::leading(f) != 1) throw Error(ErrorCode::InvalidArgument, "factor: expected monic polynomial of degree >= 1");
    if (n == 1) return {f};

    // Pick the prime (among the first usable ones) giving the fewest modular factors.
    const auto primes = small_odd_primes(20000);
    std::vector<std::pair<FpPoly, int>> best_ddf;
    u64 best_p = 0;
    std::size_t best_count = static_cast<std::size_t>(-1);
    int tried = 0;
    for (u64 p : primes) {
        if (p < 11) continue;
        Field F{p};
        FpPoly fp = F.reduce(f);
        if (Field::deg(F.gcd(fp, F.derivative(fp))) > 0) continue;
        auto ddf = distinct_degree(F, fp);
        std::size_t count = 0;
        for (const auto& [g, d] : ddf) count += static_cast<std::size_t>(Field::deg(g) / d);
        if (count < best_count) {
            best_count = count;
            best_p = p;
            best_ddf = std::move(ddf);
        }
        if (best_count == 1 || ++tried >= 12) break;
    }
    if (best_p == 0) throw Error(ErrorCode::InvalidArgument, "factor: no usable prime found");
    if (best_count == 1) return {f};

    const Field F{best_p};
    std::mt19937_64 rng(0x5eed5eedULL);
    std::vector<FpPoly> modular;
    for (const auto& [g, d] : best_ddf) equal_degree(F, g, d, rng, modular);

    // Mignotte-style coefficient bound for any factor: 2^n · Σ|a_i|.
    BigInt norm1 = 0;
    for (const auto& c : f) norm1 += abs(c);
    const BigInt bound = (BigInt(1) << n) * norm1;
    int k = 1;
    BigInt modulus = best_p;
    while (modulus <= 2 * bound) {
        modulus *= best_p;
        ++k;
    }

    const FpPoly fp = F.reduce(f);
    std::vector<poly::ZPoly> lifted;
    lifted.reserve(modular.size());
    for (const auto& g : modular) {
        const FpPoly h = F.divmod(fp, g).first;
        poly::ZPoly lg = hensel_lift(F, f, g, h, k);
        for (auto& c : lg) c = symmetric_mod(c, modulus);
        lifted.push_back(std::move(lg));
    }

    // Recombination: try subsets of increasing size.
    std::vector<poly::ZPoly> factors;
    std::vector<std::size_t> remaining(lifted.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    poly::ZPoly rest = f;
    for (std::size_t size = 1; 2 * size <= remaining.size();) {
        bool found = false;
        std::vector<std::size_t> pick(size);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            poly::ZPoly candidate{1};
            for (std::size_t i : pick) {
                candidate = poly::mul(candidate, lifted[remaining[i]]);
                for (auto& c : candidate) c = symmetric_mod(c, modulus);
            }
            auto quotient = poly::exact_divide(rest, candidate);
            if (quotient) {
                factors.push_back(candidate);
                rest = std::move(*quotient);
                std::vector<std::size_t> keep;
                for (std::size_t i = 0; i < remaining.size(); ++i)
                    if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(remaining[i]);
                remaining = std::move(keep);
                found = true;
                break;
            }
            // next combination
            int i = static_cast<int>(size) - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == remaining.size() - size + static_cast<std::size_t>(i)) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (std::size_t j = static_cast<std::size_t>(i) + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
        if (!found) ++size;
    }
    if (poly::degree(rest) > 0) factors.push_back(rest);
    std::sort(factors.begin(), factors.end(), [](const poly::ZPoly& a, const poly::ZPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return factors;
}

/// Distinct monic irreducible factors of a monic polynomial (multiplicities dropped).
inline std::vector<poly::ZPoly> irreducible_factors(const poly::ZPoly& f) {
    const poly::ZPoly g = poly::gcd(f, poly::derivative(f));
    poly::ZPoly squarefree = f;
    if (poly::degree(g) > 0) squarefree = *poly::exact_divide(f, g);
    return factor_squarefree_monic(squarefree);
}

} // namespace aperiodica
