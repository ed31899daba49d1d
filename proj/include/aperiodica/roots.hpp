#pragma once

// Certified root enclosures for squarefree integer polynomials.
// Real roots: exact Sturm counting and rational bisection.
// Non-real roots: Aberth iteration in 50-digit arithmetic, certified with
// inclusion discs that must be pairwise disjoint and avoid the real axis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "aperiodica/polynomial.hpp"

namespace aperiodica {

struct RootEnclosure {
    std::complex<double> value;
    double radius = 0.0; // the root lies within this distance of value
    bool real = true;
    // Exact isolating interval [lo, hi] for real roots (lo == hi for rational roots).
    BigRational lo, hi;
};

/// All roots of a polynomial with certified enclosures. Index 0 holds the
/// largest real root when one exists; then the remaining real roots in
/// ascending order; then complex pairs (upper half-plane member first).
class ConjugateSet {
public:
    ConjugateSet() = default;
    ConjugateSet(std::vector<RootEnclosure> roots, std::size_t real_count)
        : roots_(std::move(roots)), real_count_(real_count) {}

    const std::vector<RootEnclosure>& roots() const noexcept { return roots_; }
    const RootEnclosure& operator[](std::size_t i) const { return roots_.at(i); }
    std::size_t size() const noexcept { return roots_.size(); }
    std::size_t real_count() const noexcept { return real_count_; }
    std::size_t pf_index() const noexcept { return 0; }
    double pf_value() const { return roots_.at(0).value.real(); }

private:
    std::vector<RootEnclosure> roots_;
    std::size_t real_count_ = 0;
};

namespace detail::roots {

/// sign of p(a/b) for b > 0, using homogeneous integer Horner evaluation.
inline int sign_at(const poly::ZPoly& p, const BigInt& a, const BigInt& b) {
    if (p.empty()) return 0;
    BigInt acc = p.back();
    BigInt bpow = 1;
    for (int i = poly::degree(p) - 1; i >= 0; --i) {
        bpow *= b;
        acc = acc * a + p[static_cast<std::size_t>(i)] * bpow;
    }
    return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
}

inline int sign_at(const poly::ZPoly& p, const BigRational& x) {
    return sign_at(p, boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
}

inline std::vector<poly::ZPoly> sturm_chain(const poly::ZPoly& p) {
    std::vector<poly::ZPoly> chain{p, poly::derivative(p)};
    while (poly::degree(chain.back()) > 0) {
        poly::ZPoly r = poly::pseudo_remainder(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        const BigInt g = poly::content(r);
        for (auto& c : r) c /= g;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int variations_from_signs(const std::vector<int>& signs) {
    int count = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

inline int variations(const std::vector<poly::ZPoly>& chain, const BigRational& x) {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& q : chain) signs.push_back(sign_at(q, x));
    return variations_from_signs(signs);
}

inline int variations_at_infinity(const std::vector<poly::ZPoly>& chain, bool positive) {
    std::vector<int> signs;
    for (const auto& q : chain) {
        int s = poly::leading(q) > 0 ? 1 : -1;
        if (!positive && poly::degree(q) % 2 != 0) s = -s;
        signs.push_back(s);
    }
    return variations_from_signs(signs);
}

/// Integer bound B with every root in (-B, B).
inline BigInt cauchy_bound(const poly::ZPoly& p) {
    BigInt m = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, BigInt(abs(p[i])));
    const BigInt lc = abs(poly::leading(p));
    return m / lc + 2;
}

struct Interval {
    BigRational lo, hi; // root in (lo, hi]
};

inline void isolate(const std::vector<poly::ZPoly>& chain, Interval iv, int vlo, int vhi, std::vector<Interval>& out) {
    const int count = vlo - vhi;
    if (count == 0) return;
    if (count == 1) {
        out.push_back(iv);
        return;
    }
    const BigRational mid = (iv.lo + iv.hi) / 2;
    const int vmid = variations(chain, mid);
    isolate(chain, {iv.lo, mid}, vlo, vmid, out);
    isolate(chain, {mid, iv.hi}, vmid, vhi, out);
}

/// Isolating intervals (lo, hi] for the real roots of a squarefree p, ascending.
inline std::vector<Interval> isolate_real(const poly::ZPoly& p) {
    const auto chain = sturm_chain(p);
    const BigInt b = cauchy_bound(p);
    std::vector<Interval> out;
    isolate(chain, {BigRational(-b), BigRational(b)}, variations(chain, BigRational(-b)), variations(chain, BigRational(b)), out);
    return out;
}

/// Shrinks an isolating interval until hi - lo <= width; a rational root collapses to a point.
inline Interval refine(const poly::ZPoly& p, Interval iv, const BigRational& width) {
    int shi = sign_at(p, iv.hi);
    if (shi == 0) return {iv.hi, iv.hi};
    int slo = sign_at(p, iv.lo);
    if (slo == 0 || slo == shi) {
        // lo is a neighbouring root or the interval was not tight: fall back to counting once.
        const auto chain = sturm_chain(p);
        int vhi = variations(chain, iv.hi);
        while (slo == 0 || slo == shi) {
            const BigRational mid = (iv.lo + iv.hi) / 2;
            if (variations(chain, mid) - vhi == 1) {
                iv.lo = mid;
            } else {
                iv.hi = mid;
                shi = sign_at(p, mid);
                if (shi == 0) return {mid, mid};
                vhi = variations(chain, mid);
            }
            slo = sign_at(p, iv.lo);
        }
    }
    while (iv.hi - iv.lo > width) {
        const BigRational mid = (iv.lo + iv.hi) / 2;
        const int s = sign_at(p, mid);
        if (s == 0) return {mid, mid};
        if (s == slo) iv.lo = mid;
        else iv.hi = mid;
    }
    return iv;
}

inline RootEnclosure real_enclosure(const poly::ZPoly& p, const Interval& iso, double precision) {
    // Target absolute half-width: precision relative to max(|root|, 1), minus rounding slack.
    const double approx = std::max(std::abs(static_cast<double>(iso.lo)), std::abs(static_cast<double>(iso.hi)));
    const double scale = std::max(approx, 1.0);
    const double target = precision * scale * 0.5;
    BigRational width = 1;
    while (static_cast<double>(width) > target) width /= 2;
    const Interval r = refine(p, iso, width);
    const BigRational mid = (r.lo + r.hi) / 2;
    RootEnclosure e;
    e.value = {static_cast<double>(mid), 0.0};
    const double half = static_cast<double>((r.hi - r.lo) / 2);
    const double rounding = std::abs(static_cast<double>(BigRational(e.value.real()) - mid));
    e.radius = half + rounding;
    e.real = true;
    e.lo = r.lo;
    e.hi = r.hi;
    return e;
}

using HighFloat = boost::multiprecision::cpp_bin_float_50;
using HighComplex = boost::multiprecision::cpp_complex_50;

struct Disc {
    HighComplex center;
    HighFloat radius;
};

/// Aberth iteration for all roots with Weierstrass-type inclusion radii.
inline std::optional<std::vector<Disc>> aberth(const poly::ZPoly& p) {
    const std::size_t m = static_cast<std::size_t>(poly::degree(p));
    std::vector<HighFloat> c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = HighFloat(p[i]);
    const HighFloat lead = c.back();
    auto eval = [&](const HighComplex& z, HighComplex& value, HighComplex& deriv, HighFloat& absbound) {
        value = HighComplex(c.back());
        deriv = HighComplex(0);
        absbound = abs(c.back());
        const HighFloat az = abs(z);
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            deriv = deriv * z + value;
            value = value * z + HighComplex(c[i]);
            absbound = absbound * az + abs(c[i]);
        }
    };
    HighFloat radius = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        const HighFloat r = 2 * pow(abs(c[m - k] / lead), HighFloat(1) / HighFloat(k));
        radius = std::max(radius, r);
    }
    if (radius == 0) radius = 1;
    std::vector<HighComplex> z(m);
    const HighFloat pi = boost::math::constants::pi<HighFloat>();
    for (std::size_t k = 0; k < m; ++k) {
        const HighFloat angle = 2 * pi * HighFloat(k) / HighFloat(m) + HighFloat("0.4");
        z[k] = HighComplex(radius * cos(angle), radius * sin(angle));
    }
    const HighFloat tol("1e-42");
    for (int iter = 0; iter < 2000; ++iter) {
        HighFloat worst = 0;
        for (std::size_t j = 0; j < m; ++j) {
            HighComplex v, d;
            HighFloat bound;
            eval(z[j], v, d, bound);
            if (v == HighComplex(0)) continue;
            const HighComplex w = v / d;
            HighComplex s(0);
            for (std::size_t k = 0; k < m; ++k)
                if (k != j) s += HighComplex(1) / (z[j] - z[k]);
            const HighComplex step = w / (HighComplex(1) - w * s);
            z[j] -= step;
            worst = std::max(worst, HighFloat(abs(step) / (1 + abs(z[j]))));
        }
        if (worst < tol) break;
    }
    std::vector<Disc> discs(m);
    const HighFloat eps("1e-45");
    for (std::size_t j = 0; j < m; ++j) {
        HighComplex v, d;
        HighFloat bound;
        eval(z[j], v, d, bound);
        HighFloat denom = abs(lead);
        for (std::size_t k = 0; k < m; ++k)
            if (k != j) denom *= abs(z[j] - z[k]);
        if (denom == 0) return std::nullopt;
        discs[j] = {z[j], HighFloat(m) * (abs(v) + eps * bound) / denom};
    }
    return discs;
}

} // namespace detail::roots

/// Certified enclosures of every root of a monic squarefree polynomial.
/// precision is relative to max(|root|, 1).
inline ConjugateSet isolate_roots(const IntPolynomial& p, double precision = 1e-15) {
    using namespace detail::roots;
    if (!(precision > 0)) throw Error(ErrorCode::InvalidArgument, "precision must be positive");
    if (precision < std::ldexp(1.0, -52)) throw Error(ErrorCode::PrecisionUnreachable, "requested precision below double resolution");
    const poly::ZPoly& f = p.coeffs();
    if (!is_squarefree(f)) throw Error(ErrorCode::NotSquarefree, "polynomial " + p.to_string() + " has a repeated root");
    const std::size_t m = static_cast<std::size_t>(p.degree());

    std::vector<RootEnclosure> real;
    if (m == 1) {
        RootEnclosure e;
        e.lo = e.hi = BigRational(-f[0]);
        e.value = {static_cast<double>(e.lo), 0.0};
        e.radius = std::abs(static_cast<double>(BigRational(e.value.real()) - e.lo));
        real.push_back(e);
    } else {
        for (const auto& iv : isolate_real(f)) real.push_back(real_enclosure(f, iv, precision));
    }

    std::vector<RootEnclosure> roots;
    if (!real.empty()) {
        roots.push_back(real.back());
        roots.insert(roots.end(), real.begin(), real.end() - 1);
    }

    const std::size_t nonreal = m - real.size();
    if (nonreal > 0) {
        auto discs = aberth(f);
        if (!discs) throw Error(ErrorCode::PrecisionUnreachable, "root iteration collapsed");
        std::vector<Disc> upper;
        std::size_t off_axis = 0;
        for (const auto& d : *discs) {
            if (abs(d.center.imag()) > d.radius) {
                ++off_axis;
                if (d.center.imag() > 0) upper.push_back(d);
            }
        }
        bool disjoint = true;
        for (std::size_t i = 0; i < discs->size() && disjoint; ++i)
            for (std::size_t j = i + 1; j < discs->size(); ++j)
                if (abs((*discs)[i].center - (*discs)[j].center) <= (*discs)[i].radius + (*discs)[j].radius) {
                    disjoint = false;
                    break;
                }
        if (!disjoint || off_axis != nonreal || 2 * upper.size() != nonreal)
            throw Error(ErrorCode::PrecisionUnreachable, "could not certify the non-real roots of " + p.to_string());
        std::sort(upper.begin(), upper.end(), [](const Disc& a, const Disc& b) { return abs(a.center) > abs(b.center); });
        for (const auto& d : upper) {
            const std::complex<double> v(static_cast<double>(d.center.real()), static_cast<double>(d.center.imag()));
            const double rounding = (std::abs(v.real()) + std::abs(v.imag())) * std::numeric_limits<double>::epsilon();
            const double radius = static_cast<double>(d.radius) + rounding;
            if (radius > precision * std::max(std::abs(v), 1.0))
                throw Error(ErrorCode::PrecisionUnreachable, "complex root enclosure too wide");
            RootEnclosure up;
            up.value = v;
            up.radius = radius;
            up.real = false;
            RootEnclosure down = up;
            down.value = std::conj(v);
            roots.push_back(up);
            roots.push_back(down);
        }
    }
    return ConjugateSet(std::move(roots), real.size());
}

/// Exact isolating interval (lo, hi] of the largest real root, if any.
inline std::optional<std::pair<BigRational, BigRational>> largest_real_root_interval(const poly::ZPoly& p) {
    auto ivs = detail::roots::isolate_real(p);
    if (ivs.empty()) return std::nullopt;
    return std::make_pair(ivs.back().lo, ivs.back().hi);
}

} // namespace aperiodica
