#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aperiodica/error.hpp"
#include "aperiodica/matrix.hpp"

namespace aperiodica {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Dense integer polynomial algebra on coefficient vectors, constant term first.
/// The zero polynomial is the empty vector.
namespace poly {

using ZPoly = std::vector<BigInt>;

inline void trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

inline const BigInt& leading(const ZPoly& p) { return p.back(); }

inline ZPoly from_ints(std::initializer_list<long long> c) {
    ZPoly p;
    for (long long v : c) p.emplace_back(v);
    trim(p);
    return p;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

inline ZPoly scale(const ZPoly& a, const BigInt& s) {
    ZPoly r(a);
    for (auto& c : r) c *= s;
    trim(r);
    return r;
}

inline ZPoly derivative(const ZPoly& p) {
    if (p.size() <= 1) return {};
    ZPoly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long long>(i);
    trim(d);
    return d;
}

/// p(-x)
inline ZPoly reflect(const ZPoly& p) {
    ZPoly r(p);
    for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
    return r;
}

/// x^deg · p(1/x)
inline ZPoly reversed(const ZPoly& p) {
    ZPoly r(p.rbegin(), p.rend());
    trim(r);
    return r;
}

inline BigInt content(const ZPoly& p) {
    BigInt g = 0;
    for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
    return g;
}

/// Divides out the content and normalizes to a positive leading coefficient.
inline ZPoly primitive(const ZPoly& p) {
    if (p.empty()) return p;
    BigInt g = content(p);
    if (leading(p) < 0) g = -g;
    ZPoly r(p);
    for (auto& c : r) c /= g;
    return r;
}

/// |lc(b)|^(deg a - deg b + 1) · a  mod  b. The positive multiplier keeps signs,
/// which the Sturm chain relies on.
inline ZPoly pseudo_remainder(ZPoly a, const ZPoly& b) {
    if (b.empty()) throw Error(ErrorCode::InvalidArgument, "division by zero polynomial");
    const BigInt lc = abs(leading(b));
    const int db = degree(b);
    while (!a.empty() && degree(a) >= db) {
        const BigInt la = leading(a);
        const int shift = degree(a) - db;
        for (auto& c : a) c *= lc;
        // subtract (la * sign(lc(b))) x^shift b  (scaled so the leading terms cancel)
        const BigInt f = leading(b) > 0 ? la : BigInt(-la);
        for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= f * b[static_cast<std::size_t>(i)];
        trim(a);
    }
    return a;
}

/// Exact division over ℤ[x]; returns nullopt if b does not divide a with integral quotient.
inline std::optional<ZPoly> exact_divide(ZPoly a, const ZPoly& b) {
    if (b.empty()) throw Error(ErrorCode::InvalidArgument, "division by zero polynomial");
    if (a.empty()) return ZPoly{};
    if (degree(a) < degree(b)) return std::nullopt;
    const int db = degree(b);
    ZPoly q(static_cast<std::size_t>(degree(a) - db + 1));
    while (!a.empty() && degree(a) >= db) {
        const BigInt& la = leading(a);
        if (la % leading(b) != 0) return std::nullopt;
        const BigInt f = la / leading(b);
        const int shift = degree(a) - db;
        q[static_cast<std::size_t>(shift)] = f;
        for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= f * b[static_cast<std::size_t>(i)];
        trim(a);
    }
    if (!a.empty()) return std::nullopt;
    trim(q);
    return q;
}

/// gcd in ℚ[x], returned as a primitive integer polynomial with positive leading coefficient.
inline ZPoly gcd(ZPoly a, ZPoly b) {
    a = primitive(a);
    b = primitive(b);
    if (degree(a) < degree(b)) std::swap(a, b);
    while (!b.empty()) {
        ZPoly r = primitive(pseudo_remainder(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline BigRational evaluate(const ZPoly& p, const BigRational& x) {
    BigRational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + BigRational(*it);
    return acc;
}

inline int sign_at(const ZPoly& p, const BigRational& x) {
    const BigRational v = evaluate(p, x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

template <typename Scalar>
Scalar evaluate_numeric(const ZPoly& p, const Scalar& x) {
    Scalar acc = Scalar(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + Scalar(static_cast<double>(*it));
    return acc;
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    BigInt sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline BigInt resultant(const ZPoly& p, const ZPoly& q) {
    const int m = degree(p), n = degree(q);
    if (m < 0 || n < 0) return 0;
    const std::size_t size = static_cast<std::size_t>(m + n);
    if (size == 0) return 1;
    std::vector<std::vector<BigInt>> s(size, std::vector<BigInt>(size, 0));
    // Rows hold coefficients from the leading term down.
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] = p[static_cast<std::size_t>(m - i)];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) s[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + i)] = q[static_cast<std::size_t>(n - i)];
    return bareiss_determinant(std::move(s));
}

/// Characteristic polynomial det(xI - A) by Faddeev–LeVerrier; the divisions are exact.
inline ZPoly characteristic_polynomial(const IntMatrix& a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw Error(ErrorCode::DimensionMismatch, "characteristic polynomial of non-square matrix");
    using BMat = std::vector<std::vector<BigInt>>;
    BMat A(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A[i][j] = a(i, j);
    ZPoly c(n + 1);
    c[n] = 1;
    BMat M(n, std::vector<BigInt>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        // M <- A*M + c_{n-k+1} I
        BMat next(n, std::vector<BigInt>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (A[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) next[i][j] += A[i][l] * M[l][j];
            }
        for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        M = std::move(next);
        BigInt trace = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) trace += A[i][l] * M[l][i];
        c[n - k] = -trace / static_cast<long long>(k);
    }
    return c;
}

inline std::string to_string(const ZPoly& p, const std::string& var = "x") {
    if (p.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(p); i >= 0; --i) {
        BigInt c = p[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) out << '-';
        } else {
            out << (negative ? " - " : " + ");
        }
        first = false;
        if (c != 1 || i == 0) out << c;
        if (i >= 1) out << var;
        if (i >= 2) out << '^' << i;
    }
    return out.str();
}

} // namespace poly

/// Monic integer polynomial of degree ≥ 1, constant term first.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(poly::ZPoly coeffs) : coeffs_(std::move(coeffs)) {
        poly::trim(coeffs_);
        if (coeffs_.size() < 2) throw Error(ErrorCode::InvalidArgument, "polynomial must have degree >= 1");
        if (coeffs_.back() != 1) throw Error(ErrorCode::InvalidArgument, "polynomial must be monic");
    }
    IntPolynomial(std::initializer_list<long long> coeffs) : IntPolynomial(poly::from_ints(coeffs)) {}

    const poly::ZPoly& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return poly::degree(coeffs_); }
    std::string to_string() const { return poly::to_string(coeffs_); }

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const IntPolynomial& a, const IntPolynomial& b) { return !(a == b); }

private:
    poly::ZPoly coeffs_;
};

inline bool is_squarefree(const poly::ZPoly& p) {
    return poly::degree(poly::gcd(p, poly::derivative(p))) == 0;
}

/// Discriminant of a monic polynomial: (-1)^{m(m-1)/2} Res(p, p').
inline BigInt discriminant(const IntPolynomial& p) {
    const int m = p.degree();
    BigInt r = poly::resultant(p.coeffs(), poly::derivative(p.coeffs()));
    if ((m * (m - 1) / 2) % 2 != 0) r = -r;
    return r;
}

/// True iff x^m p(1/x) = ±p(x).
inline bool is_self_reciprocal(const poly::ZPoly& p) {
    const poly::ZPoly r = poly::reversed(p);
    if (r.size() != p.size()) return false;
    if (r == p) return true;
    poly::ZPoly neg(p);
    for (auto& c : neg) c = -c;
    return r == neg;
}

} // namespace aperiodica
