#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aperiodica/factor.hpp"
#include "aperiodica/polynomial.hpp"
#include "aperiodica/roots.hpp"

namespace aperiodica {

/// ℚ(λ) for λ a root of a monic squarefree integer polynomial, together with
/// certified enclosures of all its roots. Shared immutably by its elements.
class NumberField {
public:
    static std::shared_ptr<const NumberField> create(IntPolynomial minpoly, double precision = 1e-15) {
        auto conj = isolate_roots(minpoly, precision);
        return std::shared_ptr<const NumberField>(new NumberField(std::move(minpoly), std::move(conj)));
    }

    const IntPolynomial& minpoly() const noexcept { return minpoly_; }
    std::size_t degree() const noexcept { return static_cast<std::size_t>(minpoly_.degree()); }
    const ConjugateSet& conjugates() const noexcept { return conj_; }
    double pf_value() const { return conj_.pf_value(); }

    friend bool same_field(const NumberField& a, const NumberField& b) { return &a == &b || a.minpoly_ == b.minpoly_; }

private:
    NumberField(IntPolynomial p, ConjugateSet c) : minpoly_(std::move(p)), conj_(std::move(c)) {}

    IntPolynomial minpoly_;
    ConjugateSet conj_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// A numeric value with an absolute error bound.
struct Embedding {
    std::complex<double> value;
    double error = 0.0;
};

namespace detail {

/// Solves A x = b over ℚ by Gauss–Jordan elimination; nullopt if singular.
inline std::optional<std::vector<BigRational>> solve_rational(std::vector<std::vector<BigRational>> a, std::vector<BigRational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const BigRational inv = 1 / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const BigRational f = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

inline bool is_integral(const BigRational& q) { return boost::multiprecision::denominator(q) == 1; }

} // namespace detail

/// Element Σ c_k λ^k of ℚ(λ) with coefficients of type C over the power basis.
/// C = BigInt gives ℤ[λ]; C = BigRational gives ℚ(λ).
template <typename C>
class BasicFieldElement {
public:
    BasicFieldElement() = default;
    BasicFieldElement(FieldPtr field, std::vector<C> coords) : field_(std::move(field)), coords_(std::move(coords)) {
        if (!field_) throw Error(ErrorCode::InvalidArgument, "field element without field");
        if (coords_.size() != field_->degree())
            throw Error(ErrorCode::DimensionMismatch, "coordinate vector length must equal the field degree");
    }

    static BasicFieldElement zero(FieldPtr f) { return constant(std::move(f), C(0)); }
    static BasicFieldElement one(FieldPtr f) { return constant(std::move(f), C(1)); }
    static BasicFieldElement constant(FieldPtr f, C value) {
        std::vector<C> c(f->degree(), C(0));
        c[0] = std::move(value);
        return BasicFieldElement(std::move(f), std::move(c));
    }
    /// λ itself (for degree 1 fields, the rational root).
    static BasicFieldElement generator(FieldPtr f) {
        std::vector<C> c(f->degree(), C(0));
        if (c.size() == 1) c[0] = C(-f->minpoly().coeffs()[0]);
        else c[1] = C(1);
        return BasicFieldElement(std::move(f), std::move(c));
    }
    static BasicFieldElement from_ints(FieldPtr f, std::initializer_list<long long> values) {
        std::vector<C> c;
        for (long long v : values) c.emplace_back(v);
        return BasicFieldElement(std::move(f), std::move(c));
    }

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector<C>& coords() const noexcept { return coords_; }
    bool is_zero() const {
        return std::all_of(coords_.begin(), coords_.end(), [](const C& c) { return c == 0; });
    }

    friend BasicFieldElement operator+(const BasicFieldElement& x, const BasicFieldElement& y) {
        check_same(x, y);
        BasicFieldElement r = x;
        for (std::size_t i = 0; i < r.coords_.size(); ++i) r.coords_[i] += y.coords_[i];
        return r;
    }
    friend BasicFieldElement operator-(const BasicFieldElement& x, const BasicFieldElement& y) {
        check_same(x, y);
        BasicFieldElement r = x;
        for (std::size_t i = 0; i < r.coords_.size(); ++i) r.coords_[i] -= y.coords_[i];
        return r;
    }
    friend BasicFieldElement operator-(const BasicFieldElement& x) {
        BasicFieldElement r = x;
        for (auto& c : r.coords_) c = -c;
        return r;
    }
    friend BasicFieldElement operator*(const BasicFieldElement& x, const BasicFieldElement& y) {
        check_same(x, y);
        const std::size_t m = x.coords_.size();
        std::vector<C> prod(2 * m - 1, C(0));
        for (std::size_t i = 0; i < m; ++i) {
            if (x.coords_[i] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) prod[i + j] += x.coords_[i] * y.coords_[j];
        }
        // λ^k = -Σ_{i<m} p_i λ^{k-m+i} for k >= m
        const auto& p = x.field_->minpoly().coeffs();
        for (std::size_t k = prod.size(); k-- > m;) {
            const C top = prod[k];
            if (top == 0) continue;
            prod[k] = C(0);
            for (std::size_t i = 0; i < m; ++i) prod[k - m + i] -= top * C(p[i]);
        }
        prod.resize(m);
        return BasicFieldElement(x.field_, std::move(prod));
    }
    friend BasicFieldElement operator*(const C& s, const BasicFieldElement& x) {
        BasicFieldElement r = x;
        for (auto& c : r.coords_) c *= s;
        return r;
    }
    BasicFieldElement& operator+=(const BasicFieldElement& y) { return *this = *this + y; }
    BasicFieldElement& operator-=(const BasicFieldElement& y) { return *this = *this - y; }
    BasicFieldElement& operator*=(const BasicFieldElement& y) { return *this = *this * y; }

    friend bool operator==(const BasicFieldElement& x, const BasicFieldElement& y) {
        return x.field_ && y.field_ && same_field(*x.field_, *y.field_) && x.coords_ == y.coords_;
    }
    friend bool operator!=(const BasicFieldElement& x, const BasicFieldElement& y) { return !(x == y); }
    friend bool operator<(const BasicFieldElement& x, const BasicFieldElement& y) { return x.coords_ < y.coords_; }

    /// Matrix of multiplication by this element: column j holds the coords of x·λ^j.
    std::vector<std::vector<BigRational>> multiplication_matrix() const {
        const std::size_t m = coords_.size();
        std::vector<std::vector<BigRational>> a(m, std::vector<BigRational>(m));
        BasicFieldElement col = *this;
        const BasicFieldElement lam = generator(field_);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < m; ++i) a[i][j] = BigRational(col.coords_[i]);
            if (j + 1 < m) col = col * lam;
        }
        return a;
    }

    /// Multiplicative inverse. For ℤ[λ] elements, throws NotAUnit when the inverse is not integral.
    BasicFieldElement inverse() const {
        if (is_zero()) throw Error(ErrorCode::ZeroElement, "inverse of zero");
        const std::size_t m = coords_.size();
        std::vector<BigRational> rhs(m, BigRational(0));
        rhs[0] = 1;
        auto sol = detail::solve_rational(multiplication_matrix(), rhs);
        if (!sol) throw Error(ErrorCode::ZeroElement, "element is a zero divisor");
        std::vector<C> out;
        out.reserve(m);
        for (const auto& q : *sol) {
            if constexpr (std::is_same_v<C, BigInt>) {
                if (!detail::is_integral(q)) throw Error(ErrorCode::NotAUnit, "element is not a unit of Z[lambda]");
                out.push_back(boost::multiprecision::numerator(q));
            } else {
                out.push_back(q);
            }
        }
        return BasicFieldElement(field_, std::move(out));
    }

    BasicFieldElement pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        BasicFieldElement result = one(field_), base = *this;
        while (e) {
            if (e & 1) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return result;
    }

    /// Norm N(x) = det of the multiplication matrix.
    BigRational norm() const {
        auto a = multiplication_matrix();
        const std::size_t m = a.size();
        BigRational det = 1;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t pivot = col;
            while (pivot < m && a[pivot][col] == 0) ++pivot;
            if (pivot == m) return 0;
            if (pivot != col) {
                std::swap(a[pivot], a[col]);
                det = -det;
            }
            det *= a[col][col];
            for (std::size_t r = col + 1; r < m; ++r) {
                const BigRational f = a[r][col] / a[col][col];
                for (std::size_t j = col; j < m; ++j) a[r][j] -= f * a[col][j];
            }
        }
        return det;
    }

    /// Value at conjugate root i with propagated error bound.
    Embedding embed(std::size_t root_index) const {
        const auto& conj = field_->conjugates();
        if (root_index >= conj.size()) throw Error(ErrorCode::InvalidArgument, "conjugate index out of range");
        const RootEnclosure& r = conj[root_index];
        const std::complex<long double> z(r.value.real(), r.value.imag());
        const long double rho = r.radius;
        const long double az = std::abs(z);
        std::complex<long double> value = 0;
        std::complex<long double> power = 1;
        long double err = 0, magnitude = 0;
        long double apow = 1; // |z|^k
        long double aprev = 0; // (|z|+ρ)^{k-1}
        for (std::size_t k = 0; k < coords_.size(); ++k) {
            const long double ck = static_cast<long double>(coords_[k]);
            value += ck * power;
            magnitude += std::abs(ck) * apow;
            // |r^k - z^k| <= k (|z|+ρ)^{k-1} ρ
            if (k > 0) err += std::abs(ck) * static_cast<long double>(k) * aprev * rho;
            aprev = (k == 0) ? 1.0L : aprev * (az + rho);
            power *= z;
            apow *= az;
        }
        const long double rounding = magnitude * 8.0L * static_cast<long double>(coords_.size() + 1) * std::numeric_limits<double>::epsilon();
        Embedding e;
        e.value = {static_cast<double>(value.real()), static_cast<double>(value.imag())};
        e.error = static_cast<double>(err + rounding);
        if (r.real) e.value.imag(0.0);
        return e;
    }

    /// Real value at the Perron–Frobenius root.
    double value() const { return embed(field_->conjugates().pf_index()).value.real(); }

    template <typename D>
    BasicFieldElement<D> cast() const {
        std::vector<D> out;
        for (const auto& c : coords_) out.push_back(D(c));
        return BasicFieldElement<D>(field_, std::move(out));
    }

    /// Human-readable form in λ, highest power first, e.g. "λ² − 2λ".
    std::string to_string(const std::string& var = "λ") const {
        static const char* superscripts[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
        std::ostringstream out;
        bool first = true;
        for (std::size_t k = coords_.size(); k-- > 0;) {
            C c = coords_[k];
            if (c == 0) continue;
            const bool negative = c < 0;
            if (negative) c = -c;
            if (first) out << (negative ? "−" : "");
            else out << (negative ? " − " : " + ");
            first = false;
            if (c != 1 || k == 0) out << c;
            if (k >= 1) out << var;
            if (k >= 2) {
                std::string digits = std::to_string(k), sup;
                for (char d : digits) sup += superscripts[d - '0'];
                out << sup;
            }
        }
        if (first) out << "0";
        return out.str();
    }

private:
    static void check_same(const BasicFieldElement& x, const BasicFieldElement& y) {
        if (!x.field_ || !y.field_ || !same_field(*x.field_, *y.field_))
            throw Error(ErrorCode::FieldMismatch, "operands belong to different fields");
    }

    FieldPtr field_;
    std::vector<C> coords_;
};

using FieldElement = BasicFieldElement<BigInt>;
using RationalElement = BasicFieldElement<BigRational>;

inline FieldElement fe_add(const FieldElement& x, const FieldElement& y) { return x + y; }
inline FieldElement fe_mul(const FieldElement& x, const FieldElement& y) { return x * y; }
inline FieldElement fe_inverse(const FieldElement& x) { return x.inverse(); }
inline Embedding embed(const FieldElement& x, std::size_t root_index) { return x.embed(root_index); }

/// Exact sign of a ℚ(λ) element under the real embedding root_index (0 = PF root).
/// Refines the isolating interval of that root until the sign is decided.
template <typename C>
int sign(const BasicFieldElement<C>& x, std::size_t root_index = 0) {
    if (x.is_zero()) return 0;
    const auto& field = *x.field();
    const RootEnclosure& r = field.conjugates()[root_index];
    if (!r.real) throw Error(ErrorCode::InvalidArgument, "sign needs a real embedding");
    const Embedding e = x.embed(root_index);
    if (std::abs(e.value.real()) > e.error) return e.value.real() > 0 ? 1 : -1;
    // Fall back to exact interval arithmetic on the isolating interval.
    poly::ZPoly xp; // integer polynomial proportional to x
    BigInt den = 1;
    for (const auto& c : x.coords()) den = boost::multiprecision::lcm(den, BigInt(boost::multiprecision::denominator(BigRational(c))));
    for (const auto& c : x.coords()) {
        const BigRational q = BigRational(c) * BigRational(den);
        xp.push_back(boost::multiprecision::numerator(q));
    }
    poly::trim(xp);
    const poly::ZPoly& p = field.minpoly().coeffs();
    // λ is not a root of xp (x != 0 and p irreducible dividing nothing of lower degree only when
    // p is the minimal polynomial); refine until xp has no root in the interval.
    detail::roots::Interval iv{r.lo, r.hi};
    if (iv.lo == iv.hi) return detail::roots::sign_at(xp, iv.lo);
    const auto chain = detail::roots::sturm_chain(xp);
    for (int iter = 0; iter < 4000; ++iter) {
        const int inside = detail::roots::variations(chain, iv.lo) - detail::roots::variations(chain, iv.hi);
        const int s = detail::roots::sign_at(xp, iv.hi);
        if (inside == 0 && s != 0) return s;
        iv = detail::roots::refine(p, iv, (iv.hi - iv.lo) / 4);
        if (iv.lo == iv.hi) return detail::roots::sign_at(xp, iv.lo);
    }
    throw Error(ErrorCode::PrecisionUnreachable, "could not decide the sign of a field element");
}

enum class PisotClass { PV, Salem, Neither, Indeterminate };

constexpr std::string_view to_string(PisotClass c) {
    switch (c) {
    case PisotClass::PV: return "PV";
    case PisotClass::Salem: return "Salem";
    case PisotClass::Neither: return "Neither";
    case PisotClass::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

namespace detail {

inline PisotClass classify_with(const IntPolynomial& p, const ConjugateSet& conj) {
    if (conj.real_count() == 0) return PisotClass::Neither;
    const RootEnclosure& top = conj[0];
    if (top.lo > 1) {
        // certain λ > 1
    } else if (top.hi <= 1) {
        return PisotClass::Neither;
    } else {
        return PisotClass::Indeterminate;
    }
    bool all_inside = true;
    bool any_outside = false;
    std::vector<std::size_t> straddling;
    for (std::size_t i = 1; i < conj.size(); ++i) {
        const double a = std::abs(conj[i].value);
        const double r = conj[i].radius;
        if (a + r < 1.0) continue;
        all_inside = false;
        if (a - r > 1.0) any_outside = true;
        else straddling.push_back(i);
    }
    if (all_inside) return PisotClass::PV;
    if (any_outside) return PisotClass::Neither;
    // Straddling enclosures: a self-reciprocal polynomial maps its root set to itself under
    // z -> 1/conj(z); if the image of an enclosure meets no other enclosure, that root is on the circle.
    if (!is_self_reciprocal(p.coeffs())) return PisotClass::Indeterminate;
    for (std::size_t i : straddling) {
        const std::complex<double> c = conj[i].value;
        const double rho = conj[i].radius;
        const double denom = std::norm(c) - rho * rho;
        if (denom <= 0) return PisotClass::Indeterminate;
        const std::complex<double> ic = c / denom;
        const double ir = rho / denom;
        for (std::size_t j = 0; j < conj.size(); ++j) {
            if (j == i) continue;
            if (std::abs(conj[j].value - ic) <= conj[j].radius + ir) return PisotClass::Indeterminate;
        }
    }
    return PisotClass::Salem;
}

} // namespace detail

/// PV / Salem classification of the largest real root of an irreducible monic polynomial.
inline PisotClass classify_pisot(const IntPolynomial& p, double precision = 1e-15) {
    PisotClass c = detail::classify_with(p, isolate_roots(p, precision));
    if (c == PisotClass::Indeterminate) c = detail::classify_with(p, isolate_roots(p, std::ldexp(1.0, -51)));
    return c;
}

/// The irreducible factor of a monic polynomial that vanishes at its largest real root.
inline IntPolynomial pf_minimal_polynomial(const poly::ZPoly& charpoly) {
    auto factors = irreducible_factors(charpoly);
    poly::ZPoly squarefree{1};
    for (const auto& f : factors) squarefree = poly::mul(squarefree, f);
    auto iv = largest_real_root_interval(squarefree);
    if (!iv) throw Error(ErrorCode::InvalidArgument, "polynomial has no real root");
    auto [lo, hi] = *iv;
    for (const auto& f : factors) {
        if (detail::roots::sign_at(f, hi) == 0) return IntPolynomial(f);
    }
    for (const auto& f : factors) {
        const int a = detail::roots::sign_at(f, lo), b = detail::roots::sign_at(f, hi);
        if (a != 0 && a != b) return IntPolynomial(f);
    }
    throw Error(ErrorCode::InvalidArgument, "no factor vanishes at the largest root");
}

} // namespace aperiodica
