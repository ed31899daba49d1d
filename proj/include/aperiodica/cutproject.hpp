#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "aperiodica/matrix.hpp"
#include "aperiodica/numberfield.hpp"

namespace aperiodica {

/// A real space spanned by a selection of embeddings of ℚ(λ). A real embedding
/// contributes one coordinate, a complex one its (Re, Im) plane.
class InternalSpace {
public:
    /// All embeddings except the PF root: the internal space E^{m−1}.
    static InternalSpace internal(FieldPtr field) {
        std::vector<std::size_t> idx;
        const auto& conj = field->conjugates();
        for (std::size_t i = 1; i < conj.real_count(); ++i) idx.push_back(i);
        for (std::size_t i = conj.real_count(); i < conj.size(); i += 2) idx.push_back(i);
        return InternalSpace(std::move(field), std::move(idx));
    }
    /// The PF embedding alone: the physical line.
    static InternalSpace physical(FieldPtr field) { return InternalSpace(std::move(field), {0}); }

    InternalSpace(FieldPtr field, std::vector<std::size_t> embeddings) : field_(std::move(field)), embeddings_(std::move(embeddings)) {
        for (std::size_t i : embeddings_) {
            if (i >= field_->degree()) throw Error(ErrorCode::InvalidArgument, "embedding index out of range");
            dim_ += field_->conjugates()[i].real ? 1 : 2;
        }
    }

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector<std::size_t>& embeddings() const noexcept { return embeddings_; }
    std::size_t dim() const noexcept { return dim_; }
    bool is_real_line() const { return dim_ == 1; }

    std::vector<double> star(const FieldElement& x) const {
        std::vector<double> out;
        out.reserve(dim_);
        for (std::size_t i : embeddings_) {
            const auto v = x.embed(i).value;
            out.push_back(v.real());
            if (!field_->conjugates()[i].real) out.push_back(v.imag());
        }
        return out;
    }

    /// Largest propagated error bound over the coordinates of star(x).
    double star_error(const FieldElement& x) const {
        double e = 0;
        for (std::size_t i : embeddings_) e = std::max(e, x.embed(i).error);
        return e;
    }

    /// Real matrix of multiplication by x in these coordinates (block diagonal).
    RealMatrix multiplier(const FieldElement& x) const {
        RealMatrix q(dim_, dim_, 0.0);
        std::size_t r = 0;
        for (std::size_t i : embeddings_) {
            const auto v = x.embed(i).value;
            if (field_->conjugates()[i].real) {
                q(r, r) = v.real();
                r += 1;
            } else {
                q(r, r) = v.real();
                q(r, r + 1) = -v.imag();
                q(r + 1, r) = v.imag();
                q(r + 1, r + 1) = v.real();
                r += 2;
            }
        }
        return q;
    }

    /// Operator norm (= spectral radius, the blocks being normal) of multiplication by x.
    double contraction(const FieldElement& x) const {
        double rho = 0;
        for (std::size_t i : embeddings_) {
            const Embedding e = x.embed(i);
            rho = std::max(rho, std::abs(e.value) + e.error);
        }
        return rho;
    }

    /// Symbolic coordinate vector of star(x) in terms of the conjugate names, e.g. "(λ₂,λ₃)ᵀ".
    std::vector<std::string> conjugate_names() const {
        static const char* subs[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
        std::vector<std::string> out;
        for (std::size_t i : embeddings_) {
            std::string s = "λ";
            for (char d : std::to_string(i + 1)) s += subs[d - '0'];
            out.push_back(s);
        }
        return out;
    }

private:
    FieldPtr field_;
    std::vector<std::size_t> embeddings_;
    std::size_t dim_ = 0;
};

struct LatticeDeterminant {
    double value = 0;       // |det| from the certified roots
    double error = 0;       // bound propagated from the root enclosures
    double exact = 0;       // sqrt|disc(p)| / 2^{#complex pairs}
    BigInt discriminant;
    std::size_t complex_pairs = 0;
};

/// The lattice Λ = {(x, x*) : x ∈ ℤ[λ]} ⊂ E^1 × E^{m−1}.
class CutProjectScheme {
public:
    explicit CutProjectScheme(FieldPtr field)
        : field_(field), physical_(InternalSpace::physical(field)), internal_(InternalSpace::internal(field)) {}

    const FieldPtr& field() const noexcept { return field_; }
    const InternalSpace& physical() const noexcept { return physical_; }
    const InternalSpace& internal() const noexcept { return internal_; }
    std::size_t degree() const { return field_->degree(); }

    std::vector<double> star(const FieldElement& x) const { return internal_.star(x); }

    /// x⋆ for x given by integer coordinates over the power basis.
    double costar(const std::vector<BigInt>& coords) const { return FieldElement(field_, coords).value(); }

    /// Column i is the lattice vector of λ^i: (λ^i, (λ^i)*).
    RealMatrix generator() const {
        const std::size_t m = degree();
        RealMatrix g(m, m, 0.0);
        FieldElement p = FieldElement::one(field_);
        const FieldElement lam = FieldElement::generator(field_);
        for (std::size_t i = 0; i < m; ++i) {
            g(0, i) = p.value();
            const auto s = star(p);
            for (std::size_t r = 0; r < s.size(); ++r) g(r + 1, i) = s[r];
            p *= lam;
        }
        return g;
    }

    LatticeDeterminant lattice_determinant() const {
        LatticeDeterminant d;
        const std::size_t m = degree();
        d.discriminant = discriminant(field_->minpoly());
        d.complex_pairs = (m - field_->conjugates().real_count()) / 2;
        d.exact = std::sqrt(std::abs(d.discriminant.convert_to<double>())) / std::ldexp(1.0, static_cast<int>(d.complex_pairs));
        d.value = std::abs(determinant(generator()));
        // Hadamard-type bound for the perturbation of the Vandermonde entries
        double colmax = 1, rad = 0;
        for (const auto& r : field_->conjugates().roots()) {
            colmax = std::max(colmax, std::abs(r.value) + r.radius);
            rad = std::max(rad, r.radius);
        }
        d.error = std::pow(colmax, static_cast<double>(m * m)) * static_cast<double>(m * m) * (rad + 1e-15) * std::tgamma(static_cast<double>(m) + 1);
        return d;
    }

private:
    FieldPtr field_;
    InternalSpace physical_, internal_;
};

struct DensityReport {
    double mu_W = 0, det_lambda = 0, dens = 0, ratio = 0, tolerance = 0;
    bool pass = false;
};

/// Checks dens(V) = μ(W)/det Λ to relative tolerance tol.
inline DensityReport window_density_check(double mu_W, double det, double dens_V, double tol) {
    if (!(mu_W > 0) || !(det > 0) || !(dens_V > 0) || !(tol >= 0))
        throw Error(ErrorCode::InvalidArgument, "density check needs positive inputs");
    DensityReport r{mu_W, det, dens_V, mu_W / dens_V, tol, false};
    r.pass = std::abs(mu_W / det - dens_V) <= tol * dens_V;
    return r;
}

} // namespace aperiodica
