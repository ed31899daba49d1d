#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aperiodica/matrix.hpp"
#include "aperiodica/numberfield.hpp"

namespace aperiodica {

using Word = std::vector<std::size_t>;

/// A substitution on a finite ordered alphabet; letters are referred to by index.
class SymbolicSubstitution {
public:
    SymbolicSubstitution() = default;
    SymbolicSubstitution(std::vector<std::string> alphabet, std::vector<Word> rules)
        : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
        if (alphabet_.empty()) throw Error(ErrorCode::InvalidArgument, "empty alphabet");
        if (rules_.size() != alphabet_.size()) throw Error(ErrorCode::MissingRule, "one rule per letter required");
        for (std::size_t i = 0; i < alphabet_.size(); ++i)
            for (std::size_t j = i + 1; j < alphabet_.size(); ++j)
                if (alphabet_[i] == alphabet_[j]) throw Error(ErrorCode::InvalidArgument, "duplicate letter " + alphabet_[i]);
        std::vector<bool> seen(alphabet_.size(), false);
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            if (rules_[i].empty()) throw Error(ErrorCode::InvalidArgument, "rule for " + alphabet_[i] + " is empty");
            for (std::size_t c : rules_[i]) {
                if (c >= alphabet_.size()) throw Error(ErrorCode::UnknownLetter, "letter index out of range");
                seen[c] = true;
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) throw Error(ErrorCode::InvalidArgument, "letter " + alphabet_[i] + " occurs in no rule image");
    }

    /// Builds from letter names, e.g. {{"S", {"M","L"}}, ...} in alphabet order.
    static SymbolicSubstitution from_names(const std::vector<std::pair<std::string, std::vector<std::string>>>& rules) {
        std::vector<std::string> alphabet;
        for (const auto& r : rules) alphabet.push_back(r.first);
        std::vector<Word> words;
        for (const auto& r : rules) {
            Word w;
            for (const auto& name : r.second) {
                auto it = std::find(alphabet.begin(), alphabet.end(), name);
                if (it == alphabet.end()) throw Error(ErrorCode::UnknownLetter, "unknown letter " + name);
                w.push_back(static_cast<std::size_t>(it - alphabet.begin()));
            }
            words.push_back(std::move(w));
        }
        return SymbolicSubstitution(std::move(alphabet), std::move(words));
    }

    std::size_t size() const noexcept { return alphabet_.size(); }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    const std::string& name(std::size_t i) const { return alphabet_.at(i); }
    const Word& rule(std::size_t i) const { return rules_.at(i); }
    const std::vector<Word>& rules() const noexcept { return rules_; }

    std::size_t index(const std::string& name) const {
        auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
        if (it == alphabet_.end()) throw Error(ErrorCode::UnknownLetter, "unknown letter " + name);
        return static_cast<std::size_t>(it - alphabet_.begin());
    }

    Word apply(const Word& w) const {
        Word out;
        for (std::size_t c : w) out.insert(out.end(), rules_[c].begin(), rules_[c].end());
        return out;
    }
    Word iterate(Word w, unsigned k) const {
        for (unsigned i = 0; i < k; ++i) w = apply(w);
        return w;
    }
    SymbolicSubstitution power(unsigned p) const {
        if (p == 0) throw Error(ErrorCode::InvalidArgument, "substitution power must be positive");
        std::vector<Word> rules;
        for (std::size_t i = 0; i < size(); ++i) rules.push_back(iterate(Word{i}, p));
        return SymbolicSubstitution(alphabet_, std::move(rules));
    }

    /// Word as text; letters are separated by spaces unless all names are single characters.
    std::string spell(const Word& w) const {
        const bool compact = std::all_of(alphabet_.begin(), alphabet_.end(), [](const std::string& s) { return s.size() == 1; });
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!compact && i > 0) out += ' ';
            out += alphabet_[w[i]];
        }
        return out;
    }
    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < size(); ++i) {
            if (i) out += ", ";
            out += alphabet_[i] + " → " + spell(rules_[i]);
        }
        return out;
    }

    friend bool operator==(const SymbolicSubstitution& a, const SymbolicSubstitution& b) {
        return a.alphabet_ == b.alphabet_ && a.rules_ == b.rules_;
    }

private:
    std::vector<std::string> alphabet_;
    std::vector<Word> rules_;
};

/// a_ij = number of occurrences of letter j in the rule of letter i.
inline IntMatrix matrix_of(const SymbolicSubstitution& s) {
    IntMatrix a(s.size(), s.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t c : s.rule(i)) a(i, c) += 1;
    return a;
}

/// Some power A^k with k <= (m-1)^2 + 1 is strictly positive.
inline bool is_primitive(const IntMatrix& a) {
    const std::size_t m = a.rows();
    if (m == 0 || a.cols() != m) return false;
    Matrix<int> pattern(m, m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (a(i, j) < 0) return false;
            pattern(i, j) = a(i, j) > 0 ? 1 : 0;
        }
    Matrix<int> power = pattern;
    const std::size_t bound = (m - 1) * (m - 1) + 1;
    for (std::size_t k = 1; k <= bound; ++k) {
        bool positive = true;
        for (std::size_t i = 0; i < m && positive; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (power(i, j) == 0) {
                    positive = false;
                    break;
                }
        if (positive) return true;
        Matrix<int> next = power * pattern;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) next(i, j) = next(i, j) > 0 ? 1 : 0;
        power = std::move(next);
    }
    return false;
}

/// 1 → n, 2 → (n-1) n, …, n → 1 2 … n with letters named "1" … "n".
inline SymbolicSubstitution mn_substitution(int n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "M_n needs n >= 2");
    std::vector<std::string> alphabet;
    for (int i = 1; i <= n; ++i) alphabet.push_back(std::to_string(i));
    std::vector<Word> rules;
    for (int i = 1; i <= n; ++i) {
        Word w;
        for (int j = n - i + 1; j <= n; ++j) w.push_back(static_cast<std::size_t>(j - 1));
        rules.push_back(std::move(w));
    }
    return SymbolicSubstitution(std::move(alphabet), std::move(rules));
}

namespace detail {

/// Determinant over ℚ(λ) by Gaussian elimination.
inline RationalElement field_determinant(std::vector<std::vector<RationalElement>> a, const FieldPtr& field) {
    const std::size_t n = a.size();
    RationalElement det = RationalElement::one(field);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return RationalElement::zero(field);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        const RationalElement inv = a[col][col].inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            const RationalElement f = a[r][col] * inv;
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

inline FieldElement to_integral(const RationalElement& x) {
    std::vector<BigInt> c;
    for (const auto& q : x.coords()) {
        if (!is_integral(q)) throw Error(ErrorCode::InvalidArgument, "expected an element of Z[lambda]");
        c.push_back(boost::multiprecision::numerator(q));
    }
    return FieldElement(x.field(), std::move(c));
}

/// Cofactor matrix entries of λI − A: returns adj(λI − A) in ℤ[λ].
inline std::vector<std::vector<FieldElement>> adjugate_char(const IntMatrix& a, const FieldPtr& field) {
    const std::size_t m = a.rows();
    const RationalElement lam = RationalElement::generator(field);
    std::vector<std::vector<RationalElement>> b(m, std::vector<RationalElement>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            b[i][j] = RationalElement::constant(field, BigRational(-a(i, j)));
            if (i == j) b[i][j] += lam;
        }
    std::vector<std::vector<FieldElement>> adj(m, std::vector<FieldElement>(m));
    if (m == 1) {
        adj[0][0] = FieldElement::one(field);
        return adj;
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<std::vector<RationalElement>> minor;
            for (std::size_t r = 0; r < m; ++r) {
                if (r == i) continue;
                std::vector<RationalElement> row;
                for (std::size_t c = 0; c < m; ++c)
                    if (c != j) row.push_back(b[r][c]);
                minor.push_back(std::move(row));
            }
            RationalElement d = field_determinant(std::move(minor), field);
            if ((i + j) % 2 == 1) d = -d;
            adj[j][i] = to_integral(d); // adjugate is the transposed cofactor matrix
        }
    return adj;
}

inline std::vector<FieldElement> positive_scaled(std::vector<FieldElement> v, std::optional<std::size_t> unit) {
    if (v.empty()) return v;
    if (v.front().value() < 0)
        for (auto& x : v) x = -x;
    std::size_t idx = 0;
    if (unit) idx = *unit;
    else
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i].value() < v[idx].value()) idx = i;
    try {
        const FieldElement inv = v[idx].inverse();
        for (auto& x : v) x = x * inv;
    } catch (const Error&) {
        // the designated tile length is not a unit; keep the unnormalized integral vector
    }
    return v;
}

} // namespace detail

/// Perron–Frobenius data of a primitive substitution matrix (row convention).
/// Lengths satisfy A ℓ = λ ℓ (scale: shortest tile has length 1); frequencies
/// satisfy fᵀ A = λ fᵀ and sum to 1.
struct PFData {
    double pf_value = 0;
    IntPolynomial minpoly;
    FieldPtr field;
    std::vector<FieldElement> exact_lengths;
    std::vector<double> lengths;
    std::vector<double> frequencies;
};

inline FieldPtr pf_field(const IntMatrix& a) {
    return NumberField::create(pf_minimal_polynomial(poly::characteristic_polynomial(a)));
}

/// Exact right eigenvector (tile lengths) in ℤ[λ], normalized by the unit tile when it is a unit.
inline std::vector<FieldElement> exact_right_eigenvector(const IntMatrix& a, const FieldPtr& field, std::optional<std::size_t> unit = std::nullopt) {
    const auto adj = detail::adjugate_char(a, field);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        std::vector<FieldElement> col;
        for (std::size_t i = 0; i < a.rows(); ++i) col.push_back(adj[i][j]);
        if (std::any_of(col.begin(), col.end(), [](const FieldElement& x) { return !x.is_zero(); }))
            return detail::positive_scaled(std::move(col), unit);
    }
    throw Error(ErrorCode::InvalidArgument, "PF eigenvalue is not simple");
}

inline std::vector<FieldElement> exact_left_eigenvector(const IntMatrix& a, const FieldPtr& field) {
    return exact_right_eigenvector(a.transposed(), field);
}

inline PFData pf_data(const IntMatrix& a) {
    if (!is_primitive(a)) throw Error(ErrorCode::NotPrimitive, "substitution matrix is not primitive");
    PFData d;
    d.field = pf_field(a);
    d.minpoly = d.field->minpoly();
    d.pf_value = d.field->pf_value();
    d.exact_lengths = exact_right_eigenvector(a, d.field);
    for (const auto& x : d.exact_lengths) d.lengths.push_back(x.value());
    const auto left = exact_left_eigenvector(a, d.field);
    double total = 0;
    for (const auto& x : left) total += x.value();
    for (const auto& x : left) d.frequencies.push_back(x.value() / total);
    return d;
}

/// (wᵀ v)⁻¹ for volumes w and normalized frequencies v.
inline double density(const std::vector<double>& volumes, const std::vector<double>& frequencies) {
    if (volumes.size() != frequencies.size() || volumes.empty())
        throw Error(ErrorCode::DimensionMismatch, "volume and frequency vectors differ in length");
    double dot = 0;
    for (std::size_t i = 0; i < volumes.size(); ++i) dot += volumes[i] * frequencies[i];
    return 1.0 / dot;
}

/// Which tile endpoint represents a tile in the point set.
enum class Anchor { Right, Left };

/// A substitution together with its inflation field and exact tile lengths.
struct GeometricSubstitution {
    SymbolicSubstitution sigma;
    FieldPtr field;
    std::vector<FieldElement> lengths;
    Anchor anchor = Anchor::Right;

    std::size_t size() const { return sigma.size(); }
    FieldElement lambda() const { return FieldElement::generator(field); }
};

/// Attaches lengths (computed when not supplied) and checks λ·ℓ_i = Σ_j a_ij ℓ_j exactly.
inline GeometricSubstitution realize(const SymbolicSubstitution& s, std::optional<std::vector<FieldElement>> lengths = std::nullopt,
                                     Anchor anchor = Anchor::Right, FieldPtr field = nullptr) {
    const IntMatrix a = matrix_of(s);
    if (!is_primitive(a)) throw Error(ErrorCode::NotPrimitive, "substitution matrix is not primitive");
    GeometricSubstitution g;
    g.sigma = s;
    g.anchor = anchor;
    if (lengths && !lengths->empty()) field = lengths->front().field();
    g.field = field ? field : pf_field(a);
    if (lengths) {
        if (lengths->size() != s.size()) throw Error(ErrorCode::DimensionMismatch, "one length per letter required");
        g.lengths = *lengths;
    } else {
        g.lengths = exact_right_eigenvector(a, g.field);
    }
    const FieldElement lam = g.lambda();
    for (std::size_t i = 0; i < s.size(); ++i) {
        FieldElement sum = FieldElement::zero(g.field);
        for (std::size_t c : s.rule(i)) sum += g.lengths[c];
        if (sum != lam * g.lengths[i])
            throw Error(ErrorCode::InvalidArgument, "lengths are not consistent with the substitution at letter " + s.name(i));
        if (g.lengths[i].value() <= 0) throw Error(ErrorCode::InvalidArgument, "tile lengths must be positive");
    }
    return g;
}

/// Merges every occurrence of the adjacent pair x y into the letter `into`.
inline GeometricSubstitution merge_letters(const GeometricSubstitution& g, std::size_t x, std::size_t y, std::size_t into) {
    const auto& s = g.sigma;
    const std::size_t m = s.size();
    if (x >= m || y >= m || into >= m) throw Error(ErrorCode::UnknownLetter, "merge letter out of range");
    if (into == x || into == y || x == y) throw Error(ErrorCode::MergeIllegal, "merge target must be a third letter");
    if (g.lengths[x] + g.lengths[y] != g.lengths[into]) throw Error(ErrorCode::MergeIllegal, "lengths of the pair do not add up to the target length");

    // x must always be followed by y: check all σ^j images and long words.
    auto check = [&](const Word& w) {
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i] == x && w[i + 1] != y) throw Error(ErrorCode::MergeIllegal, s.name(x) + " is not always followed by " + s.name(y));
    };
    for (std::size_t c = 0; c < m; ++c) {
        Word w{c};
        for (std::size_t j = 1; j <= m + 2; ++j) {
            w = s.apply(w);
            check(w);
        }
        while (w.size() < 10000) w = s.apply(w);
        check(w);
    }

    auto merge = [&](const Word& w) {
        Word out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] == x) {
                if (i + 1 >= w.size() || w[i + 1] != y) throw Error(ErrorCode::MergeIllegal, "rule image ends with the first letter of the pair");
                out.push_back(into);
                ++i;
            } else {
                out.push_back(w[i]);
            }
        }
        return out;
    };
    Word pair_image = s.rule(x);
    pair_image.insert(pair_image.end(), s.rule(y).begin(), s.rule(y).end());
    if (merge(pair_image) != merge(s.rule(into)))
        throw Error(ErrorCode::MergeIllegal, "the merged pair and the target letter substitute differently");

    std::vector<std::size_t> renumber(m);
    std::vector<std::string> alphabet;
    std::vector<FieldElement> lengths;
    for (std::size_t c = 0, k = 0; c < m; ++c) {
        if (c == x) continue;
        renumber[c] = k++;
        alphabet.push_back(s.name(c));
        lengths.push_back(g.lengths[c]);
    }
    std::vector<Word> rules;
    for (std::size_t c = 0; c < m; ++c) {
        if (c == x) continue;
        Word w = merge(s.rule(c));
        for (auto& letter : w) letter = renumber[letter];
        rules.push_back(std::move(w));
    }
    return realize(SymbolicSubstitution(std::move(alphabet), std::move(rules)), lengths, g.anchor, g.field);
}

inline GeometricSubstitution merge_letters(const GeometricSubstitution& g, const std::string& x, const std::string& y, const std::string& into) {
    return merge_letters(g, g.sigma.index(x), g.sigma.index(y), g.sigma.index(into));
}

/// Legal seed a|b for a fixed point of σ^power.
struct Seed {
    std::size_t left = 0, right = 0;
    unsigned power = 1;
};

/// Two-letter words occurring in some iterate σ^j(c).
inline std::vector<std::vector<bool>> legal_pairs(const SymbolicSubstitution& s) {
    const std::size_t m = s.size();
    std::vector<std::vector<bool>> legal(m, std::vector<bool>(m, false));
    for (std::size_t c = 0; c < m; ++c) {
        Word w{c};
        for (std::size_t j = 0; j < 64 && (j < m + 3 || w.size() < 2000); ++j) {
            w = s.apply(w);
            if (w.size() > 200000) break;
        }
        for (std::size_t i = 0; i + 1 < w.size(); ++i) legal[w[i]][w[i + 1]] = true;
    }
    return legal;
}

/// Smallest power p admitting a legal seed a|b with σ^p(a) ending in a and
/// σ^p(b) starting with b. Among those, a == b is preferred, then alphabet order of b, a.
inline Seed find_seed(const SymbolicSubstitution& s) {
    const std::size_t m = s.size();
    const auto legal = legal_pairs(s);
    std::vector<std::size_t> first(m), last(m);
    for (std::size_t c = 0; c < m; ++c) {
        first[c] = s.rule(c).front();
        last[c] = s.rule(c).back();
    }
    std::vector<std::size_t> f = first, l = last; // letter maps of σ^p
    for (unsigned p = 1; p <= 5040; ++p) {
        std::optional<Seed> best;
        for (std::size_t b = 0; b < m; ++b) {
            if (f[b] != b) continue;
            for (std::size_t a = 0; a < m; ++a) {
                if (l[a] != a || !legal[a][b]) continue;
                Seed cand{a, b, p};
                if (!best) best = cand;
                else if (a == b && best->left != best->right) best = cand;
            }
        }
        if (best) return *best;
        for (std::size_t c = 0; c < m; ++c) {
            f[c] = first[f[c]];
            l[c] = last[l[c]];
        }
    }
    throw Error(ErrorCode::NoLegalSeed, "no legal fixed-point seed found");
}

/// A finite window of a fixed-point tiling: tiles letters[i] occupy [left[i], left[i] + ℓ].
struct IntervalTiling {
    Word letters;
    std::size_t origin = 0; // index of the first tile right of 0
    std::vector<FieldElement> left;
    std::vector<FieldElement> lengths;
    Seed seed;
    unsigned generations = 0;

    std::size_t size() const { return letters.size(); }
    FieldElement right_endpoint(std::size_t i) const { return left[i] + lengths[letters[i]]; }
    FieldElement point(std::size_t i, Anchor anchor) const { return anchor == Anchor::Right ? right_endpoint(i) : left[i]; }
};

/// σ^{p·k}(a) | σ^{p·k}(b) with the junction at 0.
inline IntervalTiling fixed_point_tiling(const GeometricSubstitution& g, std::optional<Seed> seed, unsigned generations) {
    const Seed sd = seed ? *seed : find_seed(g.sigma);
    const auto& s = g.sigma;
    if (sd.left >= s.size() || sd.right >= s.size()) throw Error(ErrorCode::UnknownLetter, "seed letter out of range");
    const SymbolicSubstitution sp = s.power(sd.power);
    if (sp.rule(sd.left).back() != sd.left || sp.rule(sd.right).front() != sd.right)
        throw Error(ErrorCode::NoLegalSeed, "seed is not fixed by the substitution power");
    Word lw{sd.left}, rw{sd.right};
    for (unsigned k = 0; k < generations; ++k) {
        lw = sp.apply(lw);
        rw = sp.apply(rw);
    }
    IntervalTiling t;
    t.seed = sd;
    t.generations = generations;
    t.lengths = g.lengths;
    t.letters = lw;
    t.letters.insert(t.letters.end(), rw.begin(), rw.end());
    t.origin = lw.size();
    t.left.resize(t.letters.size(), FieldElement::zero(g.field));
    FieldElement pos = FieldElement::zero(g.field);
    for (std::size_t i = t.origin; i-- > 0;) {
        pos -= g.lengths[t.letters[i]];
        t.left[i] = pos;
    }
    pos = FieldElement::zero(g.field);
    for (std::size_t i = t.origin; i < t.letters.size(); ++i) {
        t.left[i] = pos;
        pos += g.lengths[t.letters[i]];
    }
    return t;
}

} // namespace aperiodica
