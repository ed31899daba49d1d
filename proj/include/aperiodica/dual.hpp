#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "aperiodica/rauzy.hpp"

namespace aperiodica {

/// Child tile W_type + offset* inside the expanded parent.
struct DualChild {
    std::size_t type = 0;
    FieldElement offset;
};

/// A placed dual tile W_type + translation*, translation exact in ℤ[λ].
struct DualTile {
    std::size_t type = 0;
    FieldElement translation;

    friend bool operator<(const DualTile& a, const DualTile& b) {
        return a.type != b.type ? a.type < b.type : a.translation.coords() < b.translation.coords();
    }
    friend bool operator==(const DualTile& a, const DualTile& b) { return a.type == b.type && a.translation == b.translation; }
};

/// The substitution σ′ on the internal space with expansion Q′ = Q⁻¹.
class DualSubstitution {
public:
    DualSubstitution(std::vector<std::string> types, InternalSpace space, FieldElement lambda, std::vector<SetMap> primal,
                     std::vector<std::vector<DualChild>> rules, std::vector<FieldElement> control)
        : types_(std::move(types)), space_(std::move(space)), lambda_(std::move(lambda)), inverse_(lambda_.inverse()),
          primal_(std::move(primal)), rules_(std::move(rules)), control_(std::move(control)) {}

    const std::vector<std::string>& types() const noexcept { return types_; }
    std::size_t size() const { return types_.size(); }
    const InternalSpace& space() const noexcept { return space_; }
    const FieldPtr& field() const { return space_.field(); }
    const FieldElement& lambda() const noexcept { return lambda_; }
    /// λ⁻¹, whose star image is the expansion Q′.
    const FieldElement& expansion() const noexcept { return inverse_; }
    RealMatrix expansion_matrix() const { return space_.multiplier(inverse_); }
    const std::vector<SetMap>& primal_maps() const noexcept { return primal_; }
    const std::vector<DualChild>& rule(std::size_t t) const { return rules_.at(t); }
    /// Control point c_t of each prototile, as an element of ℤ[λ].
    const std::vector<FieldElement>& control_points() const noexcept { return control_; }

    /// Row convention: entry (i, j) counts children of type j in σ′(W_i).
    IntMatrix matrix() const {
        IntMatrix a(size(), size(), 0);
        for (std::size_t i = 0; i < size(); ++i)
            for (const auto& c : rules_[i]) a(i, c.type) += 1;
        return a;
    }

    std::vector<DualTile> apply(const DualTile& tile) const {
        std::vector<DualTile> out;
        for (const auto& c : rules_[tile.type]) out.push_back({c.type, c.offset + inverse_ * tile.translation});
        return out;
    }

    FieldElement point(const DualTile& tile) const { return control_[tile.type] + tile.translation; }

    /// "σ′(W_L) = {W_L, W_M, …}" with children sorted by type, untranslated ones first.
    std::string rule_string(std::size_t t) const {
        auto children = rules_[t];
        std::stable_sort(children.begin(), children.end(), [](const DualChild& a, const DualChild& b) {
            if (a.offset.is_zero() != b.offset.is_zero()) return a.offset.is_zero();
            return a.type < b.type;
        });
        std::string out = "σ′(W_" + types_[t] + ") = {";
        for (std::size_t i = 0; i < children.size(); ++i) {
            out += (i ? ", W_" : "W_") + types_[children[i].type];
            out += detail::signed_join(detail::star_to_string(children[i].offset, space_));
        }
        return out + "}";
    }

private:
    std::vector<std::string> types_;
    InternalSpace space_;
    FieldElement lambda_, inverse_;
    std::vector<SetMap> primal_;
    std::vector<std::vector<DualChild>> rules_;
    std::vector<FieldElement> control_;
};

namespace detail {

/// Control points with c_ref = 0 and c_t = λc_s + o along a spanning tree of maps t ← s.
inline std::vector<FieldElement> control_points(const std::vector<SetMap>& maps, std::size_t types, std::size_t ref, const FieldPtr& field) {
    std::vector<std::optional<FieldElement>> c(types);
    c[ref] = FieldElement::zero(field);
    std::queue<std::size_t> todo;
    todo.push(ref);
    while (!todo.empty()) {
        const std::size_t s = todo.front();
        todo.pop();
        for (const auto& m : maps)
            if (m.source == s && !c[m.target]) {
                c[m.target] = m.multiplier * *c[s] + m.offset;
                todo.push(m.target);
            }
    }
    std::vector<FieldElement> out;
    for (std::size_t t = 0; t < types; ++t) {
        if (!c[t]) throw Error(ErrorCode::NotPrimitive, "type " + std::to_string(t) + " unreachable from the reference type");
        out.push_back(*c[t]);
    }
    return out;
}

} // namespace detail

/// Inverts the starred system: a map V_t* ⊇ QV_s* + o* becomes the child W_s + (λ⁻¹o)* of σ′(W_t).
inline DualSubstitution dualize(const GraphIFS& ifs) {
    const auto& maps = ifs.maps();
    if (maps.empty()) throw Error(ErrorCode::NotInvertible, "empty system");
    const FieldElement lam = maps.front().multiplier;
    for (const auto& m : maps)
        if (m.multiplier != lam) throw Error(ErrorCode::NotInvertible, "maps do not share one linear part");
    FieldElement inv;
    try {
        inv = lam.inverse();
    } catch (const Error&) {
        throw Error(ErrorCode::NotInvertible, "inflation factor is not a unit of the ring of integers");
    }
    const FieldPtr& field = ifs.space().field();
    for (std::size_t i : ifs.space().embeddings())
        if (std::abs(inv.embed(i).value) <= 1) throw Error(ErrorCode::NotInvertible, "dual map is not expanding");
    const std::size_t T = ifs.types().size();
    std::vector<std::vector<DualChild>> rules(T);
    for (const auto& m : maps) rules[m.target].push_back({m.source, inv * m.offset});
    // reference type: one with an untranslated self-map, else the first
    std::size_t ref = 0;
    for (const auto& m : maps)
        if (m.target == m.source && m.offset.is_zero()) {
            ref = m.target;
            break;
        }
    auto control = detail::control_points(maps, T, ref, field);
    return DualSubstitution(ifs.types(), ifs.space(), lam, maps, std::move(rules), std::move(control));
}

struct DeloneReport {
    double probe_radius = 0;   // radius of the probed disc about the origin
    double empty_radius = 0;   // largest empty ball found there
    double threshold = 0;      // allowed empty radius
    bool pass = false;
};

/// Generated dual point set: tiles of (σ′)^k(seed) and their control points.
struct DualPointSet {
    std::vector<DualTile> tiles; // sorted, unique
    std::vector<std::size_t> tile_counts; // size after each step, index 0 = seed
    unsigned generation = 0;
    bool nested = true;
    DeloneReport delone;

    std::vector<FieldElement> points(const DualSubstitution& d) const {
        std::vector<FieldElement> out;
        for (const auto& t : tiles) out.push_back(d.point(t));
        return out;
    }
};

/// Tiles fixed by σ′: child W_t + (λ⁻¹o)* of σ′(W_t) gives translation o/(λ − 1) when λ − 1 is a unit.
inline std::vector<DualTile> fixed_dual_tiles(const DualSubstitution& d) {
    std::vector<DualTile> out;
    FieldElement shift;
    try {
        shift = (d.lambda() - FieldElement::one(d.field())).inverse();
    } catch (const Error&) {
        return out;
    }
    for (std::size_t t = 0; t < d.size(); ++t)
        for (const auto& c : d.rule(t))
            if (c.type == t) out.push_back({t, shift * d.lambda() * c.offset});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Places a tile of the given type so that its control point lands on `point`.
inline DualTile tile_at_point(const DualSubstitution& d, std::size_t type, const FieldElement& point) {
    return {type, point - d.control_points().at(type)};
}

namespace detail {

inline DeloneReport delone_probe(const DualSubstitution& d, const std::vector<DualTile>& tiles, double tile_diameter) {
    DeloneReport rep;
    const std::size_t dim = d.space().dim();
    PointCloud cloud{dim, {}, {}};
    for (const auto& t : tiles) cloud.add(t.type, d.space().star(d.point(t)));
    rep.threshold = tile_diameter;
    if (cloud.empty() || dim == 0) return rep;
    const auto [lo, hi] = cloud.bounds();
    double r = INFINITY;
    for (std::size_t k = 0; k < dim; ++k) r = std::min({r, -lo[k], hi[k]});
    rep.probe_radius = std::max(0.0, r / 2);
    const KdTree tree(cloud);
    const int steps = 40;
    std::vector<double> p(dim);
    const std::size_t combos = static_cast<std::size_t>(std::pow(2 * steps + 1, static_cast<double>(dim)));
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t code = c;
        double n2 = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            p[k] = rep.probe_radius * (static_cast<double>(code % (2 * steps + 1)) - steps) / steps;
            code /= 2 * steps + 1;
            n2 += p[k] * p[k];
        }
        if (n2 > rep.probe_radius * rep.probe_radius) continue;
        rep.empty_radius = std::max(rep.empty_radius, tree.nearest(p.data()));
    }
    // a probe disc smaller than one tile cannot certify anything
    rep.pass = rep.probe_radius >= rep.threshold && rep.empty_radius <= rep.threshold;
    return rep;
}

} // namespace detail

/// Largest bounding-box diagonal of the window components, from a chaos-game cloud.
inline double window_diameter(const GraphIFS& ifs) {
    const auto cloud = attractor_cloud(ifs, 20000, 1);
    double best = 0;
    for (std::size_t t = 0; t < ifs.types().size(); ++t) {
        const auto [lo, hi] = cloud.of_type(t).bounds();
        double s = 0;
        for (std::size_t k = 0; k < lo.size(); ++k) s += (hi[k] - lo[k]) * (hi[k] - lo[k]);
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

/// (σ′)^k(seed), checking (σ′)^j(seed) ⊂ (σ′)^{j+1}(seed) exactly at each step,
/// followed by an empty-ball probe about the origin. `tile_diameter` is the
/// allowed hole radius, normally window_diameter of the starred system.
inline DualPointSet generate_dual_pointset(const DualSubstitution& d, std::vector<DualTile> seed, unsigned k, double tile_diameter) {
    std::sort(seed.begin(), seed.end());
    seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
    if (seed.empty()) throw Error(ErrorCode::SeedNotNested, "empty seed");
    auto step = [&](const std::vector<DualTile>& tiles) {
        std::vector<DualTile> next;
        for (const auto& t : tiles)
            for (auto& c : d.apply(t)) next.push_back(std::move(c));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        return next;
    };
    DualPointSet out;
    std::vector<DualTile> current = seed;
    out.tile_counts.push_back(current.size());
    {
        const auto first = step(seed);
        if (!std::includes(first.begin(), first.end(), seed.begin(), seed.end()))
            throw Error(ErrorCode::SeedNotNested, "σ′(seed) does not contain the seed");
    }
    for (unsigned j = 0; j < k; ++j) {
        auto next = step(current);
        out.nested = out.nested && std::includes(next.begin(), next.end(), current.begin(), current.end());
        current = std::move(next);
        out.tile_counts.push_back(current.size());
    }
    out.tiles = std::move(current);
    out.generation = k;
    out.delone = detail::delone_probe(d, out.tiles, tile_diameter);
    return out;
}

/// The co-starred dual system on the physical line:
/// V′_s ⊇ λ⁻¹V′_t + c_s + λ⁻¹(o − c_t) for every primal map t ← s with offset o.
inline GraphIFS costar_system(const DualSubstitution& d) {
    const FieldPtr& F = d.field();
    const auto& c = d.control_points();
    std::vector<SetMap> maps;
    for (const auto& m : d.primal_maps())
        maps.push_back({m.source, m.target, d.expansion(), c[m.source] + d.expansion() * (m.offset - c[m.target])});
    return GraphIFS(d.types(), InternalSpace::physical(F), std::move(maps));
}

/// Exact interval windows W′_t of the dual point set.
inline std::vector<ExactInterval> dual_windows(const DualSubstitution& d) {
    if (d.space().dim() < 1) throw Error(ErrorCode::NotInterval, "no internal space");
    return interval_attractor(costar_system(d));
}

/// Result of comparing λ·(co-starred dual system) with a substitution.
struct DualityReport {
    bool pass = false;
    bool tiles_exactly = false;             // λW′_s is covered by its children without gaps or overlaps
    std::string orientation;                // "direct", "reflected" or "mismatch"
    double scale = 0;                       // |W′_t| / ℓ_t
    std::vector<double> dual_expansion;     // Q′ eigenvalues on the internal space
    std::vector<std::string> child_words;   // left-to-right children of λW′_s, one per letter
    std::vector<std::string> expected_words;
    std::string note;
};

/// Multiplies the co-starred dual system by λ: λW′_s is then cut into translates W′_t,
/// which must spell the rules of `target` (all left to right or all reversed) with
/// lengths proportional to the tile lengths of `target`.
inline DualityReport dual_of_dual_check(const GeometricSubstitution& primal, const GeometricSubstitution& target) {
    DualityReport rep;
    const CutProjectScheme scheme(primal.field);
    const auto ifs = star_equations(derive_set_equations(primal), scheme);
    const auto d = dualize(ifs);
    for (std::size_t i : d.space().embeddings()) rep.dual_expansion.push_back(d.expansion().embed(i).value.real());
    std::vector<ExactInterval> w;
    try {
        w = dual_windows(d);
    } catch (const Error& e) {
        rep.orientation = "mismatch";
        rep.note = e.what();
        return rep;
    }
    const auto costar = costar_system(d);
    const FieldPtr& F = primal.field;
    const auto lam = RationalElement::generator(F);
    const std::size_t T = d.size();
    bool exact = true;
    std::vector<std::vector<std::size_t>> words(T);
    for (std::size_t s = 0; s < T; ++s) {
        std::vector<std::pair<RationalElement, std::size_t>> pieces; // left endpoint, type
        for (const auto& m : costar.maps())
            if (m.target == s) pieces.emplace_back(w[m.source].lo + lam * m.offset.cast<BigRational>(), m.source);
        std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return sign(a.first - b.first) < 0; });
        RationalElement reach = lam * w[s].lo;
        for (const auto& [left, type] : pieces) {
            exact = exact && left == reach;
            reach = left + w[type].length();
            words[s].push_back(type);
        }
        exact = exact && reach == lam * w[s].hi;
        std::string spelled;
        for (std::size_t t : words[s]) spelled += (spelled.empty() ? "" : " ") + d.types()[t];
        rep.child_words.push_back(spelled);
    }
    rep.tiles_exactly = exact;

    // letters are matched by name
    const auto& h = target.sigma;
    bool names_ok = h.size() == T;
    std::vector<std::size_t> to_target(T);
    for (std::size_t t = 0; names_ok && t < T; ++t) {
        try {
            to_target[t] = h.index(d.types()[t]);
        } catch (const Error&) {
            names_ok = false;
        }
    }
    for (std::size_t t = 0; names_ok && t < T; ++t) {
        std::string spelled;
        for (std::size_t c : h.rule(to_target[t])) spelled += (spelled.empty() ? "" : " ") + h.name(c);
        rep.expected_words.push_back(spelled);
    }
    bool direct = names_ok, reflected = names_ok;
    for (std::size_t s = 0; names_ok && s < T; ++s) {
        Word mine;
        for (std::size_t t : words[s]) mine.push_back(to_target[t]);
        const Word& want = h.rule(to_target[s]);
        direct = direct && mine == want;
        reflected = reflected && Word(mine.rbegin(), mine.rend()) == want;
    }
    rep.orientation = direct ? "direct" : reflected ? "reflected" : "mismatch";

    bool proportional = names_ok && same_field(*target.field, *F);
    if (proportional) {
        const auto l0 = target.lengths[to_target[0]].cast<BigRational>();
        for (std::size_t t = 0; t < T; ++t)
            proportional = proportional && w[t].length() * l0 == w[0].length() * target.lengths[to_target[t]].cast<BigRational>();
        rep.scale = w[0].length().value() / l0.value();
    }
    if (!proportional) rep.note = "interval lengths are not proportional to the target tile lengths";
    rep.pass = exact && (direct || reflected) && proportional;
    return rep;
}

} // namespace aperiodica
