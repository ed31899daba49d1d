#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aperiodica/cutproject.hpp"
#include "aperiodica/substitution.hpp"

namespace aperiodica {

/// V_target ⊇ multiplier·V_source + offset.
struct SetMap {
    std::size_t target = 0, source = 0;
    FieldElement multiplier, offset;
};

namespace detail {

/// Renders a graph-directed system with maps grouped by (target, multiplier, offset);
/// a group whose sources cover the whole alphabet is written with the union symbol `all`.
struct SystemFormat {
    std::function<std::string(std::size_t)> lhs;
    std::function<std::string(const SetMap&, std::optional<std::size_t>)> term; // nullopt source = all types
    std::function<std::string(const FieldElement&)> offset;                    // "" for zero, " − …" or " + …"
};

inline std::string format_equation(const std::vector<SetMap>& maps, std::size_t types, std::size_t target, const SystemFormat& f) {
    struct Group {
        const SetMap* first;
        std::vector<bool> sources;
        std::size_t count = 0;
    };
    std::vector<Group> groups;
    for (const auto& m : maps) {
        if (m.target != target) continue;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& g) { return g.first->multiplier == m.multiplier && g.first->offset == m.offset; });
        if (it == groups.end()) {
            groups.push_back({&m, std::vector<bool>(types, false), 0});
            it = groups.end() - 1;
        }
        if (!it->sources[m.source]) ++it->count;
        it->sources[m.source] = true;
    }
    std::vector<std::string> all_terms, other_terms;
    for (const auto& g : groups) {
        if (g.count == types) {
            all_terms.push_back(f.term(*g.first, std::nullopt) + f.offset(g.first->offset));
            continue;
        }
        for (std::size_t s = 0; s < types; ++s)
            if (g.sources[s]) other_terms.push_back(f.term(*g.first, s) + f.offset(g.first->offset));
    }
    std::string out = f.lhs(target) + " =";
    bool first = true;
    for (const auto* list : {&all_terms, &other_terms})
        for (const auto& t : *list) {
            out += first ? " " : " ∪ ";
            out += t;
            first = false;
        }
    if (first) out += " ∅";
    return out;
}

inline std::string signed_join(const std::string& body) {
    if (body.empty() || body == "0") return "";
    if (body.rfind("−", 0) == 0) return " − " + body.substr(std::string("−").size());
    return " + " + body;
}

inline std::string superscript(std::size_t k) {
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s;
    for (char d : std::to_string(k)) s += digits[d - '0'];
    return s;
}

/// Star image of x written over the power basis, e.g. "−(λ₂²,λ₃²)ᵀ + (λ₂,λ₃)ᵀ".
inline std::string star_to_string(const FieldElement& x, const InternalSpace& space) {
    const auto names = space.conjugate_names();
    const auto& conj = space.field()->conjugates();
    std::string out;
    bool first = true;
    for (std::size_t k = x.coords().size(); k-- > 0;) {
        BigInt c = x.coords()[k];
        if (c == 0) continue;
        const bool negative = c < 0;
        if (negative) c = -c;
        out += first ? (negative ? "−" : "") : (negative ? " − " : " + ");
        first = false;
        if (c != 1) out += c.str();
        std::vector<std::string> parts;
        for (std::size_t j = 0; j < names.size(); ++j) {
            const bool real = conj[space.embeddings()[j]].real;
            const std::string p = k == 0 ? "1" : names[j] + (k >= 2 ? superscript(k) : "");
            if (real) parts.push_back(p);
            else {
                parts.push_back(k == 0 ? "1" : "Re " + p);
                parts.push_back(k == 0 ? "0" : "Im " + p);
            }
        }
        if (parts.size() == 1) {
            if (c != 1 && k > 0) out += "·";
            if (c == 1 || k > 0) out += parts[0];
        } else {
            out += "(";
            for (std::size_t j = 0; j < parts.size(); ++j) out += (j ? "," : "") + parts[j];
            out += ")ᵀ";
        }
    }
    return first ? "0" : out;
}

} // namespace detail

/// Graph-directed set equations of the endpoint sets V_t of a fixed-point tiling.
struct SetEquations {
    SymbolicSubstitution sigma;
    FieldPtr field;
    Anchor anchor = Anchor::Right;
    std::vector<SetMap> maps; // multiplier λ on every map

    std::string equation(std::size_t t) const {
        detail::SystemFormat f;
        f.lhs = [&](std::size_t j) { return "V_" + sigma.name(j); };
        f.term = [&](const SetMap&, std::optional<std::size_t> s) { return s ? "λV_" + sigma.name(*s) : std::string("λV"); };
        f.offset = [](const FieldElement& o) { return detail::signed_join(o.to_string()); };
        return detail::format_equation(maps, sigma.size(), t, f);
    }
    std::vector<std::string> equations() const {
        std::vector<std::string> out;
        for (std::size_t t = 0; t < sigma.size(); ++t) out.push_back(equation(t));
        return out;
    }
};

/// One map per letter occurrence: letter j at position p of rule(t) gives
/// V_j ⊇ λV_t − (lengths after p) for right endpoints, λV_t + (lengths before p) for left ones.
inline SetEquations derive_set_equations(const GeometricSubstitution& g) {
    if (g.field->degree() == 0 || !(g.field->pf_value() > 1) || g.lambda() == FieldElement::one(g.field))
        throw Error(ErrorCode::NonExpanding, "inflation factor must exceed 1");
    SetEquations eq{g.sigma, g.field, g.anchor, {}};
    const FieldElement lam = g.lambda();
    for (std::size_t t = 0; t < g.size(); ++t) {
        const Word& w = g.sigma.rule(t);
        for (std::size_t p = 0; p < w.size(); ++p) {
            FieldElement off = FieldElement::zero(g.field);
            if (g.anchor == Anchor::Right)
                for (std::size_t q = p + 1; q < w.size(); ++q) off -= g.lengths[w[q]];
            else
                for (std::size_t q = 0; q < p; ++q) off += g.lengths[w[q]];
            eq.maps.push_back({w[p], t, lam, off});
        }
    }
    return eq;
}

/// A contracting graph-directed IFS on a real space given by field embeddings.
/// Each map sends component `source` into component `target`.
class GraphIFS {
public:
    GraphIFS(std::vector<std::string> types, InternalSpace space, std::vector<SetMap> maps)
        : types_(std::move(types)), space_(std::move(space)), maps_(std::move(maps)) {
        const std::size_t T = types_.size();
        std::vector<bool> has(T, false);
        for (const auto& m : maps_) {
            if (m.target >= T || m.source >= T) throw Error(ErrorCode::InvalidArgument, "map refers to an unknown type");
            has[m.target] = true;
            const double rho = space_.contraction(m.multiplier);
            if (!(rho < 1)) throw Error(ErrorCode::NonExpanding, "map is not a contraction in the chosen space");
            contraction_ = std::max(contraction_, rho);
            linear_.push_back(space_.multiplier(m.multiplier));
            offset_.push_back(space_.star(m.offset));
            double det = 1;
            for (std::size_t i : space_.embeddings()) {
                const double a = std::abs(m.multiplier.embed(i).value);
                det *= space_.field()->conjugates()[i].real ? a : a * a;
            }
            det_.push_back(det);
        }
        for (std::size_t t = 0; t < T; ++t)
            if (!has[t]) throw Error(ErrorCode::InvalidArgument, "type " + types_[t] + " has no map");
        compute_masses();
    }

    const std::vector<std::string>& types() const noexcept { return types_; }
    const InternalSpace& space() const noexcept { return space_; }
    const std::vector<SetMap>& maps() const noexcept { return maps_; }
    std::size_t dim() const { return space_.dim(); }
    double contraction() const noexcept { return contraction_; }
    const RealMatrix& linear(std::size_t i) const { return linear_[i]; }
    const std::vector<double>& offset(std::size_t i) const { return offset_[i]; }
    /// Natural mass of each component, normalized to sum 1.
    const std::vector<double>& masses() const noexcept { return mass_; }
    /// Probability that a point of the target component comes through map i.
    double map_weight(std::size_t i) const { return det_[i] * mass_[maps_[i].source] / (growth_ * mass_[maps_[i].target]); }
    /// PF eigenvalue of the volume matrix; 1 when the pieces of each component are measure-disjoint.
    double volume_growth() const noexcept { return growth_; }

    /// Radius of a ball about 0 containing the attractor: max‖o‖/(1−ρ).
    double bound_radius() const {
        double r = 0;
        for (const auto& o : offset_) {
            double n = 0;
            for (double v : o) n += v * v;
            r = std::max(r, std::sqrt(n));
        }
        return r / (1 - contraction_);
    }

    std::string equation(std::size_t t, const std::string& multiplier = "Q") const {
        detail::SystemFormat f;
        f.lhs = [&](std::size_t j) { return "V_" + types_[j] + "*"; };
        f.term = [&](const SetMap&, std::optional<std::size_t> s) { return s ? multiplier + "V_" + types_[*s] + "*" : multiplier + "V*"; };
        f.offset = [&](const FieldElement& o) { return detail::signed_join(detail::star_to_string(o, space_)); };
        return detail::format_equation(maps_, types_.size(), t, f);
    }
    std::vector<std::string> equations(const std::string& multiplier = "Q") const {
        std::vector<std::string> out;
        for (std::size_t t = 0; t < types_.size(); ++t) out.push_back(equation(t, multiplier));
        return out;
    }

private:
    void compute_masses() {
        // PF vector of B_ts = Σ |det q| over maps t ← s, by power iteration on B + I
        const std::size_t T = types_.size();
        std::vector<double> v(T, 1.0 / static_cast<double>(T));
        for (int it = 0; it < 100000; ++it) {
            std::vector<double> w = v;
            for (std::size_t i = 0; i < maps_.size(); ++i) w[maps_[i].target] += det_[i] * v[maps_[i].source];
            const double sum = std::accumulate(w.begin(), w.end(), 0.0);
            growth_ = sum - 1;
            double diff = 0;
            for (std::size_t t = 0; t < T; ++t) {
                w[t] /= sum;
                diff = std::max(diff, std::abs(w[t] - v[t]));
            }
            v = std::move(w);
            if (diff < 1e-16) break;
        }
        mass_ = v;
    }

    std::vector<std::string> types_;
    InternalSpace space_;
    std::vector<SetMap> maps_;
    std::vector<RealMatrix> linear_;
    std::vector<std::vector<double>> offset_;
    std::vector<double> det_, mass_;
    double contraction_ = 0, growth_ = 1;
};

/// Applies the star map to the set equations: λ becomes Q on the internal space.
/// Refused unless λ is a PV number, since the attractor is otherwise unbounded.
inline GraphIFS star_equations(const SetEquations& eqs, const CutProjectScheme& scheme) {
    if (!same_field(*eqs.field, *scheme.field())) throw Error(ErrorCode::FieldMismatch, "equations and scheme use different fields");
    if (classify_pisot(eqs.field->minpoly()) != PisotClass::PV)
        throw Error(ErrorCode::NotPisot, "inflation factor is not a PV number");
    std::vector<std::string> names;
    for (std::size_t t = 0; t < eqs.sigma.size(); ++t) names.push_back(eqs.sigma.name(t));
    return GraphIFS(std::move(names), scheme.internal(), eqs.maps);
}

/// Points tagged with their component, stored flat.
struct PointCloud {
    std::size_t dim = 0;
    std::vector<std::size_t> types;
    std::vector<double> coords;

    std::size_t size() const { return types.size(); }
    bool empty() const { return types.empty(); }
    const double* point(std::size_t i) const { return coords.data() + i * dim; }
    void add(std::size_t type, const std::vector<double>& p) {
        types.push_back(type);
        coords.insert(coords.end(), p.begin(), p.end());
    }
    PointCloud of_type(std::size_t t) const {
        PointCloud out{dim, {}, {}};
        for (std::size_t i = 0; i < size(); ++i)
            if (types[i] == t) {
                out.types.push_back(t);
                out.coords.insert(out.coords.end(), point(i), point(i) + dim);
            }
        return out;
    }
    double max_norm() const {
        double r = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            double n = 0;
            for (std::size_t d = 0; d < dim; ++d) n += point(i)[d] * point(i)[d];
            r = std::max(r, std::sqrt(n));
        }
        return r;
    }
    std::pair<std::vector<double>, std::vector<double>> bounds() const {
        std::vector<double> lo(dim, INFINITY), hi(dim, -INFINITY);
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t d = 0; d < dim; ++d) {
                lo[d] = std::min(lo[d], point(i)[d]);
                hi[d] = std::max(hi[d], point(i)[d]);
            }
        return {lo, hi};
    }
};

/// Chaos game on the graph IFS. Sample i draws u = (i + U)/n and decodes it
/// into an address: the outer component by mass, then at every level one of the
/// maps into the current component by its weight, rescaling u after each choice.
/// Once u's precision is spent the walk continues on fresh random numbers.
/// Walkers of 4096 samples each have independent seeds, so the cloud is
/// determined by (n_points, seed) alone.
inline PointCloud attractor_cloud(const GraphIFS& ifs, std::size_t n_points, std::uint64_t seed) {
    PointCloud cloud{ifs.dim(), {}, {}};
    if (n_points == 0) return cloud;
    const std::size_t T = ifs.types().size(), dim = ifs.dim();
    std::vector<std::vector<std::size_t>> into(T);
    for (std::size_t i = 0; i < ifs.maps().size(); ++i) into[ifs.maps()[i].target].push_back(i);
    const double rho = ifs.contraction();
    const std::size_t depth = std::max<std::size_t>(100, static_cast<std::size_t>(std::ceil(std::log(1e-14) / std::log(rho))));
    constexpr std::size_t kWalker = 4096;
    cloud.types.reserve(n_points);
    cloud.coords.reserve(n_points * dim);
    std::vector<std::size_t> address(depth);
    std::vector<double> x(dim), y(dim);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t w0 = 0; w0 < n_points; w0 += kWalker) {
        std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(w0 / kWalker), static_cast<std::uint32_t>(w0 / kWalker >> 32)};
        std::mt19937_64 rng(sq);
        for (std::size_t i = w0; i < std::min(n_points, w0 + kWalker); ++i) {
            double u = (static_cast<double>(i) + unit(rng)) / static_cast<double>(n_points);
            double budget = 1.0; // measure of the current cylinder
            auto draw = [&](auto weight, std::size_t count) {
                double r = budget > 0x1p-40 ? u : unit(rng);
                std::size_t k = 0;
                double acc = 0;
                for (; k + 1 < count; ++k) {
                    const double p = weight(k);
                    if (r < acc + p) break;
                    acc += p;
                }
                const double p = weight(k);
                if (budget > 0x1p-40) {
                    u = std::clamp((u - acc) / p, 0.0, std::nextafter(1.0, 0.0));
                    budget *= p;
                }
                return k;
            };
            const std::size_t outer = draw([&](std::size_t t) { return ifs.masses()[t]; }, T);
            std::size_t current = outer;
            for (std::size_t level = 0; level < depth; ++level) {
                const auto& maps = into[current];
                const std::size_t k = draw([&](std::size_t j) { return ifs.map_weight(maps[j]); }, maps.size());
                address[level] = maps[k];
                current = ifs.maps()[maps[k]].source;
            }
            std::fill(x.begin(), x.end(), 0.0);
            for (std::size_t level = depth; level-- > 0;) {
                const RealMatrix& q = ifs.linear(address[level]);
                const auto& o = ifs.offset(address[level]);
                for (std::size_t r = 0; r < dim; ++r) {
                    double s = o[r];
                    for (std::size_t c = 0; c < dim; ++c) s += q(r, c) * x[c];
                    y[r] = s;
                }
                std::swap(x, y);
            }
            cloud.add(outer, x);
        }
    }
    return cloud;
}

/// Star images of the endpoints of the n tiles of a fixed-point tiling closest to 0.
inline PointCloud starred_endpoint_cloud(const GeometricSubstitution& g, const InternalSpace& space, std::size_t n_points,
                                         std::optional<Seed> seed = std::nullopt) {
    PointCloud cloud{space.dim(), {}, {}};
    if (n_points == 0) return cloud;
    const Seed sd = seed ? *seed : find_seed(g.sigma);
    unsigned k = 0;
    while (fixed_point_tiling(g, sd, k).size() < n_points + 2) ++k;
    const IntervalTiling t = fixed_point_tiling(g, sd, k);
    std::vector<std::size_t> order(t.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> where(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) where[i] = std::abs(t.point(i, g.anchor).value());
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return where[a] < where[b]; });
    order.resize(n_points);
    std::sort(order.begin(), order.end());
    for (std::size_t i : order) cloud.add(t.letters[i], space.star(t.point(i, g.anchor)));
    return cloud;
}

/// Static k-d tree over a point cloud for nearest-neighbour distances.
class KdTree {
public:
    explicit KdTree(const PointCloud& cloud) : cloud_(cloud), index_(cloud.size()) {
        std::iota(index_.begin(), index_.end(), 0);
        build(0, index_.size(), 0);
    }

    /// Euclidean distance from p to the nearest cloud point (infinity for an empty cloud).
    double nearest(const double* p) const {
        double best = INFINITY;
        search(0, index_.size(), 0, p, best);
        return std::sqrt(best);
    }

private:
    void build(std::size_t lo, std::size_t hi, std::size_t depth) {
        if (hi - lo <= 8) return;
        const std::size_t axis = depth % cloud_.dim, mid = (lo + hi) / 2;
        std::nth_element(index_.begin() + static_cast<long>(lo), index_.begin() + static_cast<long>(mid), index_.begin() + static_cast<long>(hi),
                         [&](std::size_t a, std::size_t b) { return cloud_.point(a)[axis] < cloud_.point(b)[axis]; });
        build(lo, mid, depth + 1);
        build(mid + 1, hi, depth + 1);
    }

    void search(std::size_t lo, std::size_t hi, std::size_t depth, const double* p, double& best) const {
        if (hi - lo <= 8) {
            for (std::size_t i = lo; i < hi; ++i) best = std::min(best, dist2(cloud_.point(index_[i]), p));
            return;
        }
        const std::size_t axis = depth % cloud_.dim, mid = (lo + hi) / 2;
        const double* m = cloud_.point(index_[mid]);
        best = std::min(best, dist2(m, p));
        const double delta = p[axis] - m[axis];
        if (delta < 0) {
            search(lo, mid, depth + 1, p, best);
            if (delta * delta < best) search(mid + 1, hi, depth + 1, p, best);
        } else {
            search(mid + 1, hi, depth + 1, p, best);
            if (delta * delta < best) search(lo, mid, depth + 1, p, best);
        }
    }

    double dist2(const double* a, const double* b) const {
        double s = 0;
        for (std::size_t d = 0; d < cloud_.dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
        return s;
    }

    const PointCloud& cloud_;
    std::vector<std::size_t> index_;
};

/// max over a of the distance to the nearest point of b.
inline double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
    if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "clouds of different dimension");
    if (a.empty()) return 0;
    const KdTree tree(b);
    double h = 0;
    for (std::size_t i = 0; i < a.size(); ++i) h = std::max(h, tree.nearest(a.point(i)));
    return h;
}

inline double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

namespace detail {

struct CellHash {
    std::size_t operator()(const std::vector<long long>& c) const {
        std::size_t h = 1469598103934665603ull;
        for (long long v : c) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

inline std::vector<long long> cell_of(const double* p, std::size_t dim, double cell) {
    std::vector<long long> c(dim);
    for (std::size_t d = 0; d < dim; ++d) c[d] = static_cast<long long>(std::floor(p[d] / cell));
    return c;
}

} // namespace detail

/// Number of grid cells of side `cell` hit by the cloud, times the cell volume.
inline double grid_measure(const PointCloud& cloud, double cell) {
    std::unordered_set<std::vector<long long>, detail::CellHash> hit;
    for (std::size_t i = 0; i < cloud.size(); ++i) hit.insert(detail::cell_of(cloud.point(i), cloud.dim, cell));
    return static_cast<double>(hit.size()) * std::pow(cell, static_cast<double>(cloud.dim));
}

struct AreaEstimate {
    double value = 0;
    double cell = 0;
    std::size_t points = 0;
    bool converged = false;
};

/// Grid-counting estimate of μ(W). The cell side is chosen for a mean occupancy of
/// about eight points per cell; boundary cells make the estimate an upper bound.
/// `converged` reports that half of the cloud gives the same value within 1 %.
inline AreaEstimate estimate_attractor_measure(const GraphIFS& ifs, std::uint64_t seed, std::size_t points = std::size_t{1} << 20) {
    AreaEstimate est;
    const PointCloud cloud = attractor_cloud(ifs, points, seed);
    const auto [lo, hi] = cloud.bounds();
    double extent = 0;
    for (std::size_t d = 0; d < cloud.dim; ++d) extent = std::max(extent, hi[d] - lo[d]);
    const double dim = static_cast<double>(cloud.dim);
    const double coarse = grid_measure(cloud, extent / 64);
    est.cell = std::pow(8 * coarse / static_cast<double>(points), 1 / dim);
    est.value = grid_measure(cloud, est.cell);
    est.points = points;
    PointCloud half{cloud.dim, {}, {}};
    half.types.assign(cloud.types.begin(), cloud.types.begin() + static_cast<std::ptrdiff_t>(points / 2));
    half.coords.assign(cloud.coords.begin(), cloud.coords.begin() + static_cast<std::ptrdiff_t>(points / 2 * cloud.dim));
    est.converged = std::abs(grid_measure(half, est.cell) - est.value) < 0.01 * est.value;
    return est;
}

/// Sizes (largest first) of the single-linkage clusters of the cloud at the given radius.
inline std::vector<std::size_t> cluster_sizes(const PointCloud& cloud, double radius) {
    const std::size_t n = cloud.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::unordered_map<std::vector<long long>, std::vector<std::size_t>, detail::CellHash> grid;
    for (std::size_t i = 0; i < n; ++i) grid[detail::cell_of(cloud.point(i), cloud.dim, radius)].push_back(i);
    const double r2 = radius * radius;
    for (const auto& [cell, members] : grid) {
        // visit this cell and all neighbours
        std::vector<long long> nb(cloud.dim);
        const std::size_t combos = static_cast<std::size_t>(std::pow(3, static_cast<double>(cloud.dim)));
        for (std::size_t c = 0; c < combos; ++c) {
            std::size_t code = c;
            for (std::size_t d = 0; d < cloud.dim; ++d) {
                nb[d] = cell[d] + static_cast<long long>(code % 3) - 1;
                code /= 3;
            }
            const auto it = grid.find(nb);
            if (it == grid.end()) continue;
            for (std::size_t i : members)
                for (std::size_t j : it->second) {
                    if (j <= i) continue;
                    double s = 0;
                    for (std::size_t d = 0; d < cloud.dim; ++d) s += (cloud.point(i)[d] - cloud.point(j)[d]) * (cloud.point(i)[d] - cloud.point(j)[d]);
                    if (s <= r2) parent[find(i)] = find(j);
                }
        }
    }
    std::unordered_map<std::size_t, std::size_t> count;
    for (std::size_t i = 0; i < n; ++i) ++count[find(i)];
    std::vector<std::size_t> sizes;
    for (const auto& [root, c] : count) sizes.push_back(c);
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

/// A closed interval with endpoints in ℚ(λ), read under one real embedding.
struct ExactInterval {
    RationalElement lo, hi;
    std::size_t embedding = 0;

    double lo_value() const { return lo.embed(embedding).value.real(); }
    double hi_value() const { return hi.embed(embedding).value.real(); }
    RationalElement length() const { return hi - lo; }
};

namespace detail {

inline std::vector<RationalElement> solve_field(std::vector<std::vector<RationalElement>> a, std::vector<RationalElement> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) throw Error(ErrorCode::NotInterval, "singular endpoint system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const RationalElement inv = a[col][col].inverse();
        for (std::size_t j = col; j < n; ++j) a[col][j] = a[col][j] * inv;
        b[col] = b[col] * inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const RationalElement f = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

} // namespace detail

/// Exact interval solution of a one-dimensional graph IFS. The extreme address chains are
/// located numerically; their endpoints are then solved exactly and the tuple of intervals is
/// substituted back: each must be the gap-free union of its images.
inline std::vector<ExactInterval> interval_attractor(const GraphIFS& ifs) {
    if (ifs.dim() != 1 || ifs.space().embeddings().size() != 1)
        throw Error(ErrorCode::NotInterval, "interval solution needs a one-dimensional space");
    const std::size_t e = ifs.space().embeddings()[0];
    const std::size_t T = ifs.types().size();
    const auto& maps = ifs.maps();
    std::vector<double> q(maps.size()), o(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        q[i] = ifs.linear(i)(0, 0);
        o[i] = ifs.offset(i)[0];
    }
    // hull iteration: lo/hi of each component with the map and endpoint realizing it
    std::vector<double> a(T, 0.0), b(T, 0.0);
    std::vector<std::size_t> amap(T), bmap(T);
    std::vector<bool> afrom_hi(T), bfrom_hi(T);
    const std::size_t iterations = static_cast<std::size_t>(std::ceil(std::log(1e-17) / std::log(ifs.contraction()))) + 20;
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<double> na(T, INFINITY), nb(T, -INFINITY);
        for (std::size_t i = 0; i < maps.size(); ++i) {
            const std::size_t t = maps[i].target, s = maps[i].source;
            const double x1 = q[i] * a[s] + o[i], x2 = q[i] * b[s] + o[i];
            const bool pos = q[i] > 0;
            const double lo = pos ? x1 : x2, hi = pos ? x2 : x1;
            if (lo < na[t]) { na[t] = lo; amap[t] = i; afrom_hi[t] = !pos; }
            if (hi > nb[t]) { nb[t] = hi; bmap[t] = i; bfrom_hi[t] = pos; }
        }
        a = std::move(na);
        b = std::move(nb);
    }
    // unknowns: A_t at index t, B_t at index T + t
    const FieldPtr& F = ifs.space().field();
    const auto zero = RationalElement::zero(F), one = RationalElement::one(F);
    std::vector<std::vector<RationalElement>> m(2 * T, std::vector<RationalElement>(2 * T, zero));
    std::vector<RationalElement> rhs(2 * T, zero);
    for (std::size_t t = 0; t < T; ++t) {
        for (int side = 0; side < 2; ++side) {
            const std::size_t row = side ? T + t : t;
            const std::size_t i = side ? bmap[t] : amap[t];
            const bool from_hi = side ? bfrom_hi[t] : afrom_hi[t];
            m[row][row] += one;
            const std::size_t col = (from_hi ? T : 0) + maps[i].source;
            m[row][col] -= maps[i].multiplier.cast<BigRational>();
            rhs[row] = maps[i].offset.cast<BigRational>();
        }
    }
    const auto x = detail::solve_field(std::move(m), std::move(rhs));
    std::vector<ExactInterval> out;
    for (std::size_t t = 0; t < T; ++t) out.push_back({x[t], x[T + t], e});
    for (std::size_t t = 0; t < T; ++t)
        if (sign(out[t].hi - out[t].lo, e) < 0) throw Error(ErrorCode::NotInterval, "inverted interval");

    // closure: the images of the maps into t cover [A_t, B_t] without gaps
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<std::pair<RationalElement, RationalElement>> images;
        for (std::size_t i = 0; i < maps.size(); ++i) {
            if (maps[i].target != t) continue;
            const auto qq = maps[i].multiplier.cast<BigRational>(), oo = maps[i].offset.cast<BigRational>();
            const std::size_t s = maps[i].source;
            RationalElement lo = qq * out[s].lo + oo, hi = qq * out[s].hi + oo;
            if (sign(qq, e) < 0) std::swap(lo, hi);
            images.emplace_back(lo, hi);
        }
        std::sort(images.begin(), images.end(), [&](const auto& u, const auto& v) { return sign(u.first - v.first, e) < 0; });
        if (images.front().first != out[t].lo) throw Error(ErrorCode::NotInterval, "left endpoint of " + ifs.types()[t] + " not reproduced");
        RationalElement reach = images.front().second;
        for (std::size_t k = 1; k < images.size(); ++k) {
            if (sign(images[k].first - reach, e) > 0) throw Error(ErrorCode::NotInterval, "gap inside component " + ifs.types()[t]);
            if (sign(images[k].second - reach, e) > 0) reach = images[k].second;
        }
        if (reach != out[t].hi) throw Error(ErrorCode::NotInterval, "right endpoint of " + ifs.types()[t] + " not reproduced");
    }
    return out;
}

/// Total length of a union of exact intervals (overlaps counted once).
inline RationalElement union_length(std::vector<ExactInterval> parts) {
    if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "empty interval list");
    const std::size_t e = parts.front().embedding;
    std::sort(parts.begin(), parts.end(), [&](const auto& u, const auto& v) { return sign(u.lo - v.lo, e) < 0; });
    RationalElement total = RationalElement::zero(parts.front().lo.field());
    RationalElement lo = parts.front().lo, hi = parts.front().hi;
    for (std::size_t k = 1; k < parts.size(); ++k) {
        if (sign(parts[k].lo - hi, e) > 0) {
            total += hi - lo;
            lo = parts[k].lo;
            hi = parts[k].hi;
        } else if (sign(parts[k].hi - hi, e) > 0) {
            hi = parts[k].hi;
        }
    }
    return total + (hi - lo);
}

} // namespace aperiodica
