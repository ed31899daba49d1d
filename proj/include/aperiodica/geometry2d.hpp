#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "aperiodica/dual.hpp"

namespace aperiodica {

struct Point2 {
    double x = 0, y = 0;
};

inline double cross(const Point2& o, const Point2& a, const Point2& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

struct Polygon {
    std::vector<Point2> vertices; // counterclockwise
};

inline double signed_area(const Polygon& p) {
    double s = 0;
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = p.vertices[i];
        const Point2& b = p.vertices[(i + 1) % n];
        s += a.x * b.y - a.y * b.x;
    }
    return s / 2;
}

namespace detail {

inline bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d, double eps) {
    const double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
    return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

} // namespace detail

/// Area of a simple polygon. Degenerate or self-intersecting input is rejected.
inline double shoelace_area(const Polygon& p) {
    const std::size_t n = p.vertices.size();
    if (n < 3) throw Error(ErrorCode::SelfIntersecting, "polygon needs at least three vertices");
    const double a = signed_area(p);
    double scale = 0;
    for (const auto& v : p.vertices) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    if (std::abs(a) <= 1e-12 * std::max(1.0, scale * scale)) throw Error(ErrorCode::SelfIntersecting, "polygon has zero area");
    const double eps = 1e-12 * std::max(1.0, scale * scale);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (detail::segments_cross(p.vertices[i], p.vertices[(i + 1) % n], p.vertices[j], p.vertices[(j + 1) % n], eps))
                throw Error(ErrorCode::SelfIntersecting, "polygon edges cross");
        }
    return std::abs(a);
}

/// Polygon whose vertices are star images of ℤ[λ] elements.
struct ExactPolygon {
    std::vector<FieldElement> vertices; // counterclockwise in the internal plane

    Polygon embed(const InternalSpace& space, const FieldElement* shift = nullptr) const {
        Polygon p;
        for (const auto& v : vertices) {
            const auto s = space.star(shift ? v + *shift : v);
            p.vertices.push_back({s[0], s[1]});
        }
        return p;
    }
};

struct Prototile {
    std::string name;
    std::vector<ExactPolygon> pieces; // convex
    ExactPolygon outline;             // boundary of the union of the pieces
    double area = 0;
};

namespace detail {

/// Strict convex hull (collinear points dropped), counterclockwise, returned as exact vertices.
inline ExactPolygon convex_hull(const std::vector<FieldElement>& pts, const InternalSpace& space) {
    std::vector<std::pair<Point2, std::size_t>> p;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto s = space.star(pts[i]);
        p.push_back({{s[0], s[1]}, i});
    }
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.first.x != b.first.x ? a.first.x < b.first.x : a.first.y < b.first.y; });
    std::vector<std::pair<Point2, std::size_t>> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2].first, h[k - 1].first, p[i].first) <= 1e-12) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2].first, h[k - 1].first, p[i].first) <= 1e-12) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    ExactPolygon out;
    for (const auto& [pt, i] : h) out.vertices.push_back(pts[i]);
    return out;
}

using Key = std::vector<BigInt>;

struct EdgeSet {
    std::vector<FieldElement> vertex;
    std::map<Key, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t id(const FieldElement& v) {
        auto [it, fresh] = index.emplace(v.coords(), vertex.size());
        if (fresh) vertex.push_back(v);
        return it->second;
    }
};

/// Removes pairs of opposite edges, then chains the rest into closed loops.
inline std::vector<std::vector<std::size_t>> boundary_loops(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::map<std::pair<std::size_t, std::size_t>, int> count;
    for (const auto& e : edges) {
        auto rev = count.find({e.second, e.first});
        if (rev != count.end() && rev->second > 0) {
            if (--rev->second == 0) count.erase(rev);
        } else {
            ++count[e];
        }
    }
    std::multimap<std::size_t, std::size_t> out;
    for (const auto& [e, c] : count)
        for (int i = 0; i < c; ++i) out.emplace(e.first, e.second);
    std::vector<std::vector<std::size_t>> loops;
    while (!out.empty()) {
        auto it = out.begin();
        const std::size_t start = it->first;
        std::vector<std::size_t> loop{start};
        std::size_t cur = it->second;
        out.erase(it);
        while (cur != start) {
            loop.push_back(cur);
            auto next = out.find(cur);
            if (next == out.end()) break; // open chain
            cur = next->second;
            out.erase(next);
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

inline ExactPolygon drop_collinear(const ExactPolygon& p, const InternalSpace& space) {
    const auto poly = p.embed(space);
    const std::size_t n = poly.vertices.size();
    ExactPolygon out;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[(i + n - 1) % n];
        const Point2& b = poly.vertices[i];
        const Point2& c = poly.vertices[(i + 1) % n];
        const double len = std::hypot(b.x - a.x, b.y - a.y) * std::hypot(c.x - b.x, c.y - b.y);
        if (std::abs(cross(a, b, c)) > 1e-12 * len) out.vertices.push_back(p.vertices[i]);
    }
    return out;
}

} // namespace detail

/// The polygonal prototiles P_S, P_M, P_L replacing the fractal windows of the
/// dual tiling for x³ − 3x² + 1 (types named S, M, L), in the dual's type order.
inline std::vector<Prototile> polygonal_prototiles(const DualSubstitution& d) {
    const FieldPtr& F = d.field();
    if (!(F->minpoly() == IntPolynomial{1, 0, -3, 1}) || d.space().dim() != 2)
        throw Error(ErrorCode::InvalidArgument, "polygonal prototiles exist only for the field of x³ − 3x² + 1");
    auto v = [&](long long c0, long long c1, long long c2) { return FieldElement::from_ints(F, {c0, c1, c2}); };
    const FieldElement zero = v(0, 0, 0), a = v(-1, 0, 1), b = v(0, 0, 1), c = v(0, -1, 1), dd = v(-1, -1, 1), e = v(-1, -1, 2),
                       g = v(0, 1, 0), h = v(-1, 1, 1);
    const std::map<std::string, std::vector<std::vector<FieldElement>>> spec{
        {"S", {{a - b, a, h, h - b}}},
        {"M", {{e - g, e, dd, dd - g}, {c - g, c, e, e - g}}},
        {"L", {{zero, e, c, b}, {zero, g, h, dd, e}}},
    };
    std::vector<Prototile> out;
    for (const auto& name : d.types()) {
        const auto it = spec.find(name);
        if (it == spec.end()) throw Error(ErrorCode::InvalidArgument, "polygonal prototiles need the types S, M, L");
        Prototile p;
        p.name = name;
        detail::EdgeSet es;
        for (const auto& pts : it->second) {
            p.pieces.push_back(detail::convex_hull(pts, d.space()));
            const auto& vs = p.pieces.back().vertices;
            for (std::size_t i = 0; i < vs.size(); ++i) es.edges.emplace_back(es.id(vs[i]), es.id(vs[(i + 1) % vs.size()]));
        }
        const auto loops = detail::boundary_loops(es.edges);
        if (loops.size() != 1) throw Error(ErrorCode::SelfIntersecting, "prototile pieces do not form one region");
        for (std::size_t i : loops.front()) p.outline.vertices.push_back(es.vertex[i]);
        p.outline = detail::drop_collinear(p.outline, d.space());
        p.area = shoelace_area(p.outline.embed(d.space()));
        out.push_back(std::move(p));
    }
    return out;
}

/// Placed polygonal tiles of (σ′)^k applied to one prototile at the origin.
struct TilePatch2D {
    std::vector<DualTile> tiles;
    unsigned generation = 0;
    std::size_t start_type = 0;
};

inline TilePatch2D substitute_patch(const DualSubstitution& d, std::size_t start_type, unsigned k) {
    TilePatch2D patch{{{start_type, FieldElement::zero(d.field())}}, k, start_type};
    for (unsigned j = 0; j < k; ++j) {
        std::vector<DualTile> next;
        for (const auto& t : patch.tiles)
            for (auto& c : d.apply(t)) next.push_back(std::move(c));
        patch.tiles = std::move(next);
    }
    return patch;
}

struct PatchAudit {
    std::size_t tiles = 0;
    double tile_area_sum = 0;
    double overlap_area = 0;          // Σ pairwise intersection areas
    double union_area = 0;            // tile_area_sum − overlap_area
    double boundary_area = 0;         // signed area enclosed by the uncancelled edges
    double boundary_gap_estimate = 0; // area of the clockwise (hole) boundary loops
    std::size_t boundary_loops = 0;
};

namespace detail {

/// Intersection of convex counterclockwise polygons (Sutherland–Hodgman).
inline Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    std::vector<Point2> out = subject.vertices;
    const std::size_t m = clip.vertices.size();
    for (std::size_t i = 0; i < m && !out.empty(); ++i) {
        const Point2& a = clip.vertices[i];
        const Point2& b = clip.vertices[(i + 1) % m];
        std::vector<Point2> in = std::move(out);
        out.clear();
        for (std::size_t j = 0; j < in.size(); ++j) {
            const Point2& p = in[j];
            const Point2& q = in[(j + 1) % in.size()];
            const double cp = cross(a, b, p), cq = cross(a, b, q);
            if (cp >= 0) out.push_back(p);
            if ((cp >= 0) != (cq >= 0)) {
                const double t = cp / (cp - cq);
                out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
            }
        }
    }
    return Polygon{out};
}

struct Box {
    double x0, y0, x1, y1;
};

inline Box box_of(const Polygon& p) {
    Box b{INFINITY, INFINITY, -INFINITY, -INFINITY};
    for (const auto& v : p.vertices) {
        b.x0 = std::min(b.x0, v.x);
        b.y0 = std::min(b.y0, v.y);
        b.x1 = std::max(b.x1, v.x);
        b.y1 = std::max(b.y1, v.y);
    }
    return b;
}

} // namespace detail

/// Pairwise overlap areas (convex pieces clipped against each other) and a boundary
/// analysis: edges are split at vertices lying on them, opposite edges cancel, and
/// clockwise loops among the remaining edges are holes.
inline PatchAudit audit_patch(const TilePatch2D& patch, const std::vector<Prototile>& prototiles, const InternalSpace& space) {
    PatchAudit rep;
    rep.tiles = patch.tiles.size();
    struct Piece {
        Polygon poly;
        detail::Box box;
        std::size_t tile;
    };
    std::vector<Piece> pieces;
    detail::EdgeSet es;
    for (std::size_t i = 0; i < patch.tiles.size(); ++i) {
        const auto& tile = patch.tiles[i];
        const Prototile& proto = prototiles.at(tile.type);
        rep.tile_area_sum += proto.area;
        for (const auto& piece : proto.pieces) {
            Polygon p = piece.embed(space, &tile.translation);
            pieces.push_back({p, detail::box_of(p), i});
        }
        const auto& vs = proto.outline.vertices;
        for (std::size_t j = 0; j < vs.size(); ++j)
            es.edges.emplace_back(es.id(vs[j] + tile.translation), es.id(vs[(j + 1) % vs.size()] + tile.translation));
    }
    // overlaps, sweeping over x
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.box.x0 < b.box.x0; });
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size() && pieces[j].box.x0 < pieces[i].box.x1; ++j) {
            if (pieces[i].tile == pieces[j].tile) continue;
            if (pieces[j].box.y0 >= pieces[i].box.y1 || pieces[i].box.y0 >= pieces[j].box.y1) continue;
            const Polygon inter = detail::clip_convex(pieces[i].poly, pieces[j].poly);
            if (inter.vertices.size() >= 3) rep.overlap_area += std::abs(signed_area(inter));
        }
    rep.union_area = rep.tile_area_sum - rep.overlap_area;

    // boundary: split edges at T-junctions
    std::vector<Point2> where;
    for (const auto& v : es.vertex) {
        const auto s = space.star(v);
        where.push_back({s[0], s[1]});
    }
    std::vector<std::size_t> by_x(where.size());
    std::iota(by_x.begin(), by_x.end(), 0);
    std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return where[a].x < where[b].x; });
    std::vector<double> xs;
    for (std::size_t i : by_x) xs.push_back(where[i].x);
    std::vector<std::pair<std::size_t, std::size_t>> split;
    for (const auto& [u, v] : es.edges) {
        const Point2 a = where[u], b = where[v];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        std::vector<std::pair<double, std::size_t>> inner;
        const auto lo = std::lower_bound(xs.begin(), xs.end(), std::min(a.x, b.x) - 1e-9);
        const auto hi = std::upper_bound(xs.begin(), xs.end(), std::max(a.x, b.x) + 1e-9);
        for (auto it = lo; it != hi; ++it) {
            const std::size_t w = by_x[static_cast<std::size_t>(it - xs.begin())];
            if (w == u || w == v) continue;
            const Point2 p = where[w];
            if (std::abs(cross(a, b, p)) > 1e-9 * len) continue;
            const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
            if (t > 1e-12 && t < 1 - 1e-12) inner.emplace_back(t, w);
        }
        std::sort(inner.begin(), inner.end());
        std::size_t prev = u;
        for (const auto& [t, w] : inner) {
            split.emplace_back(prev, w);
            prev = w;
        }
        split.emplace_back(prev, v);
    }
    const auto loops = detail::boundary_loops(split);
    rep.boundary_loops = loops.size();
    for (const auto& loop : loops) {
        Polygon p;
        for (std::size_t i : loop) p.vertices.push_back(where[i]);
        const double a = signed_area(p);
        rep.boundary_area += a;
        if (a < 0) rep.boundary_gap_estimate += -a;
    }
    return rep;
}

} // namespace aperiodica
