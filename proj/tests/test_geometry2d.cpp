#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "aperiodica/geometry2d.hpp"

using namespace aperiodica;

namespace {

double s(int k) { return std::sin(k * std::numbers::pi / 9); }

struct N4 {
    DualSubstitution d;
    std::vector<Prototile> p;
};

const N4& n4() {
    static const N4 v = [] {
        const auto sym = SymbolicSubstitution::from_names({{"X", {"L"}}, {"S", {"M", "L"}}, {"M", {"S", "M", "L"}}, {"L", {"X", "S", "M", "L"}}});
        const auto g = merge_letters(realize(sym), "X", "S", "L");
        auto d = dualize(star_equations(derive_set_equations(g), CutProjectScheme(g.field)));
        auto p = polygonal_prototiles(d);
        return N4{std::move(d), std::move(p)};
    }();
    return v;
}

std::size_t type_of(const char* name) {
    const auto& t = n4().d.types();
    return static_cast<std::size_t>(std::find(t.begin(), t.end(), name) - t.begin());
}

} // namespace

TEST(Shoelace, UnitSquare) {
    EXPECT_DOUBLE_EQ(shoelace_area(Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}), 1.0);
    EXPECT_DOUBLE_EQ(shoelace_area(Polygon{{{0, 1}, {1, 1}, {1, 0}, {0, 0}}}), 1.0);
}

TEST(Shoelace, RejectsDegenerateAndCrossing) {
    EXPECT_THROW(shoelace_area(Polygon{{{0, 0}, {1, 1}}}), Error);
    EXPECT_THROW(shoelace_area(Polygon{{{0, 0}, {1, 1}, {2, 2}}}), Error);
    EXPECT_THROW(shoelace_area(Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}), Error);
}

TEST(Prototiles, VertexGIsStarOfLambda) {
    const auto& space = n4().d.space();
    const auto g = space.star(FieldElement::generator(n4().d.field()));
    EXPECT_NEAR(g[0], -s(1) / s(2), 1e-12);
    EXPECT_NEAR(g[1], s(2) / s(4), 1e-12);
}

TEST(Prototiles, AreasMatchSineForms) {
    const double l2 = -s(1) / s(2), l3 = s(2) / s(4);
    const auto& p = n4().p;
    EXPECT_NEAR(p[type_of("M")].area, l3 - l2, 1e-12);
    EXPECT_NEAR(p[type_of("M")].area, 1.184793, 1e-6);
    EXPECT_NEAR(p[type_of("S")].area, std::abs(l2) * l3 * (l3 - l2), 1e-12);
    EXPECT_NEAR(p[type_of("S")].area, 0.411474, 1e-6);
    const double mu_l = l2 * l2 - l3 * l3 + 2 * std::abs(l2) + 2 * l3 - std::abs(l2) * l3 * l3 - l3 * l2 * l2;
    EXPECT_NEAR(p[type_of("L")].area, mu_l, 1e-12);
    EXPECT_NEAR(p[type_of("L")].area, 1 + s(4) * s(1) / (s(2) * s(2)), 1e-12);
}

TEST(Prototiles, OutlinesAreSimpleAndMerged) {
    for (const auto& t : n4().p) {
        const auto poly = t.outline.embed(n4().d.space());
        EXPECT_GT(signed_area(poly), 0) << t.name;
        double pieces = 0;
        for (const auto& q : t.pieces) pieces += shoelace_area(q.embed(n4().d.space()));
        EXPECT_NEAR(pieces, t.area, 1e-12) << t.name;
    }
    EXPECT_EQ(n4().p[type_of("S")].outline.vertices.size(), 4u);
}

TEST(Prototiles, RejectOtherFields) {
    const auto F = NumberField::create(IntPolynomial{-1, -1, 1});
    const auto sym = SymbolicSubstitution::from_names({{"L", {"L", "S"}}, {"S", {"L"}}});
    const auto g = realize(sym, std::vector<FieldElement>{FieldElement::one(F), FieldElement::from_ints(F, {-1, 1})}, Anchor::Left);
    const auto d = dualize(star_equations(derive_set_equations(g), CutProjectScheme(g.field)));
    EXPECT_THROW(polygonal_prototiles(d), Error);
}

TEST(Prototiles, AreaVectorIsLeftEigenvector) {
    // σ′ row convention: each prototile's λ-scaled area is the sum of its children's
    const auto& d = n4().d;
    const auto& p = n4().p;
    const double lam = 1 + 2 * std::cos(std::numbers::pi / 9);
    const auto B = d.matrix();
    for (std::size_t i = 0; i < p.size(); ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < p.size(); ++j) sum += static_cast<double>(B(i, j)) * p[j].area;
        EXPECT_NEAR(sum, lam * p[i].area, 1e-9 * lam * p[i].area);
    }
}

TEST(Prototiles, FrequencyVectorAndDensity) {
    const auto& d = n4().d;
    const auto& p = n4().p;
    const double lam = 1 + 2 * std::cos(std::numbers::pi / 9);
    const double total = s(2) + s(3) + s(4);
    std::vector<double> freq(3);
    freq[type_of("S")] = s(2) / total;
    freq[type_of("M")] = s(3) / total;
    freq[type_of("L")] = s(4) / total;
    const auto B = d.matrix();
    // frequencies are fixed by the column action
    for (std::size_t j = 0; j < 3; ++j) {
        double sum = 0;
        for (std::size_t i = 0; i < 3; ++i) sum += static_cast<double>(B(i, j)) * freq[i];
        EXPECT_NEAR(sum, lam * freq[j], 1e-9);
    }
    double mean_area = 0;
    for (std::size_t i = 0; i < 3; ++i) mean_area += freq[i] * p[i].area;
    EXPECT_NEAR(1 / mean_area, 0.8100954858, 1e-8);
}

TEST(Patch, TileCounts) {
    const std::size_t L = type_of("L");
    EXPECT_EQ(substitute_patch(n4().d, L, 0).tiles.size(), 1u);
    const std::vector<std::size_t> expected{4, 12, 35, 101};
    for (unsigned k = 1; k <= 4; ++k) EXPECT_EQ(substitute_patch(n4().d, L, k).tiles.size(), expected[k - 1]);
}

TEST(Patch, SingleTileAudit) {
    for (std::size_t t = 0; t < 3; ++t) {
        const auto a = audit_patch(substitute_patch(n4().d, t, 0), n4().p, n4().d.space());
        EXPECT_EQ(a.overlap_area, 0.0);
        EXPECT_NEAR(a.union_area, n4().p[t].area, 1e-12);
        EXPECT_NEAR(a.boundary_area, n4().p[t].area, 1e-12);
        EXPECT_EQ(a.boundary_loops, 1u);
    }
}

TEST(Patch, FourthGenerationHasNoGapsOrOverlaps) {
    const std::size_t L = type_of("L");
    const double lam = 1 + 2 * std::cos(std::numbers::pi / 9);
    const auto a = audit_patch(substitute_patch(n4().d, L, 4), n4().p, n4().d.space());
    EXPECT_LT(a.overlap_area, 1e-9 * a.union_area);
    EXPECT_NEAR(a.union_area, std::pow(lam, 4) * n4().p[L].area, 1e-6 * a.union_area);
    EXPECT_NEAR(a.boundary_area, a.union_area, 1e-9 * a.union_area);
    EXPECT_LT(a.boundary_gap_estimate, 1e-9);
    EXPECT_EQ(a.boundary_loops, 1u);
}

TEST(Patch, EveryGenerationUpToSixTiles) {
    const double lam = 1 + 2 * std::cos(std::numbers::pi / 9);
    for (std::size_t t = 0; t < 3; ++t)
        for (unsigned k = 1; k <= 6; ++k) {
            const auto a = audit_patch(substitute_patch(n4().d, t, k), n4().p, n4().d.space());
            EXPECT_LT(a.overlap_area, 1e-9 * a.union_area) << t << " " << k;
            EXPECT_NEAR(a.union_area, std::pow(lam, k) * n4().p[t].area, 1e-6 * a.union_area);
            EXPECT_LT(a.boundary_gap_estimate, 1e-9);
        }
}

TEST(Patch, DoubledTileIsDetected) {
    auto patch = substitute_patch(n4().d, type_of("L"), 3);
    const auto dup = patch.tiles[7];
    patch.tiles.push_back(dup);
    const auto a = audit_patch(patch, n4().p, n4().d.space());
    EXPECT_NEAR(a.overlap_area, n4().p[dup.type].area, 1e-9);
}

TEST(Patch, RemovedTileLeavesHole) {
    auto patch = substitute_patch(n4().d, type_of("L"), 4);
    // pick an interior tile: one whose removal leaves a clockwise loop
    double best = 0;
    for (std::size_t i = 0; i < patch.tiles.size(); ++i) {
        auto p = patch;
        p.tiles.erase(p.tiles.begin() + static_cast<std::ptrdiff_t>(i));
        best = std::max(best, audit_patch(p, n4().p, n4().d.space()).boundary_gap_estimate);
    }
    EXPECT_NEAR(best, n4().p[type_of("L")].area, 1e-9);
}
