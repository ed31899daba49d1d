#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "aperiodica/fixtures.hpp"

using namespace aperiodica;

namespace {

ErrorCode code_of(const std::string& text) {
    try {
        parse_substitution_file(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return ErrorCode::InvalidArgument;
}

std::vector<long long> ints(const FieldElement& x) {
    std::vector<long long> out;
    for (const auto& c : x.coords()) out.push_back(c.convert_to<long long>());
    return out;
}

} // namespace

TEST(Parse, RulesAndDirectives) {
    const auto f = parse_substitution_file("# merged\nalphabet: S M L\nS -> M L\nM -> S M L   # inline comment\nL -> L M L\nanchor: left\nmode: dual\n");
    EXPECT_EQ(matrix_of(f.sigma), (IntMatrix{{0, 1, 1}, {1, 1, 1}, {0, 1, 2}}));
    EXPECT_EQ(f.anchor, Anchor::Left);
    EXPECT_EQ(f.mode, "dual");
    EXPECT_TRUE(f.lengths.empty());
}

TEST(Parse, AlphabetInferredFromRules) {
    const auto f = parse_substitution_file("a -> a b\nb -> a\n");
    EXPECT_EQ(f.sigma.alphabet(), (std::vector<std::string>{"a", "b"}));
}

TEST(Parse, Errors) {
    EXPECT_EQ(code_of(""), ErrorCode::MissingRule);
    EXPECT_EQ(code_of("# nothing\n\n"), ErrorCode::MissingRule);
    EXPECT_EQ(code_of("alphabet: a b\na -> a b\n"), ErrorCode::MissingRule);
    EXPECT_EQ(code_of("alphabet: a b\na -> a c\nb -> a\n"), ErrorCode::UnknownLetter);
    EXPECT_EQ(code_of("alphabet: a b\nc -> a\na -> b\nb -> a\n"), ErrorCode::UnknownLetter);
    EXPECT_EQ(code_of("alphabet: a b\na => b\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("alphabet: a b\na -> b\nb -> a\nfoo: 1\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("alphabet: a b\na -> a b\nb -> a\nminpoly: -1 -1 2\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("alphabet: a b\na -> a b\nb -> a\nlength a = [1 0]\n"), ErrorCode::ParseError);
}

TEST(Parse, ErrorPositions) {
    try {
        parse_substitution_file("alphabet: a b\na -> b\nb -> a\nlength a = [1 x]\n");
        FAIL();
    } catch (const ParseFailure& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.column(), 15u);
    }
    try {
        parse_substitution_file("alphabet: a b\n  bogus: 3\na -> b\nb -> a\n");
        FAIL();
    } catch (const ParseFailure& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 3u);
    }
}

TEST(Parse, DeclaredMinpolyMustMatch) {
    const auto f = parse_substitution_file("alphabet: a b\na -> a b\nb -> a\nminpoly: -1 -2 1\n");
    EXPECT_THROW(to_geometric(f), Error);
}

TEST(Fixtures, AllLoad) {
    for (const auto& name : fixture_names()) {
        const auto f = load_fixture(name);
        EXPECT_EQ(f.name, name);
        if (f.is_geometric()) {
            EXPECT_NO_THROW(to_geometric(f)) << name;
        } else {
            EXPECT_TRUE(f.volumes.has_value()) << name;
        }
    }
    EXPECT_THROW(load_fixture("nope"), Error);
}

TEST(Fixtures, MergedLengths) {
    const auto g = to_geometric(load_fixture("n4-merged"));
    EXPECT_EQ(g.sigma.alphabet(), (std::vector<std::string>{"S", "M", "L"}));
    EXPECT_EQ(matrix_of(g.sigma), (IntMatrix{{0, 1, 1}, {1, 1, 1}, {0, 1, 2}}));
    EXPECT_EQ(ints(g.lengths[0]), (std::vector<long long>{-1, 1, 0}));
    EXPECT_EQ(ints(g.lengths[1]), (std::vector<long long>{0, -2, 1}));
    EXPECT_EQ(ints(g.lengths[2]), (std::vector<long long>{0, 1, 0}));
}

TEST(Fixtures, Variants) {
    const auto merged = to_geometric(load_fixture("n4-merged"));
    const auto v = variant_fixtures();
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(matrix_of(v[0].sigma), matrix_of(merged.sigma));
    EXPECT_EQ(matrix_of(v[1].sigma), matrix_of(merged.sigma).transposed());
    // lengths in the ratio s₁s₂/s₄ : s₂ : s₄
    auto s = [](int k) { return std::sin(k * std::numbers::pi / 9); };
    const double unit = v[1].lengths[1].value() / s(2);
    EXPECT_NEAR(v[1].lengths[0].value(), unit * s(1) * s(2) / s(4), 1e-12);
    EXPECT_NEAR(v[1].lengths[2].value(), unit * s(4), 1e-12);
}

TEST(Fixtures, TransposedVariantHasTwoPartWindow) {
    const auto g = variant_fixtures()[1];
    const auto ifs = star_equations(derive_set_equations(g), CutProjectScheme(g.field));
    const auto cloud = attractor_cloud(ifs, 100000, 7);
    const auto wm = cloud.of_type(g.sigma.index("M"));
    const auto sizes = cluster_sizes(wm, 0.05);
    std::size_t big = 0;
    for (std::size_t c : sizes)
        if (c >= wm.size() / 100) ++big;
    EXPECT_GE(big, 2u);
    // W_L of the same cloud is one piece
    const auto wl = cloud.of_type(g.sigma.index("L"));
    EXPECT_EQ(cluster_sizes(wl, 0.05).front(), wl.size());
}

TEST(Fixtures, GoldenTriangleDensity) {
    const auto f = load_fixture("golden-triangle-data");
    const auto pf = pf_data(matrix_of(f.sigma));
    EXPECT_NEAR(density(*f.volumes, pf.frequencies), 0.56886448, 1e-7);
    const double tau = (1 + std::sqrt(5.0)) / 2;
    EXPECT_NEAR(density(*f.volumes, pf.frequencies), std::pow(tau, 1.5) / (tau * tau + 1), 1e-12);
}

TEST(Output, SvgIsDeterministic) {
    const auto g = to_geometric(load_fixture("n3"));
    const auto ifs = star_equations(derive_set_equations(g), CutProjectScheme(g.field));
    const auto cloud = attractor_cloud(ifs, 2000, 3);
    std::ostringstream a, b;
    write_cloud_svg(a, cloud);
    write_cloud_svg(b, attractor_cloud(ifs, 2000, 3));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().rfind("<svg", 0), 0u);
    std::ostringstream csv;
    write_cloud_csv(csv, cloud, ifs.types());
    const std::string rows = csv.str();
    EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 2001);
}

TEST(Output, PatchCsvAndSvg) {
    const auto g = to_geometric(load_fixture("n4-merged"));
    const auto d = dualize(star_equations(derive_set_equations(g), CutProjectScheme(g.field)));
    const auto proto = polygonal_prototiles(d);
    const auto patch = substitute_patch(d, 2, 2);
    std::ostringstream svg, csv;
    write_patch_svg(svg, patch, proto, d.space());
    write_patch_csv(csv, patch, proto, d.space());
    const std::string s = svg.str();
    std::size_t polys = 0;
    for (std::size_t p = s.find("<polygon"); p != std::string::npos; p = s.find("<polygon", p + 1)) ++polys;
    EXPECT_EQ(polys, patch.tiles.size());
    EXPECT_NE(s.find("fill=\"#000000\""), std::string::npos);
    EXPECT_EQ(csv.str().substr(0, 11), "type,tx,ty\n");
}
