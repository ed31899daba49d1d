#include <gtest/gtest.h>

#include <cmath>

#include "aperiodica/substitution.hpp"

using namespace aperiodica;

namespace {

const double kTau = (1 + std::sqrt(5.0)) / 2;

SymbolicSubstitution subst_n4() {
    return SymbolicSubstitution::from_names({{"X", {"L"}}, {"S", {"M", "L"}}, {"M", {"S", "M", "L"}}, {"L", {"X", "S", "M", "L"}}});
}

SymbolicSubstitution subst2() {
    return SymbolicSubstitution::from_names({{"S", {"M", "L"}}, {"M", {"S", "M", "L"}}, {"L", {"L", "M", "L"}}});
}

SymbolicSubstitution fibonacci() { return SymbolicSubstitution::from_names({{"L", {"L", "S"}}, {"S", {"L"}}}); }

std::string spell_range(const SymbolicSubstitution& s, const Word& w, std::size_t from, std::size_t to) {
    return s.spell(Word(w.begin() + static_cast<long>(from), w.begin() + static_cast<long>(to)));
}

// Integer matrix powers checked entrywise: an oracle for primitivity that does not use the Wielandt bound.
bool some_power_positive(const IntMatrix& a, int max_power) {
    IntMatrix p = a;
    for (int k = 1; k <= max_power; ++k) {
        bool positive = true;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) positive = positive && p(i, j) > 0;
        if (positive) return true;
        p = p * a;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) p(i, j) = std::min<std::int64_t>(p(i, j), 1);
    }
    return false;
}

double s(int n, int k) { return std::sin(k * M_PI / (2 * n + 1)); }

} // namespace

TEST(MatrixOf, Fixtures) {
    const auto golden = SymbolicSubstitution::from_names({{"1", {"1", "2"}}, {"2", {"1"}}});
    EXPECT_EQ(matrix_of(golden), (IntMatrix{{1, 1}, {1, 0}}));
    EXPECT_EQ(matrix_of(subst2()), (IntMatrix{{0, 1, 1}, {1, 1, 1}, {0, 1, 2}}));
    EXPECT_EQ(matrix_of(SymbolicSubstitution::from_names({{"a", {"a"}}})), (IntMatrix{{1}}));
}

TEST(MatrixOf, CompositionIsMatrixProduct) {
    for (const auto& s : {subst_n4(), subst2(), fibonacci(), mn_substitution(5)}) {
        const IntMatrix a = matrix_of(s);
        EXPECT_EQ(matrix_of(s.power(2)), a * a);
        EXPECT_EQ(matrix_of(s.power(3)), a * a * a);
    }
}

TEST(Primitive, AgreesWithPowerOracle) {
    EXPECT_TRUE(is_primitive(IntMatrix{{1, 1}, {1, 0}}));
    EXPECT_FALSE(is_primitive(IntMatrix::identity(2)));
    EXPECT_TRUE(is_primitive(matrix_of(mn_substitution(4))));
    EXPECT_FALSE(is_primitive(IntMatrix{{0, 1}, {1, 0}}));
    EXPECT_FALSE(is_primitive(IntMatrix{{1, 1}, {0, 1}}));
    // exhaustive over all 3x3 0/1 matrices
    for (int mask = 0; mask < 512; ++mask) {
        IntMatrix a(3, 3, 0);
        for (int b = 0; b < 9; ++b) a(static_cast<std::size_t>(b / 3), static_cast<std::size_t>(b % 3)) = (mask >> b) & 1;
        EXPECT_EQ(is_primitive(a), some_power_positive(a, 40)) << mask;
    }
}

TEST(MnSubstitution, Rules) {
    EXPECT_EQ(mn_substitution(2).to_string(), "1 → 2, 2 → 12");
    EXPECT_EQ(mn_substitution(4).to_string(), "1 → 4, 2 → 34, 3 → 234, 4 → 1234");
    const auto n3 = mn_substitution(3);
    const auto named = SymbolicSubstitution::from_names({{"S", {"L"}}, {"M", {"M", "L"}}, {"L", {"S", "M", "L"}}});
    EXPECT_EQ(n3.rules(), named.rules());
    EXPECT_THROW(mn_substitution(1), Error);
}

TEST(PFData, GoldenMatrix) {
    const auto d = pf_data(IntMatrix{{1, 1}, {1, 0}});
    EXPECT_NEAR(d.pf_value, kTau, 1e-14);
    ASSERT_EQ(d.frequencies.size(), 2u);
    EXPECT_NEAR(d.frequencies[0], 1 / kTau, 1e-14);
    EXPECT_NEAR(d.frequencies[1], 1 / (kTau * kTau), 1e-14);
}

TEST(PFData, M4LengthsAreSines) {
    const IntMatrix a = matrix_of(mn_substitution(4));
    const auto d = pf_data(a);
    EXPECT_NEAR(d.pf_value, s(4, 4) / s(4, 1), 1e-13);
    EXPECT_NEAR(d.pf_value, 2.879385, 1e-6);
    for (int i = 1; i <= 4; ++i) EXPECT_NEAR(d.lengths[static_cast<std::size_t>(i - 1)] / d.lengths[0], s(4, i) / s(4, 1), 1e-12);
}

TEST(PFData, EigenResidualsAndSides) {
    for (const auto& s : {subst_n4(), subst2(), fibonacci(), mn_substitution(3), mn_substitution(7)}) {
        const IntMatrix a = matrix_of(s);
        const auto d = pf_data(a);
        const RealMatrix r = a.cast<double>();
        const auto al = r * d.lengths;
        const auto fa = left_multiply(d.frequencies, r);
        double fsum = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            EXPECT_NEAR(al[i], d.pf_value * d.lengths[i], 1e-12 * d.pf_value * d.lengths[i]);
            EXPECT_NEAR(fa[i], d.pf_value * d.frequencies[i], 1e-12 * d.pf_value);
            EXPECT_GT(d.frequencies[i], 0);
            fsum += d.frequencies[i];
        }
        EXPECT_NEAR(fsum, 1.0, 1e-14);
    }
}

TEST(PFData, NonPrimitiveIsRejected) {
    try {
        pf_data(IntMatrix::identity(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPrimitive);
    }
}

TEST(Density, Examples) {
    EXPECT_NEAR(density({std::sqrt(kTau * kTau * kTau), std::sqrt(kTau)}, {1 / kTau, 1 / (kTau * kTau)}), 0.56886448, 1e-8);
    EXPECT_EQ(density({1.0}, {1.0}), 1.0);
    EXPECT_THROW(density({1.0, 2.0}, {1.0}), Error);
}

TEST(Merge, N4SubstitutionBecomesSubst2WithExactLengths) {
    const auto g = realize(subst_n4());
    const auto& F = g.field;
    EXPECT_EQ(F->minpoly(), (IntPolynomial{1, 0, -3, 1}));
    EXPECT_EQ(g.lengths[0], FieldElement::one(F)); // X
    const auto merged = merge_letters(g, "X", "S", "L");
    EXPECT_EQ(merged.sigma, subst2());
    EXPECT_EQ(merged.lengths[0], FieldElement::from_ints(F, {-1, 1, 0}));  // s = λ − 1
    EXPECT_EQ(merged.lengths[1], FieldElement::from_ints(F, {0, -2, 1}));  // m = λ² − 2λ
    EXPECT_EQ(merged.lengths[2], FieldElement::from_ints(F, {0, 1, 0}));   // ℓ = λ
}

TEST(Merge, IllegalPairs) {
    const auto g = realize(subst_n4());
    // S is followed by M or L, never only by one letter
    try {
        merge_letters(g, "S", "X", "L");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MergeIllegal);
    }
    const auto n3 = realize(mn_substitution(3));
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t into = 0; into < 3; ++into) {
                try {
                    merge_letters(n3, x, y, into);
                    FAIL() << x << y << into;
                } catch (const Error& e) {
                    EXPECT_EQ(e.code(), ErrorCode::MergeIllegal);
                }
            }
}

TEST(FixedPoint, Subst2WindowAroundOrigin) {
    const auto g = merge_letters(realize(subst_n4()), "X", "S", "L");
    const Seed seed = find_seed(g.sigma);
    EXPECT_EQ(g.sigma.name(seed.left), "L");
    EXPECT_EQ(g.sigma.name(seed.right), "L");
    EXPECT_EQ(seed.power, 1u);
    const auto t = fixed_point_tiling(g, std::nullopt, 5);
    EXPECT_EQ(spell_range(g.sigma, t.letters, t.origin - 6, t.origin), "SMLLML");
    EXPECT_EQ(spell_range(g.sigma, t.letters, t.origin, t.origin + 24), "LMLSMLLMLMLSMLLMLLMLSMLL");
    // right endpoint of the tile left of the origin is 0
    EXPECT_TRUE(t.right_endpoint(t.origin - 1).is_zero());
    const auto F = g.field;
    const FieldElement s = FieldElement::from_ints(F, {-1, 1, 0}), m = FieldElement::from_ints(F, {0, -2, 1}),
                       l = FieldElement::from_ints(F, {0, 1, 0});
    const std::vector<FieldElement> table{s, m, l};
    for (std::size_t i = 0; i + 1 < t.size(); ++i) EXPECT_EQ(t.left[i + 1] - t.left[i], table[t.letters[i]]);
}

TEST(FixedPoint, GenerationsAreNested) {
    const auto g = merge_letters(realize(subst_n4()), "X", "S", "L");
    for (unsigned k = 0; k < 6; ++k) {
        const auto a = fixed_point_tiling(g, std::nullopt, k), b = fixed_point_tiling(g, std::nullopt, k + 1);
        const std::size_t shift = b.origin - a.origin;
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a.letters[i], b.letters[i + shift]);
            EXPECT_EQ(a.left[i], b.left[i + shift]);
        }
    }
    const auto seed_only = fixed_point_tiling(g, std::nullopt, 0);
    EXPECT_EQ(seed_only.size(), 2u);
}

TEST(FixedPoint, FibonacciNeedsSquare) {
    const auto F = NumberField::create(IntPolynomial{-1, -1, 1});
    const auto g = realize(fibonacci(), std::vector<FieldElement>{FieldElement::one(F), FieldElement::from_ints(F, {-1, 1})}, Anchor::Left);
    const Seed seed = find_seed(g.sigma);
    EXPECT_EQ(seed.power, 2u);
    EXPECT_EQ(g.sigma.name(seed.left), "L");
    EXPECT_EQ(g.sigma.name(seed.right), "L");
    const auto t = fixed_point_tiling(g, seed, 2);
    EXPECT_EQ(spell_range(g.sigma, t.letters, 0, t.origin), "LSLLSLSL");
    EXPECT_EQ(spell_range(g.sigma, t.letters, t.origin, t.size()), "LSLLSLSL");
    EXPECT_TRUE(t.left[t.origin].is_zero());
    EXPECT_EQ(t.left[t.origin - 1], -FieldElement::one(F));
}

TEST(FixedPoint, SeedNotFixedIsRejected) {
    const auto g = merge_letters(realize(subst_n4()), "X", "S", "L");
    try {
        fixed_point_tiling(g, Seed{0, 0, 1}, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoLegalSeed);
    }
}

TEST(Realize, InconsistentLengthsAreRejected) {
    const auto F = NumberField::create(IntPolynomial{-1, -1, 1});
    EXPECT_THROW(realize(fibonacci(), std::vector<FieldElement>{FieldElement::one(F), FieldElement::one(F)}), Error);
}
