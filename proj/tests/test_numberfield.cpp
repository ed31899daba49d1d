#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "aperiodica/numberfield.hpp"

using namespace aperiodica;

namespace {

// Plain double bisection on a sign change; independent of the library's rational code.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(lo) < 0) == (f(mid) < 0)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double from, double to, int steps) {
    std::vector<double> roots;
    const double h = (to - from) / steps;
    for (int i = 0; i < steps; ++i) {
        const double a = from + i * h, b = a + h;
        if ((f(a) < 0) != (f(b) < 0)) roots.push_back(bisect(f, a, b));
    }
    return roots;
}

// The M_n matrix written out directly: entry (i, j) is 1 when i + j > n (1-based).
IntMatrix mn_matrix(int n) {
    IntMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) a(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = (i + j > n) ? 1 : 0;
    return a;
}

int euler_phi(int n) {
    int count = 0;
    for (int k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ++count;
    return count;
}

FieldPtr cubic() { return NumberField::create(IntPolynomial{1, 0, -3, 1}); }

} // namespace

TEST(Polynomial, CharacteristicPolynomialMatchesDeterminantAtSamplePoints) {
    const IntMatrix a = mn_matrix(5);
    const auto cp = poly::characteristic_polynomial(a);
    for (long long x = -3; x <= 3; ++x) {
        std::vector<std::vector<BigInt>> m(5, std::vector<BigInt>(5));
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) m[i][j] = (i == j ? BigInt(x) : BigInt(0)) - a(i, j);
        EXPECT_EQ(poly::evaluate(cp, x), BigRational(poly::bareiss_determinant(m)));
    }
}

TEST(Polynomial, DiscriminantOfKnownPolynomials) {
    EXPECT_EQ(discriminant(IntPolynomial{-1, -1, 1}), 5);
    EXPECT_EQ(discriminant(IntPolynomial{1, 0, -3, 1}), 81);
    EXPECT_EQ(discriminant(IntPolynomial{-2, 0, 1}), 8);
}

TEST(IsolateRoots, GoldenQuadraticMatchesClosedForm) {
    const auto c = isolate_roots(IntPolynomial{-1, -1, 1});
    ASSERT_EQ(c.size(), 2u);
    const double tau = (1 + std::sqrt(5.0)) / 2, tau2 = (1 - std::sqrt(5.0)) / 2;
    EXPECT_NEAR(c[0].value.real(), tau, 1e-15);
    EXPECT_NEAR(c[1].value.real(), tau2, 1e-15);
    EXPECT_LE(c[0].radius, 1e-15 * tau);
    EXPECT_LE(std::abs(c[0].value.real() - tau), c[0].radius + 4e-16);
}

TEST(IsolateRoots, CubicMatchesBisectionOracle) {
    auto f = [](double x) { return x * x * x - 3 * x * x + 1; };
    const auto oracle = scan_roots(f, -4, 4, 8000);
    ASSERT_EQ(oracle.size(), 3u);
    const auto c = isolate_roots(IntPolynomial{1, 0, -3, 1});
    ASSERT_EQ(c.real_count(), 3u);
    EXPECT_NEAR(c[0].value.real(), oracle[2], 1e-14);
    EXPECT_NEAR(c[1].value.real(), oracle[0], 1e-14);
    EXPECT_NEAR(c[2].value.real(), oracle[1], 1e-14);
    EXPECT_NEAR(c[0].value.real(), 2.879385, 1e-6);
    EXPECT_NEAR(c[1].value.real(), -0.532089, 1e-6);
    EXPECT_NEAR(c[2].value.real(), 0.652704, 1e-6);
}

TEST(IsolateRoots, LinearPolynomialIsExact) {
    const auto c = isolate_roots(IntPolynomial{-1, 1});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].value.real(), 1.0);
    EXPECT_EQ(c[0].radius, 0.0);
}

TEST(IsolateRoots, RejectsRepeatedRootsAndImpossiblePrecision) {
    try {
        isolate_roots(IntPolynomial{1, -2, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSquarefree);
    }
    try {
        isolate_roots(IntPolynomial{-1, -1, 1}, 1e-20);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PrecisionUnreachable);
    }
}

TEST(IsolateRoots, ComplexRootsOfTribonacciPolynomial) {
    const auto c = isolate_roots(IntPolynomial{-1, -1, -1, 1});
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.real_count(), 1u);
    EXPECT_NEAR(c[0].value.real(), 1.839286755214161, 1e-14);
    // Vieta oracle: sum of roots is 1, product is 1.
    std::complex<double> sum = 0, prod = 1;
    for (const auto& r : c.roots()) {
        sum += r.value;
        prod *= r.value;
    }
    EXPECT_NEAR(sum.real(), 1.0, 1e-13);
    EXPECT_NEAR(prod.real(), 1.0, 1e-13);
    EXPECT_NEAR(std::abs(sum.imag()) + std::abs(prod.imag()), 0.0, 1e-13);
    EXPECT_FALSE(c[1].real);
    EXPECT_EQ(c[1].value, std::conj(c[2].value));
}

TEST(IsolateRoots, NormCheckProductOfRoots) {
    const auto c = isolate_roots(IntPolynomial{1, 0, -3, 1});
    double prod = 1;
    for (const auto& r : c.roots()) prod *= r.value.real();
    EXPECT_NEAR(prod, -1.0, 1e-14);
}

TEST(ClassifyPisot, KnownCases) {
    EXPECT_EQ(classify_pisot(IntPolynomial{1, 0, -3, 1}), PisotClass::PV);
    EXPECT_EQ(classify_pisot(IntPolynomial{-1, -1, 1}), PisotClass::PV);
    EXPECT_EQ(classify_pisot(IntPolynomial{-2, 0, 1}), PisotClass::Neither);
    EXPECT_EQ(classify_pisot(IntPolynomial{-1, -1, 0, 1}), PisotClass::PV); // plastic number
    EXPECT_EQ(classify_pisot(IntPolynomial{-1, -1, -1, 1}), PisotClass::PV);
    EXPECT_EQ(classify_pisot(IntPolynomial{-1, 1}), PisotClass::Neither);
    EXPECT_EQ(classify_pisot(IntPolynomial{-3, 1}), PisotClass::PV);
}

TEST(ClassifyPisot, FourIrreducibleCharacteristicFactorsArePV) {
    EXPECT_EQ(classify_pisot(IntPolynomial{-1, -1, 1}), PisotClass::PV);
    EXPECT_EQ(classify_pisot(IntPolynomial{1, -1, -2, 1}), PisotClass::PV);
    EXPECT_EQ(classify_pisot(IntPolynomial{1, 0, -3, 1}), PisotClass::PV);
    EXPECT_EQ(classify_pisot(IntPolynomial{1, 1, -4, -4, 1}), PisotClass::PV);
}

TEST(ClassifyPisot, SalemNumbersAreCertified) {
    EXPECT_EQ(classify_pisot(IntPolynomial{1, -1, -1, -1, 1}), PisotClass::Salem);
    // Lehmer's polynomial
    EXPECT_EQ(classify_pisot(IntPolynomial{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}), PisotClass::Salem);
}

TEST(Factor, MnCharacteristicPolynomialFactorDegrees) {
    for (int n = 2; n <= 15; ++n) {
        const auto cp = poly::characteristic_polynomial(mn_matrix(n));
        const auto factors = irreducible_factors(cp);
        std::vector<int> degrees;
        for (const auto& f : factors) degrees.push_back(poly::degree(f));
        std::sort(degrees.begin(), degrees.end());
        std::vector<int> expected;
        for (int d = 2; d <= 2 * n + 1; ++d)
            if ((2 * n + 1) % d == 0) expected.push_back(euler_phi(d) / 2);
        std::sort(expected.begin(), expected.end());
        EXPECT_EQ(degrees, expected) << "n=" << n;
        poly::ZPoly product{1};
        for (const auto& f : factors) product = poly::mul(product, f);
        EXPECT_EQ(product, cp) << "n=" << n;
    }
}

TEST(Factor, RecoversProductsOfKnownIrreducibles) {
    // Eisenstein polynomials x^k - 2 and cyclotomic-like factors are irreducible by construction.
    const std::vector<poly::ZPoly> parts{
        poly::from_ints({-2, 0, 0, 1}), poly::from_ints({1, 1, 1}), poly::from_ints({-2, 0, 0, 0, 0, 1}),
        poly::from_ints({1, -1, 1, -1, 1}), poly::from_ints({3, 1})};
    poly::ZPoly product{1};
    for (const auto& p : parts) product = poly::mul(product, p);
    auto factors = irreducible_factors(product);
    auto expected = parts;
    auto key = [](const poly::ZPoly& a, const poly::ZPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    };
    std::sort(expected.begin(), expected.end(), key);
    EXPECT_EQ(factors, expected);
}

TEST(Factor, SwinnertonDyerQuarticStaysIrreducible) {
    EXPECT_EQ(irreducible_factors(poly::from_ints({1, 0, -10, 0, 1})).size(), 1u);
    EXPECT_EQ(irreducible_factors(poly::from_ints({6, 0, -5, 0, 1})).size(), 2u);
}

TEST(Factor, RepeatedFactorsAreReportedOnce) {
    const auto p = poly::mul(poly::from_ints({-1, 1}), poly::from_ints({-1, 1}));
    EXPECT_EQ(irreducible_factors(poly::mul(p, poly::from_ints({1, 1}))).size(), 2u);
}

TEST(MinimalPolynomial, FourPisotCases) {
    EXPECT_EQ(pf_minimal_polynomial(poly::characteristic_polynomial(mn_matrix(2))), (IntPolynomial{-1, -1, 1}));
    EXPECT_EQ(pf_minimal_polynomial(poly::characteristic_polynomial(mn_matrix(3))), (IntPolynomial{1, -1, -2, 1}));
    EXPECT_EQ(pf_minimal_polynomial(poly::characteristic_polynomial(mn_matrix(4))), (IntPolynomial{1, 0, -3, 1}));
    EXPECT_EQ(pf_minimal_polynomial(poly::characteristic_polynomial(mn_matrix(7))), (IntPolynomial{1, 1, -4, -4, 1}));
}

TEST(FieldElement, MultiplicationReducesByMinimalPolynomial) {
    const auto F = cubic();
    const auto lam = FieldElement::generator(F);
    EXPECT_EQ((lam * (lam * lam)).coords(), (std::vector<BigInt>{-1, 0, 3}));
    const auto x = FieldElement::from_ints(F, {2, -5, 7});
    EXPECT_EQ(x * FieldElement::one(F), x);
    const auto G = NumberField::create(IntPolynomial{-1, -1, 1});
    const auto tau = FieldElement::generator(G);
    EXPECT_EQ((tau * tau).coords(), (std::vector<BigInt>{1, 1}));
}

TEST(FieldElement, Inverses) {
    const auto F = cubic();
    const auto lam = FieldElement::generator(F);
    EXPECT_EQ(lam.inverse().coords(), (std::vector<BigInt>{0, 3, -1}));
    EXPECT_EQ(FieldElement::one(F).inverse(), FieldElement::one(F));
    const auto G = NumberField::create(IntPolynomial{-1, -1, 1});
    EXPECT_EQ(FieldElement::generator(G).inverse().coords(), (std::vector<BigInt>{-1, 1}));
    try {
        FieldElement::constant(F, 2).inverse();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAUnit);
    }
    try {
        FieldElement::zero(F).inverse();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroElement);
    }
    const auto half = RationalElement::constant(F, 2).inverse();
    EXPECT_EQ(half.coords()[0], BigRational(1, 2));
}

TEST(FieldElement, FieldMismatchIsRejected) {
    const auto a = FieldElement::one(cubic());
    const auto b = FieldElement::one(NumberField::create(IntPolynomial{-1, -1, 1}));
    try {
        (void)(a + b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FieldMismatch);
    }
}

TEST(FieldElement, EmbeddingValuesAndMultiplicativity) {
    const auto F = cubic();
    const auto lam = FieldElement::generator(F);
    EXPECT_NEAR(lam.embed(0).value.real(), 2.879385241571817, 1e-14);
    EXPECT_EQ(FieldElement::one(F).embed(1).value.real(), 1.0);
    EXPECT_NEAR((lam * lam - FieldElement::one(F)).value(), 7.290859374, 1e-8);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-20, 20);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = FieldElement::from_ints(F, {d(rng), d(rng), d(rng)});
        const auto y = FieldElement::from_ints(F, {d(rng), d(rng), d(rng)});
        for (std::size_t i = 0; i < 3; ++i) {
            const auto ex = x.embed(i), ey = y.embed(i), exy = (x * y).embed(i);
            const double bound = exy.error + std::abs(ex.value) * ey.error + std::abs(ey.value) * ex.error + ex.error * ey.error;
            EXPECT_LE(std::abs(exy.value - ex.value * ey.value), bound + 1e-12 * (1 + std::abs(exy.value)));
        }
    }
}

TEST(FieldElement, InverseRoundTripOnUnits) {
    const auto F = cubic();
    const auto lam = FieldElement::generator(F);
    const auto one = FieldElement::one(F);
    for (const auto& u : {lam, lam - one, lam * lam - one - one * lam, lam.pow(5), lam.pow(-3)}) {
        EXPECT_EQ(u * u.inverse(), one);
    }
}

TEST(FieldElement, ExactSign) {
    const auto F = cubic();
    const auto lam = FieldElement::generator(F);
    EXPECT_EQ(sign(lam - FieldElement::constant(F, 3)), -1);
    EXPECT_EQ(sign(lam - FieldElement::constant(F, 2)), 1);
    EXPECT_EQ(sign(FieldElement::zero(F)), 0);
    EXPECT_EQ(lam.to_string(), "λ");
    EXPECT_EQ((lam * lam - FieldElement::constant(F, 2) * lam).to_string(), "λ² − 2λ");
}
