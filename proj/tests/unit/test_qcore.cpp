#include "leggett/errors.hpp"
#include "leggett/qcore.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace leggett;
using testsupport::C;

TEST(UnitVector, RejectsNonUnitAndNamesNorm) {
    EXPECT_NO_THROW(UnitVector3::make(0.6, 0.8, 0.0));
    try {
        UnitVector3::make(1.0, 1.0, 0.0);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("1.414"), std::string::npos) << e.what();
    }
    EXPECT_THROW(UnitVector3::normalized({0, 0, 0}), ValidationError);
}

TEST(SphericalAngles, PolarRangeAndAzimuthWrap) {
    EXPECT_THROW(SphericalAngles::make(-0.1, 0.0), ValidationError);
    EXPECT_THROW(SphericalAngles::make(3.2, 0.0), ValidationError);
    EXPECT_THROW(SphericalAngles::make(1.0, std::nan("")), ValidationError);
    const auto a = SphericalAngles::make(1.0, -0.5);
    EXPECT_NEAR(a.azimuth(), 2 * testsupport::kPi - 0.5, 1e-15);
    EXPECT_LT(SphericalAngles::make(1.0, 4 * testsupport::kPi).azimuth(), 2 * testsupport::kPi);
}

TEST(DensityMatrix, ValidatesHermiticityTraceAndPositivity) {
    ComplexMatrix m(2, 2, {C(0.5), C(0.0, 0.1), C(0.0, 0.1), C(0.5)});
    EXPECT_THROW(DensityMatrix::make(m), ValidationError);  // not Hermitian
    EXPECT_THROW(DensityMatrix::make(ComplexMatrix(2, 2, {C(0.6), 0, 0, C(0.6)})), ValidationError);
    // Hermitian, unit trace, eigenvalues 1.5 and -0.5.
    EXPECT_THROW(DensityMatrix::make(ComplexMatrix(2, 2, {C(0.5), C(1.0), C(1.0), C(0.5)})), ValidationError);
    EXPECT_NO_THROW(DensityMatrix::make(ComplexMatrix(2, 2, {C(0.5), C(0.5), C(0.5), C(0.5)})));
    EXPECT_THROW(DensityMatrix::make(ComplexMatrix(3, 3)), ValidationError);
}

TEST(DensityMatrix, CapacityLimits) {
    EXPECT_THROW(ghz_density(1), CapacityError);
    EXPECT_THROW(ghz_density(13), CapacityError);
    EXPECT_EQ(ghz_density(12).parties(), 12);
}

TEST(GhzDensity, FourHalfEntries) {
    for (int n = 2; n <= 6; ++n) {
        const auto rho = ghz_density(n);
        const std::size_t d = rho.dim();
        int nonzero = 0;
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                if (std::abs(rho.matrix()(r, c)) > 0) {
                    ++nonzero;
                    EXPECT_DOUBLE_EQ(rho.matrix()(r, c).real(), 0.5);
                }
            }
        }
        EXPECT_EQ(nonzero, 4);
        EXPECT_NEAR(rho.matrix()(0, d - 1).real(), 0.5, 0);
        EXPECT_GE(min_eigenvalue(rho.matrix()), -1e-12);
    }
}

TEST(Pauli, SquaresToIdentityAndIsHermitian) {
    leggett::RngStream rng(7);
    for (int t = 0; t < 100; ++t) {
        const auto n = uniform_on_sphere(rng);
        const auto s = pauli_dot(n);
        EXPECT_LT(s.hermitian_residual(), 1e-15);
        EXPECT_TRUE((s * s).approx_equal(ComplexMatrix::identity(2), 1e-14));
        EXPECT_NEAR(std::abs(s.trace()), 0.0, 1e-15);
    }
}

TEST(Kron, ShapesAndMixedProduct) {
    leggett::RngStream rng(8);
    const auto a = pauli_dot(uniform_on_sphere(rng));
    const auto b = pauli_dot(uniform_on_sphere(rng));
    const auto c = pauli_dot(uniform_on_sphere(rng));
    const auto d = pauli_dot(uniform_on_sphere(rng));
    const auto ab = kron(a, b);
    EXPECT_EQ(ab.rows(), 4U);
    // (A x B)(C x D) = AC x BD
    EXPECT_TRUE((kron(a, b) * kron(c, d)).approx_equal(kron(a * c, b * d), 1e-13));
}

TEST(Bruteforce, MatchesStateVectorOracle) {
    leggett::RngStream rng(9);
    for (int n = 2; n <= 6; ++n) {
        const auto rho = ghz_density(n);
        for (int t = 0; t < 50; ++t) {
            const auto dirs = testsupport::random_dirs(rng, n);
            EXPECT_NEAR(correlation_bruteforce(rho, dirs), testsupport::ghz_expectation(n, dirs), 1e-13);
        }
    }
}

TEST(Bruteforce, ProductStateGivesBlochProducts) {
    // |0><0| x |+><+| has Bloch vectors z and x.
    const auto rho0 = ComplexMatrix(2, 2, {C(1), 0, 0, 0});
    const auto rhop = ComplexMatrix(2, 2, {C(0.5), C(0.5), C(0.5), C(0.5)});
    const auto rho = DensityMatrix::make(kron(rho0, rhop));
    leggett::RngStream rng(10);
    for (int t = 0; t < 50; ++t) {
        const auto d = testsupport::random_dirs(rng, 2);
        EXPECT_NEAR(correlation_bruteforce(rho, d), d[0].z() * d[1].x(), 1e-14);
    }
}

TEST(Multilinear, AgreesWithBruteforceAndIsLinearPerSlot) {
    leggett::RngStream rng(11);
    const auto rho = ghz_density(3);
    for (int t = 0; t < 50; ++t) {
        const auto d = testsupport::random_dirs(rng, 3);
        const std::vector<Vec3> v{d[0].vec(), d[1].vec(), d[2].vec()};
        EXPECT_NEAR(correlation_multilinear(rho, v), correlation_bruteforce(rho, d), 1e-14);

        const Vec3 a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Vec3 b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double s = rng.uniform(-3, 3);
        auto va = v;
        auto vb = v;
        auto vsum = v;
        va[1] = a;
        vb[1] = b;
        vsum[1] = a + s * b;
        EXPECT_NEAR(correlation_multilinear(rho, vsum),
                    correlation_multilinear(rho, va) + s * correlation_multilinear(rho, vb), 1e-12);
    }
}

TEST(PartialTrace, PreservesTraceAndMatchesIdentityInsertion) {
    leggett::RngStream rng(12);
    for (int n = 2; n <= 5; ++n) {
        const auto rho = ghz_density(n);
        for (int party = 1; party <= n; ++party) {
            const auto red = partial_trace(rho, party);
            EXPECT_EQ(red.parties(), n - 1);
            EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-15);
            const auto d = testsupport::random_dirs(rng, n - 1);
            std::vector<std::optional<Vec3>> full;
            std::size_t next = 0;
            for (int j = 1; j <= n; ++j) {
                if (j == party) {
                    full.emplace_back(std::nullopt);
                } else {
                    full.emplace_back(d[next++].vec());
                }
            }
            EXPECT_NEAR(correlation_bruteforce(red, d), testsupport::ghz_expectation(n, full), 1e-14);
        }
    }
    EXPECT_THROW(partial_trace(ghz_density(2), 3), ValidationError);
}

TEST(Bruteforce, RejectsWrongArity) {
    leggett::RngStream rng(13);
    const auto d = testsupport::random_dirs(rng, 2);
    EXPECT_THROW(correlation_bruteforce(ghz_density(3), d), ValidationError);
}
