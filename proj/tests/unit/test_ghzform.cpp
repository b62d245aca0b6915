#include "leggett/errors.hpp"
#include "leggett/geometry.hpp"
#include "leggett/ghzform.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace leggett;
using testsupport::kPi;

namespace {

std::vector<SphericalAngles> random_angles(RngStream& rng, int n) {
    std::vector<SphericalAngles> a;
    for (int j = 0; j < n; ++j) {
        a.push_back(SphericalAngles::make(std::acos(2 * rng.uniform() - 1), rng.uniform(0, 2 * kPi)));
    }
    return a;
}

std::vector<UnitVector3> to_dirs(const std::vector<SphericalAngles>& a) {
    std::vector<UnitVector3> d;
    for (const auto& x : a) {
        d.push_back(from_spherical(x));
    }
    return d;
}

}  // namespace

TEST(GhzClosed, MatchesStateVectorForBothParities) {
    RngStream rng(21);
    for (int n = 2; n <= 7; ++n) {
        for (int t = 0; t < 200; ++t) {
            const auto a = random_angles(rng, n);
            const auto d = to_dirs(a);
            const double ref = testsupport::ghz_expectation(n, d);
            EXPECT_NEAR(ghz_correlation_closed(n, a), ref, 1e-13) << "N=" << n;
            EXPECT_NEAR(ghz_correlation_closed(n, d), ref, 1e-13) << "N=" << n;
        }
    }
}

TEST(GhzClosed, ListedExamples) {
    const std::vector<UnitVector3> x3(3, testsupport::unit(1, 0, 0));
    EXPECT_DOUBLE_EQ(ghz_correlation_closed(3, x3), 1.0);
    const std::vector<UnitVector3> z4(4, testsupport::unit(0, 0, 1));
    EXPECT_DOUBLE_EQ(ghz_correlation_closed(4, z4), 1.0);
    const std::vector<UnitVector3> z3(3, testsupport::unit(0, 0, 1));
    EXPECT_DOUBLE_EQ(ghz_correlation_closed(3, z3), 0.0);
}

TEST(GhzClosed, ArityAndPartyCountErrors) {
    const std::vector<UnitVector3> d(2, testsupport::unit(1, 0, 0));
    EXPECT_THROW(ghz_correlation_closed(3, d), ValidationError);
    EXPECT_THROW(ghz_correlation_closed(1, std::span<const UnitVector3>(d.data(), 1)), ValidationError);
}

TEST(GhzXy, CosineOfAzimuthSum) {
    RngStream rng(22);
    for (int n = 2; n <= 6; ++n) {
        for (int t = 0; t < 100; ++t) {
            std::vector<double> az;
            std::vector<SphericalAngles> a;
            for (int j = 0; j < n; ++j) {
                az.push_back(rng.uniform(-10, 10));
                a.push_back(SphericalAngles::make(kPi / 2, az.back()));
            }
            EXPECT_NEAR(ghz_correlation_xy(n, az), ghz_correlation_closed(n, a), 1e-12);
            const auto report = ghz_correlation_report(n, a);
            EXPECT_EQ(report.branch, FormulaBranch::XyPlane);
            EXPECT_EQ(report.parity, parity_of(n));
        }
    }
}

TEST(GhzReport, FullBranchOffPlane) {
    RngStream rng(23);
    const auto a = random_angles(rng, 4);
    const auto r = ghz_correlation_report(4, a);
    EXPECT_EQ(r.branch, FormulaBranch::Full);
    EXPECT_EQ(r.parity, Parity::Even);
    EXPECT_DOUBLE_EQ(r.value, ghz_correlation_closed(4, a));
}

TEST(GhzReduced, MatchesStateVectorForEveryTracedParty) {
    RngStream rng(24);
    for (int n = 2; n <= 7; ++n) {
        for (int traced = 1; traced <= n; ++traced) {
            for (int t = 0; t < 30; ++t) {
                const auto d = testsupport::random_dirs(rng, n - 1);
                std::vector<std::optional<Vec3>> full;
                std::size_t next = 0;
                for (int j = 1; j <= n; ++j) {
                    full.emplace_back(j == traced ? std::nullopt : std::optional<Vec3>(d[next++].vec()));
                }
                EXPECT_NEAR(ghz_reduced_correlation(n, traced, d), testsupport::ghz_expectation(n, full), 1e-13);
            }
        }
    }
}

TEST(GhzReduced, EvenNVanishesIdentically) {
    RngStream rng(25);
    for (int n : {2, 4, 6}) {
        const auto d = testsupport::random_dirs(rng, n - 1);
        EXPECT_EQ(ghz_reduced_correlation(n, 1, d), 0.0);
    }
    const auto d = testsupport::random_dirs(rng, 2);
    EXPECT_THROW(ghz_reduced_correlation(3, 4, d), ValidationError);
}

TEST(TripartiteCorrelators, AgreeWithDirectEvaluationOnListedSettings) {
    RngStream rng(26);
    for (int t = 0; t < 500; ++t) {
        const double theta = rng.uniform(0, kPi);
        const double phi = rng.uniform(0, 2 * kPi);
        const double psi = rng.uniform(0, 2 * kPi);
        const auto s = fig1_settings(theta, phi, psi);
        const auto table = fig1_azimuth_table(phi, psi);
        AzimuthSums sums;
        for (std::size_t k = 0; k < 3; ++k) {
            sums.unprimed[k] = table[k][0][0] + table[k][0][1];
            sums.primed[k] = table[k][1][0] + table[k][1][1];
        }
        const auto c = tripartite_correlators(theta, sums);
        for (int k = 0; k < 3; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const auto u = s.tuple(k, false);
            const auto p = s.tuple(k, true);
            EXPECT_NEAR(c.unprimed[ku], ghz_correlation_closed(3, u), 1e-13);
            EXPECT_NEAR(c.primed[ku], ghz_correlation_closed(3, p), 1e-13);
        }
    }
    EXPECT_THROW(tripartite_correlators(-0.1, AzimuthSums{}), ValidationError);
}
