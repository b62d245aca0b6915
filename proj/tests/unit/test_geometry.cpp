#include "leggett/errors.hpp"
#include "leggett/geometry.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace leggett;
using testsupport::kPi;

namespace {

double max_diff(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

Rotation random_rotation(RngStream& rng) {
    // Gram-Schmidt on random vectors, then fix the handedness.
    const Vec3 a = uniform_on_sphere(rng).vec();
    Vec3 b = uniform_on_sphere(rng).vec();
    b = b - a.dot(b) * a;
    b = (1.0 / b.norm()) * b;
    return {a, b, a.cross(b)};
}

}  // namespace

TEST(Fig1Settings, ValidAcrossTheParameterBox) {
    RngStream rng(31);
    for (int t = 0; t < 2000; ++t) {
        const auto s = fig1_settings(rng.uniform(0, kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
        const auto r = validate_ensemble(s);
        EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures.front().check);
        EXPECT_EQ(s.parties, 3);
        EXPECT_EQ(s.designated, 1);
    }
}

TEST(Fig1Settings, ListedVectors) {
    const double theta = 0.8;
    const double h = theta / 2;
    const auto s = fig1_settings(theta, 1.0, 2.0);
    EXPECT_LT(max_diff(s.settings[0][0].vec(), {std::cos(h), std::sin(h), 0}), 1e-15);
    EXPECT_LT(max_diff(s.settings_primed[0][0].vec(), {std::cos(h), -std::sin(h), 0}), 1e-15);
    EXPECT_LT(max_diff(s.settings[1][0].vec(), {0, std::cos(h), std::sin(h)}), 1e-15);
    EXPECT_LT(max_diff(s.settings_primed[1][0].vec(), {0, std::cos(h), -std::sin(h)}), 1e-15);
    EXPECT_LT(max_diff(s.settings[2][0].vec(), {std::sin(h), 0, std::cos(h)}), 1e-15);
    EXPECT_LT(max_diff(s.settings_primed[2][0].vec(), {-std::sin(h), 0, std::cos(h)}), 1e-15);
    // Parties 2 and 3 sit in the x-y plane at half the free angles for k = 1.
    EXPECT_LT(max_diff(s.settings[0][1].vec(), {std::cos(0.5), std::sin(0.5), 0}), 1e-15);
    EXPECT_LT(max_diff(s.settings_primed[0][2].vec(), {std::cos(-1.0), std::sin(-1.0), 0}), 1e-15);
    EXPECT_LT(max_diff(s.settings_primed[2][2].vec(), {-1, 0, 0}), 1e-15);
}

TEST(Fig1Settings, RangeErrors) {
    EXPECT_THROW(fig1_settings(-1e-3, 0, 0), ValidationError);
    EXPECT_THROW(fig1_settings(kPi + 1e-3, 0, 0), ValidationError);
    EXPECT_THROW(fig1_settings(1.0, 7.0, 0), ValidationError);
    EXPECT_THROW(fig1_settings(1.0, 0, -0.1), ValidationError);
}

TEST(Validate, DegenerateEndpointsUseAnalyticFrames) {
    const auto s0 = fig1_settings(0.0, 1.0, 1.0);
    const auto r0 = validate_ensemble(s0);
    EXPECT_TRUE(r0.ok);
    EXPECT_TRUE(r0.degenerate_difference);
    EXPECT_FALSE(r0.degenerate_sum);
    const auto rpi = validate_ensemble(fig1_settings(kPi, 1.0, 1.0));
    EXPECT_TRUE(rpi.ok);
    EXPECT_TRUE(rpi.degenerate_sum);
    EXPECT_FALSE(rpi.degenerate_difference);
}

TEST(Validate, FlagsBrokenEnsembles) {
    auto s = fig1_settings(1.0, 0.5, 0.5);
    s.settings_primed[1][0] = from_spherical(0.3, 0.2);
    auto r = validate_ensemble(s);
    EXPECT_FALSE(r.ok);
    ASSERT_FALSE(r.failures.empty());
    EXPECT_EQ(r.failures.front().k, 1);

    s = fig1_settings(1.0, 0.5, 0.5);
    s.e[0] = testsupport::unit(0, 1, 0);
    EXPECT_FALSE(validate_ensemble(s).ok);

    s = fig1_settings(1.0, 0.5, 0.5);
    s.settings[2].pop_back();
    EXPECT_FALSE(validate_ensemble(s).ok);

    s = fig1_settings(1.0, 0.5, 0.5);
    s.theta = 1.1;
    EXPECT_FALSE(validate_ensemble(s).ok);
}

TEST(Validate, RotationPreservesValidity) {
    RngStream rng(32);
    for (int t = 0; t < 500; ++t) {
        const auto s = fig1_settings(rng.uniform(0, kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
        const auto rs = rotated(s, random_rotation(rng));
        EXPECT_TRUE(validate_ensemble(rs).ok);
        EXPECT_NEAR(rs.settings[0][0].dot(rs.settings_primed[0][0]), std::cos(s.theta), 1e-13);
    }
}

TEST(DesignatedTriple, ThetaReflectionSwapsFramePairs) {
    // theta -> pi - theta maps a_k to R_k a_k and a'_k to -R_k a'_k, where
    // R_k exchanges e_k and e'_k.
    const std::array<std::array<int, 2>, 3> swaps{{{0, 1}, {1, 2}, {2, 0}}};
    const auto reflect = [](const Vec3& v, std::array<int, 2> sw) {
        double c[3] = {v.x, v.y, v.z};
        std::swap(c[sw[0]], c[sw[1]]);
        return Vec3{c[0], c[1], c[2]};
    };
    RngStream rng(33);
    for (int t = 0; t < 200; ++t) {
        const double theta = rng.uniform(0, kPi);
        const auto a = designated_triple(theta);
        const auto b = designated_triple(kPi - theta);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_LT(max_diff(b.unprimed[k].vec(), reflect(a.unprimed[k].vec(), swaps[k])), 1e-15);
            EXPECT_LT(max_diff(b.primed[k].vec(), -reflect(a.primed[k].vec(), swaps[k])), 1e-15);
        }
    }
}

TEST(FrameBound, AtLeastOneForEveryUnitVector) {
    RngStream rng(34);
    double worst = 10.0;
    for (int t = 0; t < 20000; ++t) {
        const Rotation r = random_rotation(rng);
        const Frame f{UnitVector3::normalized(r[0]), UnitVector3::normalized(r[1]), UnitVector3::normalized(r[2])};
        worst = std::min(worst, frame_projection_sum(uniform_on_sphere(rng), f));
    }
    EXPECT_GE(worst, 1.0 - 1e-12);
    const Frame f = designated_triple(1.0).e;
    EXPECT_NEAR(frame_projection_sum(f[1], f), 1.0, 1e-15);
    EXPECT_NEAR(frame_projection_sum(UnitVector3::normalized({1, 1, 1}), f), std::sqrt(3.0), 1e-15);
}

TEST(XyPlaneSettings, GeneralNAndDesignatedParty) {
    RngStream rng(35);
    for (int n = 2; n <= 6; ++n) {
        for (int i = 1; i <= n; ++i) {
            const auto s = xy_plane_settings(n, i, rng.uniform(0, kPi), fig1_azimuth_table(n, 1.0, 2.0));
            EXPECT_TRUE(validate_ensemble(s).ok);
            for (int k = 0; k < 3; ++k) {
                for (int j = 0; j < n; ++j) {
                    if (j + 1 != i) {
                        EXPECT_NEAR(s.tuple(k, false)[static_cast<std::size_t>(j)].z(), 0.0, 1e-15);
                    }
                }
            }
        }
    }
    EXPECT_THROW(xy_plane_settings(3, 4, 1.0, fig1_azimuth_table(3, 0, 0)), ValidationError);
    EXPECT_THROW(xy_plane_settings(4, 1, 1.0, fig1_azimuth_table(0, 0)), ValidationError);
    EXPECT_THROW(xy_plane_settings(1, 1, 1.0, fig1_azimuth_table(0, 0)), ValidationError);
}

TEST(AzimuthTable, PaddingKeepsListedEntries) {
    const auto t3 = fig1_azimuth_table(3, 1.0, 2.0);
    EXPECT_EQ(t3, fig1_azimuth_table(1.0, 2.0));
    const auto t5 = fig1_azimuth_table(5, 1.0, 2.0);
    EXPECT_EQ(t5[0][0], (std::vector<double>{0.5, 1.0, 0.0, 0.0}));
    const auto t2 = fig1_azimuth_table(2, 1.0, 2.0);
    EXPECT_EQ(t2[2][1], (std::vector<double>{0.0}));
}
