#include "leggett/errors.hpp"
#include "leggett/geometry.hpp"
#include "leggett/ineq.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace leggett;
using testsupport::kPi;
using testsupport::unit;

namespace {

// sum_k |beta_k| + 2|cos| (plus) and + 2|sin| (minus), written out from
// the state-vector oracle.
TightPair reference_tight(const SettingsEnsemble& s) {
    double beta = 0.0;
    for (int k = 0; k < 3; ++k) {
        const auto u = s.tuple(k, false);
        const auto p = s.tuple(k, true);
        beta += std::abs(testsupport::ghz_expectation(s.parties, std::vector<UnitVector3>(u.begin(), u.end())) +
                         testsupport::ghz_expectation(s.parties, std::vector<UnitVector3>(p.begin(), p.end())));
    }
    return {beta + 2 * std::abs(std::cos(s.theta / 2)), beta + 2 * std::abs(std::sin(s.theta / 2))};
}

}  // namespace

TEST(Tight, ClosedFormMatchesTraceAndOracle) {
    RngStream rng(41);
    const auto trace = quantum_correlator(ghz_density(3));
    const auto closed = ghz_closed_correlator(3);
    for (int t = 0; t < 300; ++t) {
        const auto a = InequalityAngles::make(rng.uniform(0, kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
        const auto s = fig1_settings(a.theta, a.phi, a.psi);
        const TightPair f = tripartite_ghz_closed(a);
        const TightPair q = evaluate_tight(trace, s);
        const TightPair c = evaluate_tight(closed, s);
        const TightPair r = reference_tight(s);
        EXPECT_NEAR(q.plus, f.plus, 1e-12);
        EXPECT_NEAR(q.minus, f.minus, 1e-12);
        EXPECT_NEAR(c.plus, f.plus, 1e-12);
        EXPECT_NEAR(c.minus, f.minus, 1e-12);
        EXPECT_NEAR(r.plus, f.plus, 1e-12);
        EXPECT_NEAR(r.minus, f.minus, 1e-12);
    }
}

TEST(Tight, AlphaTermsVanishForGhz3) {
    RngStream rng(42);
    for (int t = 0; t < 100; ++t) {
        const auto s = fig1_settings(rng.uniform(0, kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
        const auto terms = compute_terms(quantum_correlator(ghz_density(3)), s);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_NEAR(terms.alpha_plus[k], 0.0, 1e-14);
            EXPECT_NEAR(terms.alpha_minus[k], 0.0, 1e-14);
        }
    }
}

TEST(Tight, RefusesNonvanishingAlpha) {
    // A constant correlator gives alpha_plus = 1.
    const Correlator half = [](std::span<const int>, std::span<const UnitVector3>) { return 0.5; };
    EXPECT_THROW(evaluate_tight(half, fig1_settings(1.0, 1.0, 1.0)), PreconditionError);
}

TEST(General, ZeroCorrelatorStaysBelowBounds) {
    RngStream rng(43);
    for (int t = 0; t < 100; ++t) {
        const double theta = rng.uniform(0, kPi);
        const auto ev = evaluate_general(zero_correlator(), fig1_settings(theta, 1.0, 2.0));
        EXPECT_EQ(ev.lhs_general_plus, 0.0);
        EXPECT_LT(ev.margin_general_plus, 0.0);
        EXPECT_LT(ev.margin_general_minus, 0.0);
        EXPECT_NEAR(ev.bound_plus, 6 - 2 * std::abs(std::cos(theta / 2)), 0);
        EXPECT_NEAR(ev.bound_minus, 6 - 2 * std::abs(std::sin(theta / 2)), 0);
    }
}

TEST(General, GeneralFormEqualsTightWhenAlphaVanishes) {
    // With alpha = 0, min(|a-b|, |a+b|) = |b|, so the general LHS equals
    // L -+ 2|cos| and the margins coincide.
    RngStream rng(44);
    for (int t = 0; t < 100; ++t) {
        const auto s = fig1_settings(rng.uniform(0, kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
        const auto ev = evaluate_general(ghz_closed_correlator(3), s);
        EXPECT_NEAR(ev.margin_general_plus, ev.margin_tight_plus, 1e-13);
        EXPECT_NEAR(ev.margin_general_minus, ev.margin_tight_minus, 1e-13);
    }
}

TEST(General, ContractErrorOnOutOfRangeCorrelator) {
    const Correlator bad = [](std::span<const int>, std::span<const UnitVector3>) { return 1.5; };
    EXPECT_THROW(evaluate_general(bad, fig1_settings(1.0, 1.0, 1.0)), ContractError);
    const Correlator edge = [](std::span<const int>, std::span<const UnitVector3>) { return 1.0 + 1e-10; };
    EXPECT_NO_THROW(evaluate_general(edge, fig1_settings(1.0, 1.0, 1.0)));
}

TEST(General, InvalidEnsembleRejected) {
    auto s = fig1_settings(1.0, 1.0, 1.0);
    s.settings[0][0] = unit(0, 0, 1);
    EXPECT_THROW(evaluate_general(zero_correlator(), s), ValidationError);
}

TEST(ClosedForm, MaximumAndBoundaries) {
    const double max = 2 * (std::sqrt(5.0) + 1);
    const auto p = tripartite_ghz_closed_unchecked(kPi - 2 * kTheta0, 0.0, kPi + 2 * kTheta0);
    EXPECT_NEAR(p.plus, max, 1e-13);
    const auto m = tripartite_ghz_closed_unchecked(2 * kTheta0, 0.0, 2 * kPi - 2 * kTheta0);
    EXPECT_NEAR(m.minus, max, 1e-13);
    // theta = 0: 4 + 2|cos((phi + psi)/2)| <= 6.
    RngStream rng(45);
    for (int t = 0; t < 1000; ++t) {
        const double phi = rng.uniform(0, 2 * kPi);
        const double psi = rng.uniform(0, 2 * kPi);
        const auto z = tripartite_ghz_closed_unchecked(0, phi, psi);
        EXPECT_NEAR(z.plus, 4 + 2 * std::abs(std::cos((phi + psi) / 2)), 1e-13);
        EXPECT_LE(z.plus, 6 + 1e-12);
        EXPECT_LE(z.minus, 6 + 1e-12);
        const auto e = tripartite_ghz_closed_unchecked(kPi, phi, psi);
        EXPECT_LE(e.plus, 6 + 1e-12);
        EXPECT_LE(e.minus, 6 + 1e-12);
    }
    EXPECT_THROW(InequalityAngles::make(4.0, 0, 0), ValidationError);
    EXPECT_THROW(InequalityAngles::make(1.0, 0, 7.0), ValidationError);
}

TEST(ClosedForm, PlusAtThetaEqualsMinusAtReflectedTheta) {
    RngStream rng(46);
    for (int t = 0; t < 1000; ++t) {
        const double theta = rng.uniform(0, kPi);
        const double phi = rng.uniform(0, 2 * kPi);
        const double psi = rng.uniform(0, 2 * kPi);
        // Keep theta + phi + psi fixed so the |cos| tails agree.
        const double psi2 = psi + 2 * theta - kPi;
        EXPECT_NEAR(tripartite_ghz_closed_unchecked(theta, phi, psi).plus,
                    tripartite_ghz_closed_unchecked(kPi - theta, phi, psi2).minus, 1e-12);
    }
}

TEST(DesignatedLoop, GhzSymmetryMakesEveryPartyAgree) {
    RngStream rng(47);
    for (int n = 3; n <= 5; ++n) {
        const auto corr = quantum_correlator(ghz_density(n));
        for (int t = 0; t < 5; ++t) {
            const double theta = rng.uniform(0, kPi);
            const auto table = fig1_azimuth_table(n, rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
            const auto ref = evaluate_general(corr, xy_plane_settings(n, 1, theta, table));
            for (int i = 2; i <= n; ++i) {
                const auto ev = evaluate_general(corr, xy_plane_settings(n, i, theta, table));
                EXPECT_NEAR(ev.lhs_general_plus, ref.lhs_general_plus, 1e-12);
                EXPECT_NEAR(ev.lhs_general_minus, ref.lhs_general_minus, 1e-12);
            }
        }
    }
}

TEST(Bipartite, BellCorrelatorMatchesTrace) {
    // Phi+ = GHZ(2), whose correlator is m1 n1 - m2 n2 + m3 n3.
    RngStream rng(48);
    const auto bell = bell_phi_plus_correlator();
    const auto trace = quantum_correlator(ghz_density(2));
    const int both[2] = {1, 2};
    for (int t = 0; t < 200; ++t) {
        const auto d = testsupport::random_dirs(rng, 2);
        EXPECT_NEAR(bell(both, d), trace(both, d), 1e-14);
    }
}

TEST(Bipartite, LhsIsAverageOfPairSums) {
    RngStream rng(49);
    const auto bell = bell_phi_plus_correlator();
    for (int t = 0; t < 100; ++t) {
        const double theta = rng.uniform(0, kPi);
        std::array<std::vector<UnitVector3>, 3> rest;
        for (auto& r : rest) {
            r.push_back(uniform_on_sphere(rng));
        }
        const auto s = testsupport::shared_rest_ensemble(2, 1, theta, rest);
        const auto r = bipartite_lhs(bell, s);
        double acc = 0;
        const int both[2] = {1, 2};
        for (int k = 0; k < 3; ++k) {
            acc += std::abs(bell(both, s.tuple(k, false)) + bell(both, s.tuple(k, true)));
        }
        EXPECT_NEAR(r.lhs, acc / 3, 1e-15);
        EXPECT_NEAR(r.bound_sin, 2 - 2.0 / 3 * std::sin(theta / 2), 1e-15);
        EXPECT_NEAR(r.bound_cos, 2 - 2.0 / 3 * std::cos(theta / 2), 1e-15);
    }
    EXPECT_THROW(bipartite_lhs(bell, fig1_settings(1, 1, 1)), ValidationError);
}

TEST(PriorWork, NeedsSharedSettingsOffTheDesignatedParty) {
    EXPECT_THROW(priorwork_reduction(ghz_closed_correlator(3), fig1_settings(1.0, 1.0, 1.0)), PreconditionError);
}

TEST(PriorWork, EvenNExceedsSixButOddNStaysBelow) {
    // Choosing every non-designated setting so that C(e_k, rest) = +-1
    // gives sum |beta_k| = 6 cos(theta/2); with 2 sin(theta/2) the maximum
    // is sqrt(40) at tan(theta/2) = 1/3.
    const double theta = 2 * std::atan(1.0 / 3.0);
    const UnitVector3 x = unit(1, 0, 0);
    const UnitVector3 y = unit(0, 1, 0);
    const UnitVector3 z = unit(0, 0, 1);
    const auto two = testsupport::shared_rest_ensemble(2, 1, theta, {{{x}, {y}, {z}}});
    EXPECT_NEAR(priorwork_reduction(ghz_closed_correlator(2), two), std::sqrt(40.0), 1e-12);
    EXPECT_NEAR(priorwork_reduction(quantum_correlator(ghz_density(2)), two), std::sqrt(40.0), 1e-12);
    const auto four = testsupport::shared_rest_ensemble(4, 1, theta, {{{x, x, x}, {x, x, y}, {z, z, z}}});
    EXPECT_NEAR(priorwork_reduction(quantum_correlator(ghz_density(4)), four), std::sqrt(40.0), 1e-12);

    // Odd N: C(z, rest) has no prod-z term, so sum |beta| <= 2 cos(theta/2) sqrt 6
    // and the whole LHS is at most sqrt(24 + 4) = 2 sqrt 7 < 6.
    RngStream rng(50);
    const auto corr = ghz_closed_correlator(3);
    double best = 0.0;
    for (int t = 0; t < 20000; ++t) {
        std::array<std::vector<UnitVector3>, 3> rest;
        for (auto& r : rest) {
            r = testsupport::random_dirs(rng, 2);
        }
        best = std::max(best, priorwork_reduction(corr, testsupport::shared_rest_ensemble(3, 1, rng.uniform(0, kPi), rest)));
    }
    EXPECT_LE(best, 2 * std::sqrt(7.0) + 1e-12);
    EXPECT_LT(best, 6.0);
}
