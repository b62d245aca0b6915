#pragma once

// Closed-form correlation functions of the N-qubit GHZ state.
//
// All angles are full spherical angles: a direction is
// (sin t cos p, sin t sin p, cos t). Half-angle bookkeeping, where it
// appears in reporting, happens in the geometry layer.

#include "leggett/qcore.hpp"

#include <array>
#include <span>

namespace leggett {

enum class Parity { Odd, Even };
enum class FormulaBranch { Full, XyPlane, Reduced };

struct CorrelationReport {
    double value = 0.0;
    Parity parity = Parity::Odd;
    FormulaBranch branch = FormulaBranch::Full;
};

inline Parity parity_of(int n) { return n % 2 == 0 ? Parity::Even : Parity::Odd; }

/// odd N: cos(sum phi) prod sin(theta); even N adds prod cos(theta).
double ghz_correlation_closed(int n, std::span<const SphericalAngles> angles);

/// Same correlation written directly in direction cosines:
/// Re prod (x + i y) plus prod z for even N.
double ghz_correlation_closed(int n, std::span<const UnitVector3> dirs);

/// Every direction in the x-y plane: cos(sum of azimuths).
double ghz_correlation_xy(int n, std::span<const double> azimuths);

/// Correlator of the (N-1)-party reduced GHZ state: prod z for odd N, 0 for even N.
/// `traced_party` (1-based) only selects which party is absent; GHZ symmetry
/// makes the value independent of it.
double ghz_reduced_correlation(int n, int traced_party, std::span<const UnitVector3> dirs);

CorrelationReport ghz_correlation_report(int n, std::span<const SphericalAngles> angles);

/// Sums of the actual azimuths of parties 2..N in the tripartite-style
/// arrangement, one unprimed and one primed value per k.
struct AzimuthSums {
    std::array<double, 3> unprimed{};
    std::array<double, 3> primed{};
};

/// The six correlators C(X_k), C(X_k') when party 1 carries the
/// theta-parameterized triple and every other party sits in the x-y plane.
struct TripartiteCorrelators {
    std::array<double, 3> unprimed{};
    std::array<double, 3> primed{};
};

TripartiteCorrelators tripartite_correlators(double theta, const AzimuthSums& sums);

}  // namespace leggett
