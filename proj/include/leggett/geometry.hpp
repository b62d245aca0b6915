#pragma once

// Measurement-setting ensembles: three pairs of N-party setting tuples
// sharing a pair angle theta at one designated party, whose pair sums and
// differences span two orthonormal frames.

#include "leggett/qcore.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace leggett {

inline constexpr double kEnsembleTol = 1e-10;

UnitVector3 from_spherical(const SphericalAngles& a);
/// Unchecked-range convenience used when building listed settings.
UnitVector3 from_spherical(double polar, double azimuth);

using Frame = std::array<UnitVector3, 3>;

struct SettingsEnsemble {
    int parties = 0;
    int designated = 1;  // 1-based
    double theta = 0.0;
    std::array<std::vector<UnitVector3>, 3> settings;
    std::array<std::vector<UnitVector3>, 3> settings_primed;
    Frame e;
    Frame e_prime;

    [[nodiscard]] std::span<const UnitVector3> tuple(int k, bool primed) const {
        return primed ? settings_primed[static_cast<std::size_t>(k)]
                      : settings[static_cast<std::size_t>(k)];
    }
};

/// The designated party's theta-triple (a_k, a'_k) with its analytic frames.
struct DesignatedTriple {
    std::array<UnitVector3, 3> unprimed;
    std::array<UnitVector3, 3> primed;
    Frame e;
    Frame e_prime;
};

DesignatedTriple designated_triple(double theta);

/// Tripartite arrangement: party 1 gets the theta-triple, parties 2 and 3
/// the listed x-y plane vectors with free angles phi (party 2) and psi (party 3).
SettingsEnsemble fig1_settings(double theta, double phi, double psi);

/// azimuths[k][primed] lists the azimuths of the N-1 non-designated parties
/// in increasing party order (full angles).
using AzimuthTable = std::array<std::array<std::vector<double>, 2>, 3>;

AzimuthTable fig1_azimuth_table(double phi, double psi);
/// The same listed azimuths for the first two non-designated parties of an
/// N-party ensemble, padded with azimuth 0 for the rest. N = 2 keeps only
/// the phi party.
AzimuthTable fig1_azimuth_table(int parties, double phi, double psi);

SettingsEnsemble xy_plane_settings(int parties, int designated, double theta,
                                   const AzimuthTable& azimuths);

struct ValidationIssue {
    std::string check;
    int k = -1;  // 0-based pair index, -1 when not pair-specific
    double residual = 0.0;
};

struct ValidationReport {
    bool ok = true;
    bool degenerate_sum = false;         // cos(theta/2) = 0, e_k not recoverable
    bool degenerate_difference = false;  // sin(theta/2) = 0, e'_k not recoverable
    double max_residual = 0.0;
    std::vector<ValidationIssue> failures;
};

ValidationReport validate_ensemble(const SettingsEnsemble& s, double tol = kEnsembleTol);

/// Rows of a proper rotation matrix.
using Rotation = std::array<Vec3, 3>;

/// Applies the rotation to every setting and frame vector; validity is preserved.
SettingsEnsemble rotated(const SettingsEnsemble& s, const Rotation& r);

/// sum_k |u . e_k|; at least 1 for any orthonormal frame.
double frame_projection_sum(const UnitVector3& u, const Frame& frame);

}  // namespace leggett
