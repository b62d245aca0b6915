#pragma once

// Independent references for the tests: GHZ expectations computed on a
// state vector by applying single-qubit operators, never touching the
// density-matrix code under test.

#include "leggett/geometry.hpp"
#include "leggett/qcore.hpp"
#include "leggett/rng.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace testsupport {

using C = std::complex<double>;

inline std::vector<C> ghz_vector(int n) {
    std::vector<C> psi(std::size_t{1} << n, 0.0);
    psi.front() = psi.back() = 1.0 / std::sqrt(2.0);
    return psi;
}

// Applies sigma.d to qubit `q` (0-based, qubit 0 is the most significant bit).
inline void apply_pauli(std::vector<C>& psi, int n, int q, const leggett::Vec3& d) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (i & bit) {
            continue;
        }
        const C a = psi[i];
        const C b = psi[i | bit];
        // [[z, x - iy], [x + iy, -z]]
        psi[i] = d.z * a + C(d.x, -d.y) * b;
        psi[i | bit] = C(d.x, d.y) * a - d.z * b;
    }
}

// <GHZ| prod_j sigma.d_j |GHZ>; parties without a direction get the identity.
inline double ghz_expectation(int n, const std::vector<std::optional<leggett::Vec3>>& dirs) {
    const auto psi = ghz_vector(n);
    auto phi = psi;
    for (int q = 0; q < n; ++q) {
        if (dirs[static_cast<std::size_t>(q)]) {
            apply_pauli(phi, n, q, *dirs[static_cast<std::size_t>(q)]);
        }
    }
    C acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        acc += std::conj(psi[i]) * phi[i];
    }
    return acc.real();
}

inline double ghz_expectation(int n, const std::vector<leggett::UnitVector3>& dirs) {
    std::vector<std::optional<leggett::Vec3>> d;
    for (const auto& v : dirs) {
        d.emplace_back(v.vec());
    }
    return ghz_expectation(n, d);
}

inline std::vector<leggett::UnitVector3> random_dirs(leggett::RngStream& rng, int n) {
    std::vector<leggett::UnitVector3> v;
    for (int j = 0; j < n; ++j) {
        v.push_back(leggett::uniform_on_sphere(rng));
    }
    return v;
}

inline leggett::UnitVector3 unit(double x, double y, double z) { return leggett::UnitVector3::make(x, y, z); }

// Ensemble with the designated triple at party `designated` and the same
// vector rest[k][j] for the primed and unprimed tuple of every other party.
inline leggett::SettingsEnsemble shared_rest_ensemble(int parties, int designated, double theta,
                                                      const std::array<std::vector<leggett::UnitVector3>, 3>& rest) {
    const auto triple = leggett::designated_triple(theta);
    leggett::SettingsEnsemble s;
    s.parties = parties;
    s.designated = designated;
    s.theta = theta;
    s.e = triple.e;
    s.e_prime = triple.e_prime;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t next = 0;
        for (int p = 1; p <= parties; ++p) {
            if (p == designated) {
                s.settings[k].push_back(triple.unprimed[k]);
                s.settings_primed[k].push_back(triple.primed[k]);
            } else {
                s.settings[k].push_back(rest[k][next]);
                s.settings_primed[k].push_back(rest[k][next]);
                ++next;
            }
        }
    }
    return s;
}

inline constexpr double kPi = std::numbers::pi;

}  // namespace testsupport
