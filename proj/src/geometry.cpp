#include "leggett/geometry.hpp"

#include "leggett/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace leggett {

namespace {

constexpr double kPi = std::numbers::pi;

void require_theta(double theta) {
    if (!(theta >= 0.0 && theta <= kPi)) {
        std::ostringstream os;
        os << "pair angle theta = " << theta << " outside [0, pi]";
        throw ValidationError(os.str());
    }
}

void require_free_angle(double a, const char* name) {
    if (!(a >= 0.0 && a <= 2.0 * kPi)) {
        std::ostringstream os;
        os << name << " = " << a << " outside [0, 2pi]";
        throw ValidationError(os.str());
    }
}

double max_abs(const Vec3& v) { return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)}); }

// Angle between unit vectors, accurate near 0 and pi.
double angle_between(const UnitVector3& a, const UnitVector3& b) {
    return std::atan2(a.vec().cross(b.vec()).norm(), a.dot(b));
}

void record(ValidationReport& r, double tol, std::string check, int k, double residual) {
    r.max_residual = std::max(r.max_residual, residual);
    if (!(residual <= tol)) {
        r.ok = false;
        r.failures.push_back({std::move(check), k, residual});
    }
}

void check_frame(ValidationReport& r, double tol, const Frame& f, const std::string& name) {
    for (int a = 0; a < 3; ++a) {
        const auto& fa = f[static_cast<std::size_t>(a)];
        record(r, tol, name + " unit norm", a, std::abs(fa.vec().norm() - 1.0));
        for (int b = a + 1; b < 3; ++b) {
            record(r, tol, name + " orthogonality", a, std::abs(fa.dot(f[static_cast<std::size_t>(b)])));
        }
    }
}

}  // namespace

UnitVector3 from_spherical(double polar, double azimuth) {
    const double s = std::sin(polar);
    return UnitVector3::normalized({s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)});
}

UnitVector3 from_spherical(const SphericalAngles& a) { return from_spherical(a.polar(), a.azimuth()); }

DesignatedTriple designated_triple(double theta) {
    require_theta(theta);
    const double h = theta / 2.0;
    DesignatedTriple t;
    t.unprimed = {from_spherical(kPi / 2, h), from_spherical((kPi - theta) / 2, kPi / 2),
                  from_spherical(h, 0.0)};
    t.primed = {from_spherical(kPi / 2, -h), from_spherical((kPi + theta) / 2, kPi / 2),
                from_spherical(h, kPi)};
    // Analytic frames: (a + a')/(2cos h) and (a - a')/(2 sin h) for the triple above.
    t.e = {UnitVector3::make(1, 0, 0), UnitVector3::make(0, 1, 0), UnitVector3::make(0, 0, 1)};
    t.e_prime = {UnitVector3::make(0, 1, 0), UnitVector3::make(0, 0, 1), UnitVector3::make(1, 0, 0)};
    return t;
}

AzimuthTable fig1_azimuth_table(double phi, double psi) {
    AzimuthTable t;
    // Bob's and Charlie's listed azimuths; polar angle pi/2 throughout.
    t[0][0] = {phi / 2, psi / 2};
    t[0][1] = {-phi / 2, -psi / 2};
    t[1][0] = {0.0, kPi / 2};
    t[1][1] = {0.0, kPi / 2};
    t[2][0] = {0.0, 0.0};
    t[2][1] = {0.0, kPi};
    return t;
}

AzimuthTable fig1_azimuth_table(int parties, double phi, double psi) {
    if (parties < 2) {
        throw ValidationError("settings ensemble needs at least 2 parties");
    }
    AzimuthTable t = fig1_azimuth_table(phi, psi);
    for (auto& row : t) {
        for (auto& side : row) {
            side.resize(static_cast<std::size_t>(parties - 1), 0.0);
        }
    }
    return t;
}

SettingsEnsemble xy_plane_settings(int parties, int designated, double theta,
                                   const AzimuthTable& azimuths) {
    if (parties < 2) {
        throw ValidationError("settings ensemble needs at least 2 parties");
    }
    if (designated < 1 || designated > parties) {
        std::ostringstream os;
        os << "designated party " << designated << " outside [1, " << parties << "]";
        throw ValidationError(os.str());
    }
    for (int k = 0; k < 3; ++k) {
        for (int p = 0; p < 2; ++p) {
            const auto& row = azimuths[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
            if (row.size() != static_cast<std::size_t>(parties - 1)) {
                std::ostringstream os;
                os << "azimuth table row k=" << k + 1 << (p ? " (primed)" : "") << " has " << row.size()
                   << " entries, expected " << parties - 1;
                throw ValidationError(os.str());
            }
            for (double a : row) {
                if (!std::isfinite(a)) {
                    throw ValidationError("azimuth table contains a non-finite angle");
                }
            }
        }
    }
    const DesignatedTriple triple = designated_triple(theta);
    SettingsEnsemble s;
    s.parties = parties;
    s.designated = designated;
    s.theta = theta;
    s.e = triple.e;
    s.e_prime = triple.e_prime;
    for (std::size_t k = 0; k < 3; ++k) {
        for (int p = 0; p < 2; ++p) {
            auto& tuple = p ? s.settings_primed[k] : s.settings[k];
            const auto& row = azimuths[k][static_cast<std::size_t>(p)];
            std::size_t next = 0;
            for (int party = 1; party <= parties; ++party) {
                if (party == designated) {
                    tuple.push_back(p ? triple.primed[k] : triple.unprimed[k]);
                } else {
                    tuple.push_back(from_spherical(kPi / 2, row[next++]));
                }
            }
        }
    }
    return s;
}

SettingsEnsemble fig1_settings(double theta, double phi, double psi) {
    require_theta(theta);
    require_free_angle(phi, "phi");
    require_free_angle(psi, "psi");
    return xy_plane_settings(3, 1, theta, fig1_azimuth_table(phi, psi));
}

ValidationReport validate_ensemble(const SettingsEnsemble& s, double tol) {
    ValidationReport r;
    if (s.parties < 2 || s.designated < 1 || s.designated > s.parties) {
        r.ok = false;
        r.failures.push_back({"party count / designated index", -1, 0.0});
        return r;
    }
    if (!(s.theta >= 0.0 && s.theta <= kPi)) {
        r.ok = false;
        r.failures.push_back({"theta range", -1, std::abs(s.theta)});
        return r;
    }
    for (int k = 0; k < 3; ++k) {
        for (bool primed : {false, true}) {
            if (s.tuple(k, primed).size() != static_cast<std::size_t>(s.parties)) {
                r.ok = false;
                r.failures.push_back({"tuple length", k, 0.0});
                return r;
            }
        }
    }
    const double c = std::cos(s.theta / 2);
    const double sn = std::sin(s.theta / 2);
    r.degenerate_sum = std::abs(c) < 1e-12;
    r.degenerate_difference = std::abs(sn) < 1e-12;
    const auto idx = static_cast<std::size_t>(s.designated - 1);
    for (int k = 0; k < 3; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const UnitVector3& n = s.settings[ku][idx];
        const UnitVector3& np = s.settings_primed[ku][idx];
        if (!r.degenerate_sum) {
            record(r, tol, "sum decomposition", k, max_abs((n.vec() + np.vec()) - (2.0 * c) * s.e[ku].vec()));
        }
        if (!r.degenerate_difference) {
            record(r, tol, "difference decomposition", k,
                   max_abs((n.vec() - np.vec()) - (2.0 * sn) * s.e_prime[ku].vec()));
        }
        record(r, tol, "pair angle", k, std::abs(angle_between(n, np) - s.theta));
    }
    check_frame(r, tol, s.e, "frame e");
    check_frame(r, tol, s.e_prime, "frame e'");
    return r;
}

SettingsEnsemble rotated(const SettingsEnsemble& s, const Rotation& r) {
    const auto apply = [&r](const UnitVector3& v) {
        return UnitVector3::normalized({r[0].dot(v.vec()), r[1].dot(v.vec()), r[2].dot(v.vec())});
    };
    SettingsEnsemble out = s;
    for (std::size_t k = 0; k < 3; ++k) {
        for (auto& v : out.settings[k]) {
            v = apply(v);
        }
        for (auto& v : out.settings_primed[k]) {
            v = apply(v);
        }
        out.e[k] = apply(out.e[k]);
        out.e_prime[k] = apply(out.e_prime[k]);
    }
    return out;
}

double frame_projection_sum(const UnitVector3& u, const Frame& frame) {
    double acc = 0.0;
    for (const auto& e : frame) {
        acc += std::abs(u.dot(e));
    }
    return acc;
}

}  // namespace leggett
