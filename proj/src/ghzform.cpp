#include "leggett/ghzform.hpp"

#include "leggett/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace leggett {

namespace {

void require_parties(int n) {
    if (n < 2) {
        std::ostringstream os;
        os << "GHZ correlation needs N >= 2, got " << n;
        throw ValidationError(os.str());
    }
}

void require_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        std::ostringstream os;
        os << what << ": expected " << want << " entries, got " << got;
        throw ValidationError(os.str());
    }
}

}  // namespace

double ghz_correlation_closed(int n, std::span<const SphericalAngles> angles) {
    require_parties(n);
    require_length(angles.size(), static_cast<std::size_t>(n), "ghz_correlation_closed");
    double azimuth_sum = 0.0;
    double sin_prod = 1.0;
    double cos_prod = 1.0;
    for (const auto& a : angles) {
        azimuth_sum += a.azimuth();
        sin_prod *= std::sin(a.polar());
        cos_prod *= std::cos(a.polar());
    }
    const double planar = std::cos(azimuth_sum) * sin_prod;
    return parity_of(n) == Parity::Even ? cos_prod + planar : planar;
}

double ghz_correlation_closed(int n, std::span<const UnitVector3> dirs) {
    require_parties(n);
    require_length(dirs.size(), static_cast<std::size_t>(n), "ghz_correlation_closed");
    std::complex<double> planar{1.0, 0.0};
    double z_prod = 1.0;
    for (const auto& d : dirs) {
        planar *= std::complex<double>{d.x(), d.y()};
        z_prod *= d.z();
    }
    return parity_of(n) == Parity::Even ? z_prod + planar.real() : planar.real();
}

double ghz_correlation_xy(int n, std::span<const double> azimuths) {
    require_parties(n);
    require_length(azimuths.size(), static_cast<std::size_t>(n), "ghz_correlation_xy");
    double sum = 0.0;
    for (double a : azimuths) {
        sum += std::fmod(a, 2.0 * std::numbers::pi);
    }
    return std::cos(sum);
}

double ghz_reduced_correlation(int n, int traced_party, std::span<const UnitVector3> dirs) {
    require_parties(n);
    if (traced_party < 1 || traced_party > n) {
        std::ostringstream os;
        os << "traced party " << traced_party << " outside [1, " << n << "]";
        throw ValidationError(os.str());
    }
    require_length(dirs.size(), static_cast<std::size_t>(n - 1), "ghz_reduced_correlation");
    if (parity_of(n) == Parity::Even) {
        return 0.0;
    }
    double z_prod = 1.0;
    for (const auto& d : dirs) {
        z_prod *= d.z();
    }
    return z_prod;
}

CorrelationReport ghz_correlation_report(int n, std::span<const SphericalAngles> angles) {
    bool planar = true;
    for (const auto& a : angles) {
        planar = planar && std::abs(a.polar() - std::numbers::pi / 2) < 1e-15;
    }
    CorrelationReport report;
    report.parity = parity_of(n);
    if (planar) {
        std::vector<double> az;
        az.reserve(angles.size());
        for (const auto& a : angles) {
            az.push_back(a.azimuth());
        }
        report.value = ghz_correlation_xy(n, az);
        report.branch = FormulaBranch::XyPlane;
    } else {
        report.value = ghz_correlation_closed(n, angles);
        report.branch = FormulaBranch::Full;
    }
    return report;
}

TripartiteCorrelators tripartite_correlators(double theta, const AzimuthSums& sums) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        std::ostringstream os;
        os << "theta " << theta << " outside [0, pi]";
        throw ValidationError(os.str());
    }
    const double h = theta / 2.0;
    TripartiteCorrelators c;
    c.unprimed[0] = std::cos(h + sums.unprimed[0]);
    c.primed[0] = std::cos(h - sums.primed[0]);
    c.unprimed[1] = -std::cos(h) * std::sin(sums.unprimed[1]);
    c.primed[1] = -std::cos(h) * std::sin(sums.primed[1]);
    c.unprimed[2] = std::sin(h) * std::cos(sums.unprimed[2]);
    c.primed[2] = -std::sin(h) * std::cos(sums.primed[2]);
    return c;
}

}  // namespace leggett
