#pragma once

// Violation surfaces of the tripartite GHZ arrangement and their maxima.
// The objective is the closed-form L+ or L- over (theta, phi, psi).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace leggett {

enum class Branch { Plus, Minus };

const char* branch_name(Branch b);
/// "plus" / "minus"; throws ValidationError for anything else.
Branch parse_branch(const std::string& s);

/// 2(sqrt5 + 1)
inline const double kMaxViolation = 2.0 * (std::sqrt(5.0) + 1.0);

/// Evenly spaced, endpoints included.
std::vector<double> linspace(double lo, double hi, int steps);

struct ScanGrid {
    std::vector<double> theta;  // [0, pi]
    std::vector<double> phi;    // [0, 2pi]
    std::vector<double> psi;    // [0, 2pi]
    // Row-major over (theta, phi, psi).
    std::vector<double> l_plus;
    std::vector<double> l_minus;
    static constexpr double bound = 6.0;

    [[nodiscard]] std::size_t index(std::size_t t, std::size_t p, std::size_t s) const {
        return (t * phi.size() + p) * psi.size() + s;
    }
    [[nodiscard]] std::size_t size() const { return l_plus.size(); }
};

/// Throws ValidationError unless every step count is at least 2.
ScanGrid grid_scan(int theta_steps, int phi_steps, int psi_steps, int jobs = 1);

/// Reshapes onto a caller-supplied grid; used when one axis must be pinned.
ScanGrid grid_scan(std::vector<double> theta, std::vector<double> phi, std::vector<double> psi, int jobs = 1);

// ---- derivative-free minimization ----

struct NelderMeadOptions {
    double x_tolerance = 1e-11;  // simplex diameter
    double f_tolerance = 1e-15;  // spread of vertex values
    int max_iterations = 500;
    int max_restarts = 4;
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int restarts = 0;
    bool converged = false;
};

/// Minimizes f from `start`; each restart rebuilds the simplex around the best vertex.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& opts = {});

// ---- violation maximization ----

struct OptimizeOptions {
    double tolerance = 1e-9;
    int max_iterations = 500;
    int starts = 8;  // best cells of the coarse grid; 0 uses extra_starts only
    int coarse_theta = 19;
    int coarse_phi = 12;
    int coarse_psi = 12;
    std::optional<double> fixed_theta;
    std::optional<double> fixed_phi;
    std::vector<std::array<double, 3>> extra_starts;
    int jobs = 1;
};

struct OptimumReport {
    Branch branch = Branch::Plus;
    double theta = 0.0;
    double phi = 0.0;
    double psi = 0.0;
    double value = 0.0;
    // Circular distance of psi from optimal_locus(branch, phi). The maximum
    // is a one-parameter family, so (phi, psi) is one point on it.
    double locus_residual = 0.0;
    bool converged = false;
    std::string warning;
    int starts = 0;
    int iterations = 0;
};

OptimumReport maximize_violation(Branch branch, const OptimizeOptions& opts = {});

/// psi on the maximizing locus for a given phi in [0, 2pi].
double optimal_locus(Branch branch, double phi);

/// Pair angle of the maximum: pi - 2 theta0 (plus) or 2 theta0 (minus).
double optimal_theta(Branch branch);

/// Shortest distance between two angles on the circle.
double circular_distance(double a, double b);

}  // namespace leggett
