#pragma once

// Leggett-type inequalities for N parties.
//
// Every evaluator takes the correlation function as an injected callable so
// that quantum (trace), closed-form GHZ and hidden-variable-model
// correlators run through one code path.

#include "leggett/geometry.hpp"
#include "leggett/qcore.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <span>

namespace leggett {

/// Correlator over a subset of parties. `parties` is sorted, 1-based, and
/// `dirs[j]` is the setting of party `parties[j]`.
using Correlator =
    std::function<double(std::span<const int> parties, std::span<const UnitVector3> dirs)>;

/// Tolerance on |C| <= 1 for injected correlators.
inline constexpr double kCorrelatorRangeTol = 1e-9;
/// alpha terms must vanish to this level for the tightened form.
inline constexpr double kAlphaZeroTol = 1e-9;
inline constexpr double kViolationTol = 1e-12;

/// Trace correlator of an arbitrary density matrix (reduced states by partial trace).
Correlator quantum_correlator(const DensityMatrix& rho);
/// Closed-form GHZ correlator: full formula for all N parties, prod z for even
/// subset sizes and 0 for odd subset sizes otherwise.
Correlator ghz_closed_correlator(int parties);
Correlator zero_correlator();

struct InequalityTerms {
    std::array<double, 3> beta{};
    std::array<double, 3> alpha_plus{};
    std::array<double, 3> alpha_minus{};
};

struct InequalityEvaluation {
    InequalityTerms terms;
    double theta = 0.0;
    // sum_k min(|alpha_k - beta_k|, |alpha_k + beta_k|)
    double lhs_general_plus = 0.0;
    double lhs_general_minus = 0.0;
    // 6 - 2|cos(theta/2)| and 6 - 2|sin(theta/2)|
    double bound_plus = 0.0;
    double bound_minus = 0.0;
    // sum_k |beta_k| + 2|cos(theta/2)| (resp. sin), compared with 6
    double lhs_tight_plus = 0.0;
    double lhs_tight_minus = 0.0;
    // positive = violation
    double margin_general_plus = 0.0;
    double margin_general_minus = 0.0;
    double margin_tight_plus = 0.0;
    double margin_tight_minus = 0.0;
    bool violation_general_plus = false;
    bool violation_general_minus = false;
};

inline double bound_plus(double theta) { return 6.0 - 2.0 * std::abs(std::cos(theta / 2)); }
inline double bound_minus(double theta) { return 6.0 - 2.0 * std::abs(std::sin(theta / 2)); }

/// min(|a - b|, |a + b|)
inline double min_form(double alpha, double beta) {
    return std::min(std::abs(alpha - beta), std::abs(alpha + beta));
}

InequalityTerms compute_terms(const Correlator& correlator, const SettingsEnsemble& s);
InequalityEvaluation evaluate_terms(const InequalityTerms& terms, double theta);

/// Throws ValidationError for an invalid ensemble and ContractError when the
/// correlator leaves [-1, 1] by more than 1e-9.
InequalityEvaluation evaluate_general(const Correlator& correlator, const SettingsEnsemble& s);

struct TightPair {
    double plus = 0.0;
    double minus = 0.0;
};

/// L+- after checking every alpha term vanishes (PreconditionError otherwise).
TightPair evaluate_tight(const Correlator& correlator, const SettingsEnsemble& s);

inline const double kTheta0 = std::atan(2.0);

/// Angles of the tripartite GHZ arrangement; phi belongs to party 2, psi to party 3.
struct InequalityAngles {
    double theta = 0.0;
    double phi = 0.0;
    double psi = 0.0;

    /// theta in [0, pi], phi and psi in [0, 2pi]; throws ValidationError otherwise.
    static InequalityAngles make(double theta, double phi, double psi);
};

/// 2 sqrt5 sin(theta0 + theta/2) + 2|cos((theta+phi+psi)/2)| and the cos(theta0 - theta/2) partner.
TightPair tripartite_ghz_closed(const InequalityAngles& a);
/// Same expression without range checks, for optimizers that wander.
TightPair tripartite_ghz_closed_unchecked(double theta, double phi, double psi);

struct BipartiteResult {
    double lhs = 0.0;        // (1/3) sum_k |C(n_k, m_k) + C(n'_k, m'_k)|
    double bound_sin = 0.0;  // 2 - (2/3)|sin(theta/2)|
    double bound_cos = 0.0;  // 2 - (2/3)|cos(theta/2)|
};

BipartiteResult bipartite_lhs(const Correlator& correlator, const SettingsEnsemble& s);

/// Bell state correlator C(m, n) = m3 n3 + m1 n1 - m2 n2 (single-party terms 0).
Correlator bell_phi_plus_correlator();

/// sum_k |C(X_k) + C(X'_k)| + 2|sin(theta/2)| for ensembles whose primed and
/// unprimed settings coincide on every non-designated party.
double priorwork_reduction(const Correlator& correlator, const SettingsEnsemble& s);

}  // namespace leggett
