#pragma once

// Simulator and verifier for the N-partite Leggett nonlocal-realistic model.
//
// A hidden variable is one polarization per party. For a fixed settings
// tuple it determines a set of subset correlators C^S (2^N - 1 numbers);
// singleton correlators obey Malus' law, higher ones are free as long as
// the reconstructed outcome distribution is nonnegative. The distribution
// over hidden variables is a finite weighted atom list.
//
// Subsets and outcomes are bit masks: bit j-1 is party j. In an outcome
// mask a set bit means x_j = -1.

#include "leggett/geometry.hpp"
#include "leggett/ineq.hpp"
#include "leggett/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace leggett {

inline constexpr double kModelTol = 1e-10;
inline constexpr double kChainTol = 1e-12;

struct LeggettHiddenVariable {
    std::vector<UnitVector3> polarizations;
};

struct WeightedAtom {
    LeggettHiddenVariable lambda;
    double weight = 0.0;
};

class HiddenVariableEnsemble {
public:
    /// Weights must be nonnegative and sum to 1 within 1e-12; every atom
    /// must carry the same number of polarizations.
    static HiddenVariableEnsemble make(std::vector<WeightedAtom> atoms);

    [[nodiscard]] std::span<const WeightedAtom> atoms() const { return atoms_; }
    [[nodiscard]] int parties() const { return parties_; }

private:
    HiddenVariableEnsemble(std::vector<WeightedAtom> a, int n) : atoms_(std::move(a)), parties_(n) {}
    std::vector<WeightedAtom> atoms_;
    int parties_;
};

class CorrelatorSet {
public:
    /// values[mask] for mask in [1, 2^N); index 0 is ignored and stored as 1.
    CorrelatorSet(int parties, std::vector<double> values);

    [[nodiscard]] int parties() const { return parties_; }
    [[nodiscard]] std::uint32_t full_mask() const { return (1U << parties_) - 1U; }
    [[nodiscard]] double operator[](std::uint32_t mask) const { return values_[mask]; }
    [[nodiscard]] double singleton(int party) const { return values_[1U << (party - 1)]; }
    [[nodiscard]] double full() const { return values_[full_mask()]; }
    /// Correlator of every party except `party` (1-based).
    [[nodiscard]] double all_but(int party) const { return values_[full_mask() & ~(1U << (party - 1))]; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    /// P(x) = 2^-N [1 + sum_S (prod_{j in S} x_j) C^S], by fast Walsh-Hadamard transform.
    [[nodiscard]] std::vector<double> probabilities() const;

private:
    int parties_;
    std::vector<double> values_;
};

/// C^S = sum_x (prod_{j in S} x_j) P(x), summed term by term.
CorrelatorSet correlators_from_distribution(int parties, std::span<const double> probabilities);

struct CorrelatorSetCheck {
    double malus_residual = 0.0;  // max_i |C^{(i)} - u_i . n_i|
    double min_probability = 0.0;
    double normalization_residual = 0.0;  // |sum_x P(x) - 1|
    [[nodiscard]] bool ok(double tol = kChainTol) const {
        return malus_residual <= tol && min_probability >= -tol && normalization_residual <= tol;
    }
};

CorrelatorSetCheck check_correlator_set(const CorrelatorSet& c, const LeggettHiddenVariable& lambda,
                                        std::span<const UnitVector3> dirs);

/// Baseline model: C^S = prod_{i in S} u_i . n_i.
CorrelatorSet product_correlators(const LeggettHiddenVariable& lambda, std::span<const UnitVector3> dirs);

inline constexpr double kDefaultPerturbation = 0.2;
inline constexpr int kDefaultAttempts = 100;

/// Perturbs every |S| >= 2 correlator of the product set by U[-delta, delta]
/// and keeps the first draw with a nonnegative distribution; falls back to
/// the product set when all attempts are rejected.
CorrelatorSet sample_admissible(const LeggettHiddenVariable& lambda, std::span<const UnitVector3> dirs,
                                RngStream& rng, int attempts = kDefaultAttempts,
                                double delta = kDefaultPerturbation);

struct IdentityReport {
    bool ok = true;
    long long cases = 0;
    std::vector<std::string> failures;
};

/// |x +- y| -+ xy = 1 on {+-1}^2 and the lifted form with y = x_2...x_N for
/// every assignment, N = 2..max_parties.
IdentityReport identity_check(int max_parties = 8);

/// |sum_x |x_1 +- x_2...x_N| P(x) -+ C^{full} - 1|, max over both signs.
double expectation_identity_residual(const CorrelatorSet& c);

struct ChainReport {
    // slack = LHS - RHS of |C^(i) +- C^rest| <= 1 +- C^full, for
    // (plus, unprimed), (minus, unprimed), (plus, primed), (minus, primed).
    std::array<double, 4> slack{};
    double max_slack = 0.0;
    bool ok = true;
    std::string worst_family;
};

ChainReport verify_constraint_chain(const CorrelatorSet& c, const CorrelatorSet& c_primed, int designated);

struct GammaTerms {
    std::array<double, 3> plus{};   // sum_m w_m |u_m . (n_k + n'_k)|
    std::array<double, 3> minus{};  // sum_m w_m |u_m . (n_k - n'_k)|
    double plus_total = 0.0;
    double minus_total = 0.0;
};

GammaTerms model_gamma(const HiddenVariableEnsemble& ensemble, const SettingsEnsemble& s);

/// Correlator of a product-family ensemble: sum_m w_m prod_{j in S} u_{m,j} . n_j.
Correlator product_model_correlator(const HiddenVariableEnsemble& ensemble);

struct SamplerPolicy {
    enum class Kind { Product, Perturbed };
    Kind kind = Kind::Product;
    double delta = kDefaultPerturbation;
    int attempts = kDefaultAttempts;
    std::uint64_t seed = kDefaultSeed;
};

struct ModelEvaluation {
    InequalityEvaluation inequality;  // built from model-level alpha, beta
    GammaTerms gamma;                 // absolute value inside the average
    std::array<double, 3> signed_gamma_plus{};   // |sum_m w_m gamma_m|
    std::array<double, 3> signed_gamma_minus{};
    // min(|A - B|, |A + B|) - (2 - gamma_k)
    std::array<double, 3> intermediate_margin_plus{};
    std::array<double, 3> intermediate_margin_minus{};
    // Same with |sum w gamma| in place of sum w |gamma|.
    std::array<double, 3> linear_margin_plus{};
    std::array<double, 3> linear_margin_minus{};
    double max_intermediate_margin = 0.0;
    double max_linear_margin = 0.0;
    double max_final_margin = 0.0;
    double max_sharp_margin = 0.0;  // per-atom |gamma| <= 2 - min(...)
    double max_chain_slack = 0.0;
    double max_set_residual = 0.0;  // Malus / positivity / normalization over all atoms

    [[nodiscard]] bool intermediate_ok() const { return max_intermediate_margin <= kModelTol; }
    [[nodiscard]] bool final_ok() const { return max_final_margin <= kModelTol; }
    [[nodiscard]] bool per_atom_ok() const {
        return max_sharp_margin <= kModelTol && max_chain_slack <= kChainTol && max_set_residual <= kChainTol;
    }
};

/// Evaluates every derivation step on one (ensemble, settings) pair without throwing.
ModelEvaluation evaluate_model(const HiddenVariableEnsemble& ensemble, const SettingsEnsemble& s,
                               const SamplerPolicy& policy);

/// evaluate_model, then throws ModelSoundnessError if an intermediate or
/// final inequality margin exceeds 1e-10.
ModelEvaluation ensemble_inequality_check(const HiddenVariableEnsemble& ensemble, const SettingsEnsemble& s,
                                          const SamplerPolicy& policy);

// ---- Monte Carlo soundness runs ----

struct TrialRecord {
    std::uint64_t seed = 0;  // seed of the run; the trial is stream `index`
    std::uint64_t index = 0;
    int parties = 0;
    int designated = 1;
    double theta = 0.0;
    int atoms = 0;
    bool perturbed = false;
    double margin_general_plus = 0.0;
    double margin_general_minus = 0.0;
    double margin_intermediate = 0.0;
    double margin_linear = 0.0;
    double margin_sharp = 0.0;
    double max_slack = 0.0;
};

struct SoundnessConfig {
    std::uint64_t seed = kDefaultSeed;
    long long trials = 10000;
    std::vector<int> parties{2, 3, 4, 5};
    int max_atoms = 256;  // atom counts are log-uniform on [1, max_atoms]
    double delta = kDefaultPerturbation;
    int attempts = kDefaultAttempts;
    int jobs = 1;
};

struct SoundnessSummary {
    long long trials = 0;
    long long final_violations = 0;
    long long intermediate_violations = 0;
    long long linear_violations = 0;
    long long per_atom_violations = 0;
    double max_final_margin = -1e300;
    double max_intermediate_margin = -1e300;
    double max_linear_margin = -1e300;
    double max_sharp_margin = -1e300;
    double max_chain_slack = -1e300;
    std::vector<TrialRecord> records;
};

/// One randomized trial: random N, designated party, theta, azimuths and a
/// random global rotation; random atom count, weights and polarizations.
TrialRecord run_trial(const SoundnessConfig& config, std::uint64_t index);

SoundnessSummary run_soundness(const SoundnessConfig& config);

}  // namespace leggett
