#include "leggett/oracle.hpp"

#include "leggett/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

namespace leggett {

namespace {

int parity_sign(std::uint32_t bits) { return (std::popcount(bits) & 1) ? -1 : 1; }

void require_dirs(const LeggettHiddenVariable& lambda, std::span<const UnitVector3> dirs) {
    if (lambda.polarizations.size() != dirs.size() || dirs.empty()) {
        std::ostringstream os;
        os << "hidden variable has " << lambda.polarizations.size() << " polarizations but " << dirs.size()
           << " settings were given";
        throw ValidationError(os.str());
    }
    if (dirs.size() > 16) {
        throw CapacityError("correlator sets are limited to 16 parties");
    }
}

double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }

// Uniformly random rotation from a unit quaternion (Shoemake).
Rotation random_rotation(RngStream& rng) {
    const double u1 = rng.uniform();
    const double u2 = 2.0 * std::numbers::pi * rng.uniform();
    const double u3 = 2.0 * std::numbers::pi * rng.uniform();
    const double a = std::sqrt(1.0 - u1);
    const double b = std::sqrt(u1);
    const double w = a * std::sin(u2);
    const double x = a * std::cos(u2);
    const double y = b * std::sin(u3);
    const double z = b * std::cos(u3);
    return {Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
            Vec3{2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
            Vec3{2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

}  // namespace

HiddenVariableEnsemble HiddenVariableEnsemble::make(std::vector<WeightedAtom> atoms) {
    if (atoms.empty()) {
        throw ValidationError("hidden-variable ensemble needs at least one atom");
    }
    const std::size_t n = atoms.front().lambda.polarizations.size();
    if (n == 0) {
        throw ValidationError("hidden variable carries no polarizations");
    }
    double total = 0.0;
    for (const auto& a : atoms) {
        if (a.lambda.polarizations.size() != n) {
            throw ValidationError("atoms disagree on the number of parties");
        }
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
            throw ValidationError("atom weights must be finite and nonnegative");
        }
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "atom weights sum to " << total << ", expected 1";
        throw ValidationError(os.str());
    }
    return HiddenVariableEnsemble(std::move(atoms), static_cast<int>(n));
}

CorrelatorSet::CorrelatorSet(int parties, std::vector<double> values)
    : parties_(parties), values_(std::move(values)) {
    if (parties < 1 || parties > 16) {
        throw ValidationError("correlator set party count outside [1, 16]");
    }
    if (values_.size() != (std::size_t{1} << parties)) {
        throw ValidationError("correlator set needs 2^N entries (index 0 unused)");
    }
    values_[0] = 1.0;
}

std::vector<double> CorrelatorSet::probabilities() const {
    std::vector<double> p(values_);
    const std::size_t dim = p.size();
    for (std::size_t h = 1; h < dim; h <<= 1) {
        for (std::size_t i = 0; i < dim; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = p[j];
                const double b = p[j + h];
                p[j] = a + b;
                p[j + h] = a - b;
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(dim);
    for (double& v : p) {
        v *= scale;
    }
    return p;
}

CorrelatorSet correlators_from_distribution(int parties, std::span<const double> probabilities) {
    const std::size_t dim = std::size_t{1} << parties;
    if (probabilities.size() != dim) {
        throw ValidationError("distribution length must be 2^N");
    }
    std::vector<double> values(dim, 0.0);
    for (std::size_t s = 1; s < dim; ++s) {
        double acc = 0.0;
        for (std::size_t o = 0; o < dim; ++o) {
            acc += parity_sign(static_cast<std::uint32_t>(s & o)) * probabilities[o];
        }
        values[s] = acc;
    }
    return CorrelatorSet(parties, std::move(values));
}

CorrelatorSetCheck check_correlator_set(const CorrelatorSet& c, const LeggettHiddenVariable& lambda,
                                        std::span<const UnitVector3> dirs) {
    require_dirs(lambda, dirs);
    CorrelatorSetCheck r;
    for (int j = 1; j <= c.parties(); ++j) {
        const auto ju = static_cast<std::size_t>(j - 1);
        r.malus_residual = std::max(r.malus_residual, std::abs(c.singleton(j) - lambda.polarizations[ju].dot(dirs[ju])));
    }
    const auto p = c.probabilities();
    r.min_probability = min_of(p);
    double total = 0.0;
    for (double v : p) {
        total += v;
    }
    r.normalization_residual = std::abs(total - 1.0);
    return r;
}

CorrelatorSet product_correlators(const LeggettHiddenVariable& lambda, std::span<const UnitVector3> dirs) {
    require_dirs(lambda, dirs);
    const int n = static_cast<int>(dirs.size());
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> values(dim, 1.0);
    for (std::size_t s = 1; s < dim; ++s) {
        // Peel the lowest set bit: C^S = C^{S without j} * m_j.
        const int j = std::countr_zero(static_cast<std::uint32_t>(s));
        values[s] = values[s & (s - 1)] * lambda.polarizations[static_cast<std::size_t>(j)].dot(dirs[static_cast<std::size_t>(j)]);
    }
    return CorrelatorSet(n, std::move(values));
}

CorrelatorSet sample_admissible(const LeggettHiddenVariable& lambda, std::span<const UnitVector3> dirs,
                                RngStream& rng, int attempts, double delta) {
    if (attempts < 1) {
        throw ValidationError("sample_admissible needs at least one attempt");
    }
    const CorrelatorSet base = product_correlators(lambda, dirs);
    if (delta == 0.0) {
        return base;
    }
    const int n = base.parties();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> trial(dim);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        for (std::size_t s = 0; s < dim; ++s) {
            trial[s] = base[static_cast<std::uint32_t>(s)];
            if (std::popcount(static_cast<std::uint32_t>(s)) >= 2) {
                trial[s] += rng.uniform(-delta, delta);
            }
        }
        CorrelatorSet candidate(n, trial);
        if (min_of(candidate.probabilities()) >= 0.0) {
            return candidate;
        }
    }
    return base;
}

IdentityReport identity_check(int max_parties) {
    IdentityReport r;
    const auto note = [&r](bool holds, const std::string& what) {
        ++r.cases;
        if (!holds) {
            r.ok = false;
            r.failures.push_back(what);
        }
    };
    for (int x : {1, -1}) {
        for (int y : {1, -1}) {
            note(std::abs(x + y) - x * y == 1, "plus branch x=" + std::to_string(x) + " y=" + std::to_string(y));
            note(std::abs(x - y) + x * y == 1, "minus branch x=" + std::to_string(x) + " y=" + std::to_string(y));
        }
    }
    for (int n = 2; n <= max_parties; ++n) {
        for (std::uint32_t o = 0; o < (1U << n); ++o) {
            const int x1 = (o & 1U) ? -1 : 1;
            const int rest = parity_sign(o >> 1);
            const int all = x1 * rest;
            note(std::abs(x1 + rest) - all == 1, "lifted plus N=" + std::to_string(n) + " outcome " + std::to_string(o));
            note(std::abs(x1 - rest) + all == 1, "lifted minus N=" + std::to_string(n) + " outcome " + std::to_string(o));
        }
    }
    return r;
}

double expectation_identity_residual(const CorrelatorSet& c) {
    const auto p = c.probabilities();
    double plus = 0.0;
    double minus = 0.0;
    for (std::uint32_t o = 0; o < p.size(); ++o) {
        const int x1 = (o & 1U) ? -1 : 1;
        const int rest = parity_sign(o >> 1);
        plus += std::abs(x1 + rest) * p[o];
        minus += std::abs(x1 - rest) * p[o];
    }
    return std::max(std::abs(plus - c.full() - 1.0), std::abs(minus + c.full() - 1.0));
}

ChainReport verify_constraint_chain(const CorrelatorSet& c, const CorrelatorSet& c_primed, int designated) {
    if (c.parties() != c_primed.parties()) {
        throw ValidationError("constraint chain needs sets over the same parties");
    }
    if (designated < 1 || designated > c.parties()) {
        throw ValidationError("designated party out of range");
    }
    static const std::array<std::string, 4> names{"plus (X)", "minus (X)", "plus (X')", "minus (X')"};
    ChainReport r;
    const CorrelatorSet* sets[2] = {&c, &c_primed};
    for (int t = 0; t < 2; ++t) {
        const double a = sets[t]->singleton(designated);
        const double rest = sets[t]->all_but(designated);
        const double f = sets[t]->full();
        r.slack[static_cast<std::size_t>(2 * t)] = std::abs(a + rest) - (1.0 + f);
        r.slack[static_cast<std::size_t>(2 * t + 1)] = std::abs(a - rest) - (1.0 - f);
    }
    const auto worst = std::max_element(r.slack.begin(), r.slack.end());
    r.max_slack = *worst;
    r.worst_family = names[static_cast<std::size_t>(worst - r.slack.begin())];
    r.ok = r.max_slack <= kChainTol;
    return r;
}

GammaTerms model_gamma(const HiddenVariableEnsemble& ensemble, const SettingsEnsemble& s) {
    if (ensemble.parties() != s.parties) {
        throw ValidationError("ensemble and settings disagree on N");
    }
    const auto idx = static_cast<std::size_t>(s.designated - 1);
    GammaTerms g;
    for (std::size_t k = 0; k < 3; ++k) {
        const Vec3 sum = s.settings[k][idx].vec() + s.settings_primed[k][idx].vec();
        const Vec3 diff = s.settings[k][idx].vec() - s.settings_primed[k][idx].vec();
        for (const auto& atom : ensemble.atoms()) {
            const auto& u = atom.lambda.polarizations[idx];
            g.plus[k] += atom.weight * std::abs(u.dot(sum));
            g.minus[k] += atom.weight * std::abs(u.dot(diff));
        }
        g.plus_total += g.plus[k];
        g.minus_total += g.minus[k];
    }
    return g;
}

Correlator product_model_correlator(const HiddenVariableEnsemble& ensemble) {
    auto atoms = std::make_shared<const std::vector<WeightedAtom>>(ensemble.atoms().begin(), ensemble.atoms().end());
    const int n = ensemble.parties();
    return [atoms, n](std::span<const int> parties, std::span<const UnitVector3> dirs) {
        if (parties.size() != dirs.size()) {
            throw ValidationError("model correlator: parties/directions length mismatch");
        }
        double acc = 0.0;
        for (const auto& atom : *atoms) {
            double term = atom.weight;
            for (std::size_t j = 0; j < parties.size(); ++j) {
                const int p = parties[j];
                if (p < 1 || p > n) {
                    throw ValidationError("model correlator: party index out of range");
                }
                term *= atom.lambda.polarizations[static_cast<std::size_t>(p - 1)].dot(dirs[j]);
            }
            acc += term;
        }
        return acc;
    };
}

ModelEvaluation evaluate_model(const HiddenVariableEnsemble& ensemble, const SettingsEnsemble& s,
                               const SamplerPolicy& policy) {
    if (ensemble.parties() != s.parties) {
        throw ValidationError("ensemble and settings disagree on N");
    }
    const ValidationReport valid = validate_ensemble(s);
    if (!valid.ok) {
        throw ValidationError("invalid settings ensemble: " + valid.failures.front().check);
    }
    const int i = s.designated;
    const RngStream root(policy.seed);
    InequalityTerms model_terms;
    ModelEvaluation ev;
    ev.max_sharp_margin = -1e300;
    ev.max_chain_slack = -1e300;
    std::array<double, 3> signed_plus{};
    std::array<double, 3> signed_minus{};

    const auto atoms = ensemble.atoms();
    for (std::size_t m = 0; m < atoms.size(); ++m) {
        const auto& atom = atoms[m];
        const RngStream atom_rng = root.split(m);
        for (int k = 0; k < 3; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            std::array<CorrelatorSet, 2> sets{CorrelatorSet(1, {1.0, 0.0}), CorrelatorSet(1, {1.0, 0.0})};
            for (int p = 0; p < 2; ++p) {
                const auto dirs = s.tuple(k, p == 1);
                if (policy.kind == SamplerPolicy::Kind::Product) {
                    sets[static_cast<std::size_t>(p)] = product_correlators(atom.lambda, dirs);
                } else {
                    RngStream rng = atom_rng.split(static_cast<std::uint64_t>(2 * k + p));
                    sets[static_cast<std::size_t>(p)] =
                        sample_admissible(atom.lambda, dirs, rng, policy.attempts, policy.delta);
                }
                const auto chk = check_correlator_set(sets[static_cast<std::size_t>(p)], atom.lambda, dirs);
                ev.max_set_residual = std::max({ev.max_set_residual, chk.malus_residual, -chk.min_probability,
                                                chk.normalization_residual});
            }
            const ChainReport chain = verify_constraint_chain(sets[0], sets[1], i);
            ev.max_chain_slack = std::max(ev.max_chain_slack, chain.max_slack);

            const double a = sets[0].singleton(i);
            const double ap = sets[1].singleton(i);
            const double r = sets[0].all_but(i);
            const double rp = sets[1].all_but(i);
            const double beta = sets[0].full() + sets[1].full();
            const double gamma_p = a + ap;
            const double gamma_m = a - ap;
            ev.max_sharp_margin = std::max({ev.max_sharp_margin,
                                            std::abs(gamma_p) - (2.0 - min_form(r + rp, beta)),
                                            std::abs(gamma_m) - (2.0 - min_form(r - rp, beta))});
            const double w = atom.weight;
            model_terms.beta[ku] += w * beta;
            model_terms.alpha_plus[ku] += w * (r + rp);
            model_terms.alpha_minus[ku] += w * (r - rp);
            ev.gamma.plus[ku] += w * std::abs(gamma_p);
            ev.gamma.minus[ku] += w * std::abs(gamma_m);
            signed_plus[ku] += w * gamma_p;
            signed_minus[ku] += w * gamma_m;
        }
    }
    ev.inequality = evaluate_terms(model_terms, s.theta);
    ev.max_intermediate_margin = -1e300;
    ev.max_linear_margin = -1e300;
    for (std::size_t k = 0; k < 3; ++k) {
        ev.gamma.plus_total += ev.gamma.plus[k];
        ev.gamma.minus_total += ev.gamma.minus[k];
        ev.signed_gamma_plus[k] = std::abs(signed_plus[k]);
        ev.signed_gamma_minus[k] = std::abs(signed_minus[k]);
        const double lhs_p = min_form(model_terms.alpha_plus[k], model_terms.beta[k]);
        const double lhs_m = min_form(model_terms.alpha_minus[k], model_terms.beta[k]);
        ev.intermediate_margin_plus[k] = lhs_p - (2.0 - ev.gamma.plus[k]);
        ev.intermediate_margin_minus[k] = lhs_m - (2.0 - ev.gamma.minus[k]);
        ev.linear_margin_plus[k] = lhs_p - (2.0 - ev.signed_gamma_plus[k]);
        ev.linear_margin_minus[k] = lhs_m - (2.0 - ev.signed_gamma_minus[k]);
        ev.max_intermediate_margin =
            std::max({ev.max_intermediate_margin, ev.intermediate_margin_plus[k], ev.intermediate_margin_minus[k]});
        ev.max_linear_margin = std::max({ev.max_linear_margin, ev.linear_margin_plus[k], ev.linear_margin_minus[k]});
    }
    ev.max_final_margin = std::max(ev.inequality.margin_general_plus, ev.inequality.margin_general_minus);
    return ev;
}

ModelEvaluation ensemble_inequality_check(const HiddenVariableEnsemble& ensemble, const SettingsEnsemble& s,
                                          const SamplerPolicy& policy) {
    ModelEvaluation ev = evaluate_model(ensemble, s, policy);
    if (!ev.intermediate_ok() || !ev.final_ok()) {
        std::ostringstream os;
        os << "Leggett-model ensemble violates "
           << (!ev.final_ok() ? "the final inequality" : "an intermediate inequality")
           << ": max final margin " << ev.max_final_margin << ", max intermediate margin "
           << ev.max_intermediate_margin;
        throw ModelSoundnessError(os.str());
    }
    return ev;
}

TrialRecord run_trial(const SoundnessConfig& config, std::uint64_t index) {
    if (config.parties.empty() || config.max_atoms < 1) {
        throw ValidationError("soundness config needs party counts and max_atoms >= 1");
    }
    RngStream rng = RngStream(config.seed).split(index);
    TrialRecord rec;
    rec.seed = config.seed;
    rec.index = index;
    rec.parties = config.parties[rng.below(config.parties.size())];
    rec.designated = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(rec.parties)));
    rec.theta = rng.uniform(0.0, std::numbers::pi);

    AzimuthTable table;
    for (auto& row : table) {
        for (auto& side : row) {
            side.resize(static_cast<std::size_t>(rec.parties - 1));
            for (double& a : side) {
                a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            }
        }
    }
    const SettingsEnsemble s =
        rotated(xy_plane_settings(rec.parties, rec.designated, rec.theta, table), random_rotation(rng));

    const double log_span = std::log(static_cast<double>(config.max_atoms) + 1.0);
    rec.atoms = std::clamp(static_cast<int>(std::exp(rng.uniform() * log_span)), 1, config.max_atoms);
    std::vector<WeightedAtom> atoms(static_cast<std::size_t>(rec.atoms));
    double total = 0.0;
    for (auto& atom : atoms) {
        atom.weight = -std::log1p(-rng.uniform());
        total += atom.weight;
        for (int j = 0; j < rec.parties; ++j) {
            atom.lambda.polarizations.push_back(uniform_on_sphere(rng));
        }
    }
    for (auto& atom : atoms) {
        atom.weight /= total;
    }
    const auto ensemble = HiddenVariableEnsemble::make(std::move(atoms));

    SamplerPolicy policy;
    rec.perturbed = rng.uniform() < 0.5;
    policy.kind = rec.perturbed ? SamplerPolicy::Kind::Perturbed : SamplerPolicy::Kind::Product;
    policy.delta = config.delta;
    policy.attempts = config.attempts;
    policy.seed = rng.next_u64();

    const ModelEvaluation ev = evaluate_model(ensemble, s, policy);
    rec.margin_general_plus = ev.inequality.margin_general_plus;
    rec.margin_general_minus = ev.inequality.margin_general_minus;
    rec.margin_intermediate = ev.max_intermediate_margin;
    rec.margin_linear = ev.max_linear_margin;
    rec.margin_sharp = ev.max_sharp_margin;
    rec.max_slack = ev.max_chain_slack;
    return rec;
}

SoundnessSummary run_soundness(const SoundnessConfig& config) {
    SoundnessSummary summary;
    summary.trials = config.trials;
    summary.records.resize(static_cast<std::size_t>(std::max<long long>(config.trials, 0)));
    const int jobs = std::max(1, config.jobs);
    const auto work = [&](int worker) {
        for (long long t = worker; t < config.trials; t += jobs) {
            summary.records[static_cast<std::size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back(work, j);
        }
    }
    for (const auto& r : summary.records) {
        const double final_margin = std::max(r.margin_general_plus, r.margin_general_minus);
        summary.max_final_margin = std::max(summary.max_final_margin, final_margin);
        summary.max_intermediate_margin = std::max(summary.max_intermediate_margin, r.margin_intermediate);
        summary.max_linear_margin = std::max(summary.max_linear_margin, r.margin_linear);
        summary.max_sharp_margin = std::max(summary.max_sharp_margin, r.margin_sharp);
        summary.max_chain_slack = std::max(summary.max_chain_slack, r.max_slack);
        summary.final_violations += final_margin > kModelTol;
        summary.intermediate_violations += r.margin_intermediate > kModelTol;
        summary.linear_violations += r.margin_linear > kModelTol;
        summary.per_atom_violations += (r.margin_sharp > kModelTol || r.max_slack > kChainTol);
    }
    return summary;
}

}  // namespace leggett
