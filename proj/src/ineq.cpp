#include "leggett/ineq.hpp"

#include "leggett/errors.hpp"
#include "leggett/ghzform.hpp"

#include <algorithm>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

namespace leggett {

namespace {

void require_valid(const SettingsEnsemble& s) {
    const ValidationReport r = validate_ensemble(s);
    if (!r.ok) {
        std::ostringstream os;
        os << "invalid settings ensemble: " << r.failures.front().check;
        if (r.failures.front().k >= 0) {
            os << " (k=" << r.failures.front().k + 1 << ")";
        }
        os << ", residual " << r.failures.front().residual;
        throw ValidationError(os.str());
    }
}

double checked(double value, std::span<const int> parties) {
    if (!(std::abs(value) <= 1.0 + kCorrelatorRangeTol)) {
        std::ostringstream os;
        os << "correlator returned " << value << " for a " << parties.size() << "-party tuple";
        throw ContractError(os.str());
    }
    return value;
}

struct TupleParts {
    std::vector<int> all;
    std::vector<int> rest;
};

TupleParts party_lists(const SettingsEnsemble& s) {
    TupleParts p;
    for (int j = 1; j <= s.parties; ++j) {
        p.all.push_back(j);
        if (j != s.designated) {
            p.rest.push_back(j);
        }
    }
    return p;
}

std::vector<UnitVector3> without(std::span<const UnitVector3> dirs, int designated) {
    std::vector<UnitVector3> out;
    out.reserve(dirs.size() - 1);
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        if (static_cast<int>(j) + 1 != designated) {
            out.push_back(dirs[j]);
        }
    }
    return out;
}

}  // namespace

Correlator quantum_correlator(const DensityMatrix& rho) {
    auto state = std::make_shared<const DensityMatrix>(rho);
    return [state](std::span<const int> parties, std::span<const UnitVector3> dirs) {
        const int n = state->parties();
        if (parties.size() != dirs.size() || parties.empty()) {
            throw ValidationError("quantum correlator: parties/directions length mismatch");
        }
        if (static_cast<int>(parties.size()) == n) {
            return correlation_bruteforce(*state, dirs);
        }
        // Trace out absent parties from the highest index down so the
        // remaining indices stay put.
        DensityMatrix reduced = *state;
        for (int j = n; j >= 1; --j) {
            if (std::find(parties.begin(), parties.end(), j) == parties.end()) {
                reduced = partial_trace(reduced, j);
            }
        }
        return correlation_bruteforce(reduced, dirs);
    };
}

Correlator ghz_closed_correlator(int n) {
    return [n](std::span<const int> parties, std::span<const UnitVector3> dirs) {
        if (parties.size() != dirs.size() || parties.empty()) {
            throw ValidationError("GHZ correlator: parties/directions length mismatch");
        }
        if (static_cast<int>(parties.size()) == n) {
            return ghz_correlation_closed(n, dirs);
        }
        if (static_cast<int>(parties.size()) == n - 1) {
            int missing = 1;
            while (std::find(parties.begin(), parties.end(), missing) != parties.end()) {
                ++missing;
            }
            return ghz_reduced_correlation(n, missing, dirs);
        }
        // Any proper marginal of GHZ is (|0..0><0..0| + |1..1><1..1|)/2.
        if (dirs.size() % 2 == 1) {
            return 0.0;
        }
        double z = 1.0;
        for (const auto& d : dirs) {
            z *= d.z();
        }
        return z;
    };
}

Correlator zero_correlator() {
    return [](std::span<const int>, std::span<const UnitVector3>) { return 0.0; };
}

InequalityTerms compute_terms(const Correlator& correlator, const SettingsEnsemble& s) {
    require_valid(s);
    const TupleParts lists = party_lists(s);
    InequalityTerms t;
    for (int k = 0; k < 3; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const auto full = s.tuple(k, false);
        const auto full_p = s.tuple(k, true);
        const double c = checked(correlator(lists.all, full), lists.all);
        const double cp = checked(correlator(lists.all, full_p), lists.all);
        const auto rest = without(full, s.designated);
        const auto rest_p = without(full_p, s.designated);
        const double r = checked(correlator(lists.rest, rest), lists.rest);
        const double rp = checked(correlator(lists.rest, rest_p), lists.rest);
        t.beta[ku] = c + cp;
        t.alpha_plus[ku] = r + rp;
        t.alpha_minus[ku] = r - rp;
    }
    return t;
}

InequalityEvaluation evaluate_terms(const InequalityTerms& terms, double theta) {
    InequalityEvaluation ev;
    ev.terms = terms;
    ev.theta = theta;
    double beta_abs = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        ev.lhs_general_plus += min_form(terms.alpha_plus[k], terms.beta[k]);
        ev.lhs_general_minus += min_form(terms.alpha_minus[k], terms.beta[k]);
        beta_abs += std::abs(terms.beta[k]);
    }
    ev.bound_plus = bound_plus(theta);
    ev.bound_minus = bound_minus(theta);
    ev.lhs_tight_plus = beta_abs + 2.0 * std::abs(std::cos(theta / 2));
    ev.lhs_tight_minus = beta_abs + 2.0 * std::abs(std::sin(theta / 2));
    ev.margin_general_plus = ev.lhs_general_plus - ev.bound_plus;
    ev.margin_general_minus = ev.lhs_general_minus - ev.bound_minus;
    ev.margin_tight_plus = ev.lhs_tight_plus - 6.0;
    ev.margin_tight_minus = ev.lhs_tight_minus - 6.0;
    ev.violation_general_plus = ev.margin_general_plus > kViolationTol;
    ev.violation_general_minus = ev.margin_general_minus > kViolationTol;
    return ev;
}

InequalityEvaluation evaluate_general(const Correlator& correlator, const SettingsEnsemble& s) {
    return evaluate_terms(compute_terms(correlator, s), s.theta);
}

TightPair evaluate_tight(const Correlator& correlator, const SettingsEnsemble& s) {
    const InequalityEvaluation ev = evaluate_general(correlator, s);
    double worst = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        worst = std::max({worst, std::abs(ev.terms.alpha_plus[k]), std::abs(ev.terms.alpha_minus[k])});
    }
    if (worst > kAlphaZeroTol) {
        std::ostringstream os;
        os << "tightened inequality needs vanishing alpha terms; max |alpha| = " << worst;
        throw PreconditionError(os.str());
    }
    return {ev.lhs_tight_plus, ev.lhs_tight_minus};
}

InequalityAngles InequalityAngles::make(double theta, double phi, double psi) {
    constexpr double pi = std::numbers::pi;
    if (!(theta >= 0.0 && theta <= pi)) {
        throw ValidationError("theta outside [0, pi]");
    }
    if (!(phi >= 0.0 && phi <= 2 * pi) || !(psi >= 0.0 && psi <= 2 * pi)) {
        throw ValidationError("phi and psi must lie in [0, 2pi]");
    }
    return {theta, phi, psi};
}

TightPair tripartite_ghz_closed_unchecked(double theta, double phi, double psi) {
    static const double two_sqrt5 = 2.0 * std::sqrt(5.0);
    const double tail = 2.0 * std::abs(std::cos((theta + phi + psi) / 2));
    return {two_sqrt5 * std::sin(kTheta0 + theta / 2) + tail,
            two_sqrt5 * std::cos(kTheta0 - theta / 2) + tail};
}

TightPair tripartite_ghz_closed(const InequalityAngles& a) {
    return tripartite_ghz_closed_unchecked(a.theta, a.phi, a.psi);
}

BipartiteResult bipartite_lhs(const Correlator& correlator, const SettingsEnsemble& s) {
    if (s.parties != 2) {
        std::ostringstream os;
        os << "bipartite inequality needs N = 2, got " << s.parties;
        throw ValidationError(os.str());
    }
    require_valid(s);
    const std::array<int, 2> both{1, 2};
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
        acc += std::abs(checked(correlator(both, s.tuple(k, false)), both) +
                        checked(correlator(both, s.tuple(k, true)), both));
    }
    BipartiteResult r;
    r.lhs = acc / 3.0;
    r.bound_sin = 2.0 - (2.0 / 3.0) * std::abs(std::sin(s.theta / 2));
    r.bound_cos = 2.0 - (2.0 / 3.0) * std::abs(std::cos(s.theta / 2));
    return r;
}

Correlator bell_phi_plus_correlator() {
    return [](std::span<const int> parties, std::span<const UnitVector3> dirs) {
        if (parties.size() != dirs.size()) {
            throw ValidationError("Bell correlator: parties/directions length mismatch");
        }
        if (dirs.size() != 2) {
            return 0.0;
        }
        const auto& m = dirs[0];
        const auto& n = dirs[1];
        return m.z() * n.z() + m.x() * n.x() - m.y() * n.y();
    };
}

double priorwork_reduction(const Correlator& correlator, const SettingsEnsemble& s) {
    require_valid(s);
    for (int k = 0; k < 3; ++k) {
        const auto u = s.tuple(k, false);
        const auto p = s.tuple(k, true);
        for (int j = 0; j < s.parties; ++j) {
            if (j + 1 == s.designated) {
                continue;
            }
            const double diff = (u[static_cast<std::size_t>(j)].vec() - p[static_cast<std::size_t>(j)].vec()).norm();
            if (diff > kUnitTol) {
                std::ostringstream os;
                os << "prior-work form needs identical primed/unprimed settings off the designated party; party "
                   << j + 1 << ", k=" << k + 1 << " differs by " << diff;
                throw PreconditionError(os.str());
            }
        }
    }
    const InequalityTerms t = compute_terms(correlator, s);
    double acc = 0.0;
    for (double b : t.beta) {
        acc += std::abs(b);
    }
    return acc + 2.0 * std::abs(std::sin(s.theta / 2));
}

}  // namespace leggett
