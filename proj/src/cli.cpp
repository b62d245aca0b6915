#include "leggett/cli.hpp"

#include "leggett/errors.hpp"
#include "leggett/geometry.hpp"
#include "leggett/ghzform.hpp"
#include "leggett/ineq.hpp"
#include "leggett/oracle.hpp"
#include "leggett/optim.hpp"
#include "leggett/qcore.hpp"
#include "leggett/rng.hpp"
#include "leggett/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

namespace leggett {

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
    std::string seed_text;
    int jobs = 1;
    bool degrees = false;

    // correlate
    int n = 3;
    std::vector<double> angles;
    int random_lists = 0;
    int reduced = 0;

    // verify
    int verify_n = 5;
    long long verify_trials = 1000;
    bool selftest_break = false;

    // scan
    int theta_steps = 181;
    int phi_steps = 90;
    int psi_steps = 90;
    std::string scan_out = "scan.csv";

    // optimize
    std::string branch = "both";
    std::vector<double> fixed_theta;
    std::vector<double> fixed_phi;
    double tolerance = 1e-9;
    int max_iterations = 500;
    bool check = false;
    std::string optimize_out = "-";

    // oracle
    long long trials = 10000;
    std::vector<int> parties{2, 3, 4, 5};
    int max_atoms = 256;
    double delta = kDefaultPerturbation;
    std::string transcript_out = "oracle_trials.jsonl";
    std::string summary_out = "-";

    // evaluate
    int eval_n = 3;
    int designated = 1;
    double theta = 0.0;
    double phi = 0.0;
    double psi = 0.0;
    bool all_designated = false;
    std::string correlator = "closed";
    std::string ensemble_in;
    std::string ensemble_out;
};

double to_radians(const Options& o, double a) { return o.degrees ? a * kPi / 180.0 : a; }

// Writes through `fn` to `path`, or to `out` when the path is "-".
void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
    if (path == "-") {
        fn(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot open '" + path + "' for writing");
    }
    fn(f);
    f.flush();
    if (!f) {
        throw ValidationError("write to '" + path + "' failed");
    }
}

// ---- correlate ----

int cmd_correlate(const Options& o, std::uint64_t seed, std::ostream& out) {
    if (o.n < 2 || o.n > kMaxParties) {
        throw ValidationError("--n must be in [2, " + std::to_string(kMaxParties) + "]");
    }
    const int listed = o.reduced ? o.n - 1 : o.n;
    if (o.reduced && (o.reduced < 1 || o.reduced > o.n)) {
        throw ValidationError("--reduced must name a party in [1, N]");
    }
    std::vector<std::vector<SphericalAngles>> lists;
    if (!o.angles.empty()) {
        if (o.angles.size() != static_cast<std::size_t>(2 * listed)) {
            throw ValidationError("--angles needs " + std::to_string(2 * listed) +
                                  " numbers (polar, azimuth per measured party)");
        }
        std::vector<SphericalAngles> l;
        for (std::size_t j = 0; j < o.angles.size(); j += 2) {
            l.push_back(SphericalAngles::make(to_radians(o, o.angles[j]), to_radians(o, o.angles[j + 1])));
        }
        lists.push_back(std::move(l));
    }
    const RngStream root(seed);
    for (int r = 0; r < o.random_lists; ++r) {
        RngStream rng = root.split(static_cast<std::uint64_t>(r));
        std::vector<SphericalAngles> l;
        for (int j = 0; j < listed; ++j) {
            const double polar = std::acos(std::clamp(2.0 * rng.uniform() - 1.0, -1.0, 1.0));
            l.push_back(SphericalAngles::make(polar, rng.uniform(0.0, 2.0 * kPi)));
        }
        lists.push_back(std::move(l));
    }
    if (lists.empty()) {
        throw ValidationError("give --angles or --random");
    }

    const DensityMatrix rho = ghz_density(o.n);
    const DensityMatrix reduced = o.reduced ? partial_trace(rho, o.reduced) : rho;
    double worst = 0.0;
    for (std::size_t r = 0; r < lists.size(); ++r) {
        std::vector<UnitVector3> dirs;
        for (const auto& a : lists[r]) {
            dirs.push_back(from_spherical(a));
        }
        const double brute = correlation_bruteforce(reduced, dirs);
        const double closed =
            o.reduced ? ghz_reduced_correlation(o.n, o.reduced, dirs) : ghz_correlation_closed(o.n, lists[r]);
        const double diff = std::abs(brute - closed);
        worst = std::max(worst, diff);
        out << "list " << r << " N=" << o.n;
        if (o.reduced) {
            out << " traced=" << o.reduced;
        }
        out << " bruteforce=" << format_double(brute) << " closed=" << format_double(closed)
            << " diff=" << format_double(diff) << '\n';
    }
    const bool ok = worst <= 1e-10;
    out << (ok ? "PASS" : "FAIL") << " max_diff=" << format_double(worst) << '\n';
    return ok ? kExitPass : kExitCheckFailed;
}

// ---- verify ----

struct CheckLine {
    std::string name;
    bool pass = true;
    bool advisory = false;
    std::string detail;
};

std::vector<UnitVector3> random_dirs(RngStream& rng, int n) {
    std::vector<UnitVector3> v;
    for (int j = 0; j < n; ++j) {
        v.push_back(uniform_on_sphere(rng));
    }
    return v;
}

LeggettHiddenVariable random_lambda(RngStream& rng, int n) { return {random_dirs(rng, n)}; }

int cmd_verify(const Options& o, std::uint64_t seed, std::ostream& out, std::ostream& err) {
    if (o.verify_n < 2 || o.verify_n > 8) {
        throw ValidationError("--n must be in [2, 8] for verify");
    }
    if (o.verify_trials < 1) {
        throw ValidationError("--trials must be positive");
    }
    const RngStream root(seed);
    std::vector<CheckLine> lines;
    const auto sci = [](double v) {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << v;
        return os.str();
    };

    {
        const IdentityReport r = identity_check(8);
        lines.push_back({"outcome identity", r.ok, false, std::to_string(r.cases) + " cases"});
    }
    {
        RngStream rng = root.split(1);
        long long sets = 0;
        double worst = -1e300;
        double worst_set = 0.0;
        for (int n = 2; n <= o.verify_n; ++n) {
            for (long long t = 0; t < o.verify_trials / 10 + 1; ++t) {
                const auto lambda = random_lambda(rng, n);
                const auto d = random_dirs(rng, n);
                const auto dp = random_dirs(rng, n);
                const CorrelatorSet c = sample_admissible(lambda, d, rng);
                const CorrelatorSet cp = sample_admissible(lambda, dp, rng);
                for (int i = 1; i <= n; ++i) {
                    worst = std::max(worst, verify_constraint_chain(c, cp, i).max_slack);
                }
                const auto chk = check_correlator_set(c, lambda, d);
                worst_set = std::max({worst_set, chk.malus_residual, -chk.min_probability, chk.normalization_residual});
                worst_set = std::max(worst_set, expectation_identity_residual(c));
                ++sets;
            }
        }
        lines.push_back({"constraint chain", worst <= kChainTol && worst_set <= kChainTol, false,
                         std::to_string(sets) + " sets, max slack " + sci(worst)});
    }
    {
        // C^(1) = 1, C^(2) = 1, C^(12) = -1 has no distribution behind it.
        const CorrelatorSet bad(2, {1.0, 1.0, 1.0, -1.0});
        const ChainReport r = verify_constraint_chain(bad, bad, 1);
        lines.push_back({"inadmissible set flagged", !r.ok && r.worst_family == "plus (X)", false,
                         "slack " + sci(r.max_slack) + " in " + r.worst_family});
    }
    {
        RngStream rng = root.split(2);
        double worst = 1e300;
        const Frame base = designated_triple(1.0).e;
        for (int t = 0; t < 100000; ++t) {
            worst = std::min(worst, frame_projection_sum(uniform_on_sphere(rng), base));
        }
        lines.push_back({"frame bound", worst >= 1.0 - 1e-12, false, "min sum " + format_double(worst)});
    }
    {
        RngStream rng = root.split(3);
        int mismatches = 0;
        for (int t = 0; t < 200; ++t) {
            const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.verify_n - 1)));
            AzimuthTable table;
            for (auto& row : table) {
                for (auto& side : row) {
                    for (int j = 0; j < n - 1; ++j) {
                        side.push_back(rng.uniform(0.0, 2.0 * kPi));
                    }
                }
            }
            const SettingsEnsemble s = xy_plane_settings(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                                                         rng.uniform(0.0, kPi), table);
            const SettingsEnsemble back = ensemble_from_json(nlohmann::json::parse(ensemble_to_json(s).dump()));
            const bool same = back.parties == s.parties && back.designated == s.designated && back.theta == s.theta &&
                              back.settings == s.settings && back.settings_primed == s.settings_primed &&
                              back.e == s.e && back.e_prime == s.e_prime;
            mismatches += same ? 0 : 1;
        }
        lines.push_back({"ensemble JSON round-trip", mismatches == 0, false, std::to_string(mismatches) + " mismatches"});
    }
    {
        RngStream rng = root.split(4);
        double worst = 0.0;
        long long lists = 0;
        const double fault = o.selftest_break ? 1e-6 : 0.0;
        for (int n = 2; n <= std::min(o.verify_n, 6); ++n) {
            const DensityMatrix rho = ghz_density(n);
            const DensityMatrix red = partial_trace(rho, n);
            for (long long t = 0; t < o.verify_trials / 10 + 1; ++t) {
                const auto d = random_dirs(rng, n);
                worst = std::max(worst, std::abs(ghz_correlation_closed(n, d) + fault - correlation_bruteforce(rho, d)));
                const std::span<const UnitVector3> head(d.data(), d.size() - 1);
                worst = std::max(worst, std::abs(ghz_reduced_correlation(n, n, head) - correlation_bruteforce(red, head)));
                ++lists;
            }
        }
        lines.push_back({"closed-form fidelity", worst <= 1e-12, false,
                         std::to_string(lists) + " lists, max diff " + sci(worst)});
    }
    {
        RngStream rng = root.split(5);
        double malus = 0.0;
        double signalling = 0.0;
        for (int t = 0; t < 100; ++t) {
            const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.verify_n - 1)));
            std::vector<WeightedAtom> atoms(8);
            double total = 0.0;
            for (auto& a : atoms) {
                a.lambda = random_lambda(rng, n);
                a.weight = rng.uniform() + 0.01;
                total += a.weight;
            }
            for (auto& a : atoms) {
                a.weight /= total;
            }
            const auto ensemble = HiddenVariableEnsemble::make(std::move(atoms));
            const Correlator model = product_model_correlator(ensemble);
            const auto d = random_dirs(rng, n);
            for (int j = 1; j <= n; ++j) {
                const int p[1] = {j};
                const UnitVector3 dir[1] = {d[static_cast<std::size_t>(j - 1)]};
                double expected = 0.0;
                for (const auto& a : ensemble.atoms()) {
                    expected += a.weight * a.lambda.polarizations[static_cast<std::size_t>(j - 1)].dot(dir[0]);
                }
                malus = std::max(malus, std::abs(model(p, dir) - expected));
            }
            // Subset correlators of averaged product sets must not move when a
            // party outside the subset changes its setting.
            auto d2 = d;
            const auto changed = rng.below(static_cast<std::uint64_t>(n));
            d2[changed] = uniform_on_sphere(rng);
            std::vector<double> v1(std::size_t{1} << n, 0.0);
            std::vector<double> v2(v1.size(), 0.0);
            for (const auto& a : ensemble.atoms()) {
                const CorrelatorSet c1 = product_correlators(a.lambda, d);
                const CorrelatorSet c2 = product_correlators(a.lambda, d2);
                for (std::uint32_t s = 1; s < v1.size(); ++s) {
                    v1[s] += a.weight * c1[s];
                    v2[s] += a.weight * c2[s];
                }
            }
            for (std::uint32_t s = 1; s < v1.size(); ++s) {
                if (!(s & (1U << changed))) {
                    signalling = std::max(signalling, std::abs(v1[s] - v2[s]));
                }
            }
        }
        lines.push_back({"Malus law", malus <= 1e-12, false, "max residual " + sci(malus)});
        lines.push_back({"no-signaling", signalling <= 1e-12, false, "max shift " + sci(signalling)});
    }
    {
        SoundnessConfig cfg;
        cfg.seed = seed;
        cfg.trials = o.verify_trials;
        cfg.parties.clear();
        for (int n = 2; n <= o.verify_n; ++n) {
            cfg.parties.push_back(n);
        }
        cfg.jobs = o.jobs;
        const SoundnessSummary s = run_soundness(cfg);
        const auto count = [&](long long v) { return std::to_string(v) + "/" + std::to_string(s.trials); };
        lines.push_back({"per-atom sharp inequality", s.per_atom_violations == 0, false,
                         count(s.per_atom_violations) + " violations, max margin " + sci(s.max_sharp_margin)});
        lines.push_back({"final inequality", s.final_violations == 0, false,
                         count(s.final_violations) + " violations, max margin " + sci(s.max_final_margin)});
        lines.push_back({"linear-form inequality", s.linear_violations == 0, false,
                         count(s.linear_violations) + " violations, max margin " + sci(s.max_linear_margin)});
        lines.push_back({"sum-of-|gamma| intermediate form", s.intermediate_violations == 0, true,
                         count(s.intermediate_violations) + " violations, max margin " + sci(s.max_intermediate_margin)});
    }

    const CheckLine* first_failure = nullptr;
    for (const auto& l : lines) {
        const char* tag = l.pass ? "PASS" : (l.advisory ? "NOTE" : "FAIL");
        out << tag << "  " << l.name << "  (" << l.detail << ")\n";
        if (!l.pass && !l.advisory && first_failure == nullptr) {
            first_failure = &l;
        }
    }
    if (first_failure) {
        err << "verify: first failing invariant: " << first_failure->name << '\n';
        return kExitCheckFailed;
    }
    out << "all invariants hold\n";
    return kExitPass;
}

// ---- scan / optimize / oracle ----

int cmd_scan(const Options& o, std::ostream& out) {
    const ScanGrid g = grid_scan(o.theta_steps, o.phi_steps, o.psi_steps, o.jobs);
    with_output(o.scan_out, out, [&g](std::ostream& os) { write_scan_csv(os, g); });
    if (o.scan_out != "-") {
        std::size_t best = 0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (std::max(g.l_plus[j], g.l_minus[j]) > std::max(g.l_plus[best], g.l_minus[best])) {
                best = j;
            }
        }
        const std::size_t per_theta = g.phi.size() * g.psi.size();
        out << "wrote " << g.size() << " grid points to " << o.scan_out << '\n'
            << "max L = " << format_double(std::max(g.l_plus[best], g.l_minus[best])) << " at theta = "
            << format_double(g.theta[best / per_theta]) << '\n';
    }
    return kExitPass;
}

int cmd_optimize(const Options& o, std::ostream& out) {
    std::vector<Branch> branches;
    if (o.branch == "both") {
        branches = {Branch::Plus, Branch::Minus};
    } else {
        branches = {parse_branch(o.branch)};
    }
    OptimizeOptions opts;
    opts.tolerance = o.tolerance;
    opts.max_iterations = o.max_iterations;
    opts.jobs = o.jobs;
    if (!o.fixed_theta.empty()) {
        opts.fixed_theta = to_radians(o, o.fixed_theta.front());
    }
    if (!o.fixed_phi.empty()) {
        opts.fixed_phi = to_radians(o, o.fixed_phi.front());
    }
    nlohmann::json reports = nlohmann::json::array();
    bool ok = true;
    for (Branch b : branches) {
        const OptimumReport r = maximize_violation(b, opts);
        ok = ok && std::abs(r.value - kMaxViolation) <= 1e-6;
        reports.push_back(optimum_to_json(r));
    }
    with_output(o.optimize_out, out, [&reports](std::ostream& os) { os << reports.dump(2) << '\n'; });
    if (o.check && !ok) {
        return kExitCheckFailed;
    }
    return kExitPass;
}

int cmd_oracle(const Options& o, std::uint64_t seed, std::ostream& out) {
    if (o.trials < 1 || o.max_atoms < 1) {
        throw ValidationError("--trials and --max-atoms must be positive");
    }
    for (int n : o.parties) {
        if (n < 2 || n > 10) {
            throw ValidationError("--parties entries must lie in [2, 10]");
        }
    }
    SoundnessConfig cfg;
    cfg.seed = seed;
    cfg.trials = o.trials;
    cfg.parties = o.parties;
    cfg.max_atoms = o.max_atoms;
    cfg.delta = o.delta;
    cfg.jobs = o.jobs;
    const SoundnessSummary s = run_soundness(cfg);
    if (!o.transcript_out.empty()) {
        with_output(o.transcript_out, out, [&s](std::ostream& os) { write_transcript(os, s); });
    }
    nlohmann::json summary = soundness_summary_json(s);
    summary["seed"] = seed;
    with_output(o.summary_out, out, [&summary](std::ostream& os) { os << summary.dump(2) << '\n'; });
    const bool ok = s.final_violations == 0 && s.linear_violations == 0 && s.per_atom_violations == 0;
    return ok ? kExitPass : kExitCheckFailed;
}

// ---- evaluate ----

nlohmann::json evaluation_json(const SettingsEnsemble& s, const Correlator& corr) {
    const InequalityEvaluation ev = evaluate_general(corr, s);
    nlohmann::json j;
    j["N"] = s.parties;
    j["i"] = s.designated;
    j["theta"] = s.theta;
    j["beta"] = ev.terms.beta;
    j["alpha_plus"] = ev.terms.alpha_plus;
    j["alpha_minus"] = ev.terms.alpha_minus;
    j["general"] = {{"lhs_plus", ev.lhs_general_plus},       {"lhs_minus", ev.lhs_general_minus},
                    {"bound_plus", ev.bound_plus},           {"bound_minus", ev.bound_minus},
                    {"margin_plus", ev.margin_general_plus}, {"margin_minus", ev.margin_general_minus}};
    try {
        const TightPair t = evaluate_tight(corr, s);
        j["tight"] = {{"L_plus", t.plus}, {"L_minus", t.minus}, {"margin_plus", t.plus - 6.0}, {"margin_minus", t.minus - 6.0}};
    } catch (const PreconditionError& e) {
        j["tight"] = nullptr;
        j["tight_skipped"] = e.what();
    }
    return j;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    std::vector<SettingsEnsemble> ensembles;
    if (!o.ensemble_in.empty()) {
        std::ifstream f(o.ensemble_in);
        if (!f) {
            throw ValidationError("cannot open '" + o.ensemble_in + "'");
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("'" + o.ensemble_in + "': " + e.what());
        }
        ensembles.push_back(ensemble_from_json(j));
    } else {
        const InequalityAngles a =
            InequalityAngles::make(to_radians(o, o.theta), to_radians(o, o.phi), to_radians(o, o.psi));
        if (o.eval_n < 2 || o.eval_n > kMaxParties) {
            throw ValidationError("--n must be in [2, " + std::to_string(kMaxParties) + "]");
        }
        const AzimuthTable table = fig1_azimuth_table(o.eval_n, a.phi, a.psi);
        if (o.all_designated) {
            for (int i = 1; i <= o.eval_n; ++i) {
                ensembles.push_back(xy_plane_settings(o.eval_n, i, a.theta, table));
            }
        } else {
            ensembles.push_back(xy_plane_settings(o.eval_n, o.designated, a.theta, table));
        }
    }
    if (!o.ensemble_out.empty()) {
        with_output(o.ensemble_out, out, [&](std::ostream& os) { os << ensemble_to_json(ensembles.front()).dump(2) << '\n'; });
    }
    nlohmann::json results = nlohmann::json::array();
    for (const auto& s : ensembles) {
        Correlator corr;
        if (o.correlator == "closed") {
            corr = ghz_closed_correlator(s.parties);
        } else if (o.correlator == "trace") {
            corr = quantum_correlator(ghz_density(s.parties));
        } else {
            throw ValidationError("--correlator must be 'closed' or 'trace'");
        }
        nlohmann::json j = evaluation_json(s, corr);
        if (s.parties == 3 && s.designated == 1 && o.ensemble_in.empty()) {
            const TightPair c = tripartite_ghz_closed_unchecked(s.theta, to_radians(o, o.phi), to_radians(o, o.psi));
            j["closed_form"] = {{"L_plus", c.plus}, {"L_minus", c.minus}};
        }
        results.push_back(std::move(j));
    }
    out << results.dump(2) << '\n';
    return kExitPass;
}

}  // namespace

std::uint64_t parse_seed(const std::string& s) {
    if (s.empty() || s.front() == '-' || s.front() == '+') {
        throw ValidationError("seed must be a nonnegative integer, got '" + s + "'");
    }
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
        throw ValidationError("seed must be a 64-bit unsigned integer, got '" + s + "'");
    }
    if (used != s.size()) {
        throw ValidationError("seed must be a 64-bit unsigned integer, got '" + s + "'");
    }
    return v;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LEGGETT_LAB_SEED")) {
        try {
            return parse_seed(env);
        } catch (const ValidationError&) {
            return kDefaultSeed;
        }
    }
    return kDefaultSeed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Leggett-type inequality laboratory: GHZ correlations, violation scans and model checks",
                 "leggett-lab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed_text, "RNG seed (decimal or 0x hex); default LEGGETT_LAB_SEED or 0xC0FFEE");
    app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
    app.add_flag("--degrees", o.degrees, "Read angle inputs in degrees (output stays in radians)");

    auto* correlate = app.add_subcommand("correlate", "Closed-form vs brute-force GHZ correlation");
    correlate->add_option("--n", o.n, "Number of qubits");
    correlate->add_option("--angles", o.angles, "polar,azimuth per measured party")->delimiter(',');
    correlate->add_option("--random", o.random_lists, "Number of seeded random angle lists");
    correlate->add_option("--reduced", o.reduced, "Trace out this party and compare the reduced correlator");

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--n", o.verify_n, "Largest party count");
    verify->add_option("--trials", o.verify_trials, "Monte Carlo model trials");
    verify->add_flag("--selftest-break", o.selftest_break, "Inject a fault to exercise the failure path");

    auto* scan = app.add_subcommand("scan", "Grid scan of L+ and L- over (theta, phi, psi)");
    scan->add_option("--theta-steps", o.theta_steps);
    scan->add_option("--phi-steps", o.phi_steps);
    scan->add_option("--psi-steps", o.psi_steps);
    scan->add_option("--out", o.scan_out, "CSV path, '-' for stdout");

    auto* optimize = app.add_subcommand("optimize", "Maximize L+ / L- with multi-start Nelder-Mead");
    optimize->add_option("--branch", o.branch, "plus, minus or both")
        ->check(CLI::IsMember({"plus", "minus", "both"}));
    optimize->add_option("--theta", o.fixed_theta, "Pin theta")->expected(1);
    optimize->add_option("--phi", o.fixed_phi, "Pin phi")->expected(1);
    optimize->add_option("--tol", o.tolerance);
    optimize->add_option("--max-iter", o.max_iterations);
    optimize->add_flag("--check", o.check, "Exit 1 if the maximum misses 2(sqrt5+1) by more than 1e-6");
    optimize->add_option("--out", o.optimize_out, "JSON path, '-' for stdout");

    auto* oracle = app.add_subcommand("oracle", "Monte Carlo soundness of the Leggett model");
    oracle->add_option("--trials", o.trials);
    oracle->add_option("--parties", o.parties, "Party counts to draw from")->delimiter(',');
    oracle->add_option("--max-atoms", o.max_atoms);
    oracle->add_option("--delta", o.delta, "Perturbation half-width of the admissible sampler");
    oracle->add_option("--out", o.transcript_out, "JSON-lines transcript path, '-' for stdout, '' to skip");
    oracle->add_option("--summary", o.summary_out, "Summary JSON path, '-' for stdout");

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate the inequalities on a GHZ state");
    evaluate->add_option("--n", o.eval_n);
    evaluate->add_option("--i", o.designated, "Designated party (1-based)");
    evaluate->add_option("--theta", o.theta);
    evaluate->add_option("--phi", o.phi);
    evaluate->add_option("--psi", o.psi);
    evaluate->add_flag("--all-designated", o.all_designated, "Loop the designated party over 1..N");
    evaluate->add_option("--correlator", o.correlator, "closed or trace");
    evaluate->add_option("--ensemble", o.ensemble_in, "Read the settings ensemble from JSON");
    evaluate->add_option("--save-ensemble", o.ensemble_out, "Write the settings ensemble as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        const std::uint64_t seed = o.seed_text.empty() ? default_seed() : parse_seed(o.seed_text);
        if (*correlate) {
            return cmd_correlate(o, seed, out);
        }
        if (*verify) {
            return cmd_verify(o, seed, out, err);
        }
        if (*scan) {
            return cmd_scan(o, out);
        }
        if (*optimize) {
            return cmd_optimize(o, out);
        }
        if (*oracle) {
            return cmd_oracle(o, seed, out);
        }
        return cmd_evaluate(o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace leggett
