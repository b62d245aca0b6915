#include "leggett/serialize.hpp"

#include "leggett/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace leggett {

namespace {

nlohmann::json vec_json(const UnitVector3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

UnitVector3 vec_from(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
        throw ValidationError(where + ": expected [x, y, z]");
    }
    return UnitVector3::make(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string("ensemble JSON: missing field '") + key + "'");
    }
    return j.at(key);
}

Frame frame_from(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        throw ValidationError(where + ": expected three vectors");
    }
    return {vec_from(j[0], where), vec_from(j[1], where), vec_from(j[2], where)};
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("scan CSV: bad number '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::json ensemble_to_json(const SettingsEnsemble& s) {
    nlohmann::json j;
    j["N"] = s.parties;
    j["i"] = s.designated;
    j["theta"] = s.theta;
    for (const char* key : {"settings", "settings_primed"}) {
        const bool primed = std::string(key) == "settings_primed";
        nlohmann::json pairs = nlohmann::json::array();
        for (int k = 0; k < 3; ++k) {
            nlohmann::json tuple = nlohmann::json::array();
            for (const auto& v : s.tuple(k, primed)) {
                tuple.push_back(vec_json(v));
            }
            pairs.push_back(std::move(tuple));
        }
        j[key] = std::move(pairs);
    }
    j["e"] = {vec_json(s.e[0]), vec_json(s.e[1]), vec_json(s.e[2])};
    j["e_prime"] = {vec_json(s.e_prime[0]), vec_json(s.e_prime[1]), vec_json(s.e_prime[2])};
    return j;
}

SettingsEnsemble ensemble_from_json(const nlohmann::json& j) {
    SettingsEnsemble s;
    try {
        s.parties = field(j, "N").get<int>();
        s.designated = field(j, "i").get<int>();
        s.theta = field(j, "theta").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("ensemble JSON: ") + e.what());
    }
    if (s.parties < 2 || s.parties > kMaxParties) {
        throw ValidationError("ensemble JSON: N outside [2, " + std::to_string(kMaxParties) + "]");
    }
    if (s.designated < 1 || s.designated > s.parties) {
        throw ValidationError("ensemble JSON: i outside [1, N]");
    }
    for (const char* key : {"settings", "settings_primed"}) {
        const auto& pairs = field(j, key);
        if (!pairs.is_array() || pairs.size() != 3) {
            throw ValidationError(std::string("ensemble JSON: '") + key + "' needs three tuples");
        }
        auto& dst = std::string(key) == "settings" ? s.settings : s.settings_primed;
        for (std::size_t k = 0; k < 3; ++k) {
            if (!pairs[k].is_array() || pairs[k].size() != static_cast<std::size_t>(s.parties)) {
                throw ValidationError(std::string("ensemble JSON: '") + key + "' tuple " + std::to_string(k + 1) +
                                      " needs N vectors");
            }
            for (const auto& v : pairs[k]) {
                dst[k].push_back(vec_from(v, key));
            }
        }
    }
    if (j.contains("e") && j.contains("e_prime")) {
        s.e = frame_from(j.at("e"), "e");
        s.e_prime = frame_from(j.at("e_prime"), "e_prime");
    } else {
        const double c = std::cos(s.theta / 2);
        const double sn = std::sin(s.theta / 2);
        if (std::abs(c) < 1e-12 || std::abs(sn) < 1e-12) {
            throw ValidationError("ensemble JSON: frames must be given explicitly when theta is 0 or pi");
        }
        const auto idx = static_cast<std::size_t>(s.designated - 1);
        for (std::size_t k = 0; k < 3; ++k) {
            const Vec3 a = s.settings[k][idx].vec();
            const Vec3 b = s.settings_primed[k][idx].vec();
            s.e[k] = UnitVector3::normalized((1.0 / (2.0 * c)) * (a + b));
            s.e_prime[k] = UnitVector3::normalized((1.0 / (2.0 * sn)) * (a - b));
        }
    }
    const ValidationReport r = validate_ensemble(s);
    if (!r.ok) {
        const auto& f = r.failures.front();
        std::ostringstream os;
        os << "ensemble JSON: " << f.check << " check failed (residual " << f.residual << ")";
        throw ValidationError(os.str());
    }
    return s;
}

void write_scan_csv(std::ostream& os, const ScanGrid& g) {
    os << kScanCsvVersion << '\n' << kScanCsvHeader << '\n';
    std::string line;
    for (std::size_t t = 0; t < g.theta.size(); ++t) {
        for (std::size_t p = 0; p < g.phi.size(); ++p) {
            for (std::size_t s = 0; s < g.psi.size(); ++s) {
                const std::size_t id = g.index(t, p, s);
                line.clear();
                for (double v : {g.theta[t], g.phi[p], g.psi[s], g.l_plus[id], g.l_minus[id],
                                 g.l_plus[id] - ScanGrid::bound, g.l_minus[id] - ScanGrid::bound}) {
                    if (!line.empty()) {
                        line += ',';
                    }
                    line += format_double(v);
                }
                line += '\n';
                os << line;
            }
        }
    }
}

ScanGrid read_scan_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kScanCsvVersion) {
        throw ValidationError("scan CSV: missing version line");
    }
    if (!std::getline(is, line) || line != kScanCsvHeader) {
        throw ValidationError("scan CSV: unexpected header");
    }
    std::vector<std::array<double, 5>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<double, 5> row{};
        std::istringstream ls(line);
        std::string cell;
        for (std::size_t c = 0; c < 7; ++c) {
            if (!std::getline(ls, cell, ',')) {
                throw ValidationError("scan CSV: short row");
            }
            if (c < 5) {
                row[c] = parse_double(cell);
            }
        }
        rows.push_back(row);
    }
    ScanGrid g;
    const auto push_unique = [](std::vector<double>& axis, double v) {
        if (std::find(axis.begin(), axis.end(), v) == axis.end()) {
            axis.push_back(v);
        }
    };
    for (const auto& r : rows) {
        push_unique(g.theta, r[0]);
        push_unique(g.phi, r[1]);
        push_unique(g.psi, r[2]);
    }
    if (rows.size() != g.theta.size() * g.phi.size() * g.psi.size()) {
        throw ValidationError("scan CSV: rows do not form a complete grid");
    }
    for (const auto& r : rows) {
        g.l_plus.push_back(r[3]);
        g.l_minus.push_back(r[4]);
    }
    return g;
}

nlohmann::json optimum_to_json(const OptimumReport& r) {
    nlohmann::json j;
    j["branch"] = branch_name(r.branch);
    j["theta"] = r.theta;
    j["phi"] = r.phi;
    j["psi"] = r.psi;
    j["value"] = r.value;
    j["expected_max"] = kMaxViolation;
    j["deviation"] = r.value - kMaxViolation;
    j["theta_expected"] = optimal_theta(r.branch);
    j["locus_residual"] = r.locus_residual;
    j["converged"] = r.converged;
    j["starts"] = r.starts;
    j["iterations"] = r.iterations;
    if (!r.warning.empty()) {
        j["warning"] = r.warning;
    }
    return j;
}

nlohmann::json trial_to_json(const TrialRecord& r) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["trial"] = r.index;
    j["N"] = r.parties;
    j["i"] = r.designated;
    j["theta"] = r.theta;
    j["atoms"] = r.atoms;
    j["sampler"] = r.perturbed ? "perturbed" : "product";
    j["margins"] = {{"final_plus", r.margin_general_plus},
                    {"final_minus", r.margin_general_minus},
                    {"intermediate", r.margin_intermediate},
                    {"linear", r.margin_linear},
                    {"per_atom", r.margin_sharp}};
    j["max_slack"] = r.max_slack;
    return j;
}

void write_transcript(std::ostream& os, const SoundnessSummary& s) {
    for (const auto& r : s.records) {
        os << trial_to_json(r).dump() << '\n';
    }
}

nlohmann::json soundness_summary_json(const SoundnessSummary& s) {
    static const std::vector<double> edges{-6.0, -4.0, -3.0, -2.0, -1.0, -0.5, -0.1, -1e-10, 1e-10, 0.1, 0.5, 1.0, 2.0};
    std::vector<long long> counts(edges.size() + 1, 0);
    for (const auto& r : s.records) {
        const double m = std::max(r.margin_general_plus, r.margin_general_minus);
        const auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), m) - edges.begin());
        ++counts[bin];
    }
    nlohmann::json hist = nlohmann::json::array();
    for (std::size_t b = 0; b < counts.size(); ++b) {
        nlohmann::json h;
        h["lo"] = b == 0 ? nlohmann::json(nullptr) : nlohmann::json(edges[b - 1]);
        h["hi"] = b == edges.size() ? nlohmann::json(nullptr) : nlohmann::json(edges[b]);
        h["count"] = counts[b];
        hist.push_back(std::move(h));
    }
    nlohmann::json j;
    j["trials"] = s.trials;
    j["violations"] = {{"final", s.final_violations},
                       {"linear", s.linear_violations},
                       {"per_atom", s.per_atom_violations},
                       {"intermediate_advisory", s.intermediate_violations}};
    const auto finite_or_null = [](double v) { return std::isfinite(v) && v > -1e299 ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j["max_margin"] = {{"final", finite_or_null(s.max_final_margin)},
                       {"linear", finite_or_null(s.max_linear_margin)},
                       {"intermediate", finite_or_null(s.max_intermediate_margin)},
                       {"per_atom", finite_or_null(s.max_sharp_margin)}};
    j["max_chain_slack"] = finite_or_null(s.max_chain_slack);
    j["final_margin_histogram"] = std::move(hist);
    return j;
}

}  // namespace leggett
