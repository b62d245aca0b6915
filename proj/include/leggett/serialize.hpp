#pragma once

// File formats of leggett-lab.
//
// Settings ensemble (JSON):
//   {"N": 3, "i": 1, "theta": 0.927,
//    "settings":        [[[x,y,z], ... N vectors], ... 3 pairs],
//    "settings_primed": [[[x,y,z], ...], ...],
//    "e": [[x,y,z] x3], "e_prime": [[x,y,z] x3]}
// "i" is 1-based. The frames are optional on input and are then recovered
// from the designated party's pair sums and differences.
//
// Scan surface (CSV): a `# leggett-lab scan v1` line, then the header
//   theta,phi,psi,L_plus,L_minus,margin_plus,margin_minus
// with one row per grid point, theta slowest and psi fastest.
//
// Monte Carlo transcripts: one JSON object per line.

#include "leggett/geometry.hpp"
#include "leggett/oracle.hpp"
#include "leggett/optim.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace leggett {

inline constexpr const char* kScanCsvVersion = "# leggett-lab scan v1";
inline constexpr const char* kScanCsvHeader = "theta,phi,psi,L_plus,L_minus,margin_plus,margin_minus";

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

nlohmann::json ensemble_to_json(const SettingsEnsemble& s);
/// Throws ValidationError on schema problems or if the result fails validate_ensemble.
SettingsEnsemble ensemble_from_json(const nlohmann::json& j);

void write_scan_csv(std::ostream& os, const ScanGrid& g);
/// Inverse of write_scan_csv for a complete rectangular grid.
ScanGrid read_scan_csv(std::istream& is);

nlohmann::json optimum_to_json(const OptimumReport& r);

nlohmann::json trial_to_json(const TrialRecord& r);
void write_transcript(std::ostream& os, const SoundnessSummary& s);

/// Counts, maxima and a histogram of the per-trial final margins.
nlohmann::json soundness_summary_json(const SoundnessSummary& s);

}  // namespace leggett
