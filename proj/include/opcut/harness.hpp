#ifndef OPCUT_HARNESS_HPP
#define OPCUT_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opcut/models.hpp"
#include "opcut/seminorms.hpp"
#include "opcut/tolerances.hpp"

namespace opcut {

// --- rate fitting -----------------------------------------------------------

struct FitResult {
    double rho = 0.0; // value ~ C * L^{-rho}
    double c = 0.0;
    double r2 = 0.0;
    int points_used = 0;
};

// Least squares of log(value) against log(L), restricted to points with
// value above `floor`.  Throws InsufficientPoints below 4 usable points.
FitResult fit_rate(const std::vector<std::pair<double, double>>& series,
                   double floor = 1e-13);

// --- study configuration ----------------------------------------------------

// Study kinds.  The identifiers double as the CLI/config vocabulary and the
// `study` column of the reports.
const std::vector<std::string>& study_kinds();

struct StudyConfig {
    std::string kind;
    std::string model = "commuting";
    ModelParams params;
    std::vector<std::size_t> dims = {32, 64}; // ascending
    int L_count = 12;
    std::string L_rule = "midpoints"; // midpoints | midpoints-log
    bool L_allow_upper = false;
    std::vector<TestFunction> f_set = default_test_functions();
    int k_max = 4;
    std::vector<double> times = {1.0};
    std::uint64_t seed = 2024;
    std::string x_source = "B"; // lemma2_2 observable: B | random | random-flat | H0
    unsigned s = 1;             // weight exponent (lemma59 sweep top, prop60)
    unsigned ell = 2;           // power for lemma61
    double horizon = 1.0;       // prop60 integration horizon T
    double tau_max = 10.0;      // example_aN sweep upper end
    int tau_count = 10;         // example_aN grid points per axis
    int threads = 0;            // 0 = leave the OpenMP default
    std::string out_dir;        // empty = no files written by run
    std::string out_prefix;
    Tolerances tol;

    void validate() const; // throws ConfigError
};

// Key/value tree file ("key = value", '#' comments, dots nest).
StudyConfig parse_config_file(const std::string& path);
StudyConfig parse_config_text(const std::string& text);

// --- report -----------------------------------------------------------------

struct SeriesPoint {
    double L = 0.0;      // abscissa; meaning is study-specific (cutoff, tau, dim)
    double value = 0.0;  // NaN when errored
    std::string error;   // empty when the point evaluated cleanly
};

struct StudySeries {
    std::size_t dim = 0;
    std::string f_kind;   // "exp" | "gauss" | "polyexp" | study-specific tag
    std::string f_params; // includes study-specific variant markers
    int k = 0;
    std::vector<SeriesPoint> points;
    std::optional<FitResult> fit;
    std::string fit_note;
    std::optional<double> stability_delta; // vs the next dimension in the sweep
    std::string verdict = "skipped";       // converged | not-converged | skipped
    std::string reason;
};

struct ConvergenceReport {
    std::string kind;
    std::string model;
    std::string config_echo; // canonical key=value rendering of the config
    std::uint64_t seed = 0;
    std::vector<StudySeries> series;
    std::string overall = "converged"; // converged | not-converged
    int exit_code() const { return overall == "converged" ? 0 : 2; }
};

ConvergenceReport run_study(const StudyConfig& cfg);

// CSV: study,model,dim,f_kind,f_params,k,L,value (one row per point).
// JSON: verdicts, fits, config echo, tool version, seed.  Byte-stable for
// fixed inputs.
void write_csv(const ConvergenceReport& r, std::ostream& os);
void write_json_summary(const ConvergenceReport& r, std::ostream& os);

// Writes <prefix><kind>_<model>_d<dims0>.csv / .summary.json under dir;
// returns the two paths.
std::vector<std::string> emit_report(const ConvergenceReport& r,
                                     const std::string& format,
                                     const std::string& dir,
                                     const std::string& prefix = "");

extern const char* const tool_version;

} // namespace opcut

#endif
