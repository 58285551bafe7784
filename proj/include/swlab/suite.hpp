#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace swlab {

struct SuiteConfig {
    std::vector<int> grids{8};
    std::vector<double> epsilons{1e-2, 5e-3, 2.5e-3};
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerances;  // overrides by check name
    std::vector<std::string> suites;
    int threads = 1;

    // Throws std::invalid_argument on odd or small grids, non-decreasing epsilons, unknown suites.
    void validate() const;
};

// Plain "key = value" lines; '#' starts a comment. Keys: grids, epsilons, seed, suites, threads, tol.<check>.
SuiteConfig parse_config(std::istream& is);
SuiteConfig load_config(const std::string& path);

const std::vector<std::string>& suite_names();

struct CheckReport {
    std::string name;
    std::vector<double> measured;
    // "le": every measured value <= threshold; "ge": every value >= threshold;
    // "near": every |value - target| <= threshold.
    std::string comparison;
    double threshold = 0;
    double target = 0;
    bool pass = false;
    double runtime = 0;
};

std::vector<CheckReport> run_suite(const SuiteConfig& config);
// {version, seed, checks}; runtimes only when timing is set.
std::string report_json(const SuiteConfig& config, const std::vector<CheckReport>& checks, bool timing = false);

struct StudyResult {
    std::string check;
    std::vector<double> levels;  // t, epsilon or grid spacing h
    std::vector<double> errors;
    double slope = 0;
    double residual = 0;  // rms deviation of the log-log fit
    bool monotone = true;
    bool saturated = false;  // every error at the floating-point floor
};

// Checks: dirac-variation, lc-variation, holonomy (levels are t or epsilon), adjoint-curved,
// adjoint-flat (levels are grid sizes). Needs at least three levels.
StudyResult convergence_study(const std::string& check, const std::vector<double>& levels, std::uint64_t seed = 1);
std::vector<std::string> study_names();

// Least-squares slope of log(errors) against log(levels) and rms residual.
std::pair<double, double> loglog_fit(const std::vector<double>& levels, const std::vector<double>& errors);

// Measurements shared by the suite, the study driver and the acceptance binary.
namespace measure {
// max over random pairs (v, w) of |<D v, w> - <v, D* w>| / (|v| |D* w|) at a band-limited configuration.
double adjoint_defect(int n, bool curved, std::uint64_t seed, int pairs = 1);
// Per-pair values of the same, background fixed by seed.
std::vector<double> adjoint_defects(int n, bool curved, std::uint64_t seed, int pairs);
// Relative L2 error of dirac_variation against the transported central difference at step t.
double dirac_variation_error(int n, double t, std::uint64_t seed);
// Relative error of lc_variation against the central difference of the discrete Christoffel symbols.
double lc_variation_error(int n, double t, std::uint64_t seed);
// Per-sample relative errors |hol(eps) + Omega| / |Omega| for samples random (g, h, k).
std::vector<double> holonomy_errors(double eps, int samples, std::uint64_t seed);
}  // namespace measure

}  // namespace swlab
