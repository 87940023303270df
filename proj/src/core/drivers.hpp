// drivers.hpp: the command implementations behind the CLI and the C API.
//
// Each command takes a RunConfig (preset name plus exponent and sampling
// knobs), runs the relevant verification or classification work, and returns
// a Report.  Commands never print; rendering and exit-code policy live with
// the callers.  Checks that a family cannot support (e.g. a blow-up witness
// for a bounded map) come back with status Unsupported rather than failing.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/report.hpp"

namespace gfd {

struct RunConfig {
    std::string preset;
    double p = 2.0;               // L^p exponent for distortion norms
    std::vector<double> q;        // Sigma/K exponents; empty = command default
    std::vector<double> s;        // Sigma exponents; empty = command default
    double mu = 1.5;              // Zygmund exponent
    std::vector<double> lambda;   // exp-transform rates; empty = {1, 5, 25}
    double eps = 0.5;             // sector-shrink exponent
    double nu = 0.0;              // distortion-decay exponent (0 = from mu)
    double alpha = 1.0;           // modulus exponent
    std::uint64_t samples = 100000;
    std::uint64_t seed = 42;
    int depth = 40;               // dyadic shells for classification
    int cells = 8;                // radial quadrature cells per factor two
    int order = 8;                // Gauss-Legendre order
};

// Registered command names, in canonical order.
const std::vector<std::string>& command_names();

// Pointwise invariants of the chosen preset: distortion-inclusion residuals,
// finite-difference derivative validation, interface-gap continuity,
// a blow-up witness, and (for maps continuous at the origin) a modulus check.
Report cmd_verify(const RunConfig& config);

// The preset's headline norm and integrability claims, each classified by the
// dyadic-shell profile and held against the closed-form expectation.
Report cmd_norms(const RunConfig& config);

// Sweeps an exponent grid and locates the empirical convergence boundary.
// Presets with a sharp predicted boundary compare against it; the others run
// in exploration mode, which only reports the per-exponent classifications.
Report cmd_scan(const RunConfig& config);

// Modulus-of-continuity sampling and log-exponent fit for the continuous
// power-log family; reports the fitted exponent against the construction's.
Report cmd_modulus(const RunConfig& config);

// The analytic-bound suite: exponential-Young stress test, ODE-comparison
// instances, the two triple-log estimate profiles, and reverse-Holder
// stability, all under the configured seed.
Report cmd_lemmas(const RunConfig& config);

// Dispatch by command name; throws domain_error for an unknown command or,
// where the command requires one, an unknown preset.
Report run_command(const std::string& command, const RunConfig& config);

}  // namespace gfd
