// presets.hpp: the named map constructions the command-line tool exposes,
// built from a small set of tunable exponents.
#pragma once

#include <string>
#include <vector>

#include "core/families.hpp"

namespace gfd {

// Exponent knobs shared across the registry; each preset reads the ones it
// understands and ignores the rest.  A nu of zero means "derive the default
// from mu".
struct PresetOptions {
    double p = 2.0;      // L^p exponent (cusp-lp-duality, cusp-sigma-ls, spiral-lp)
    double eps = 0.5;    // sector-shrink exponent (cusp-lp-duality)
    double mu = 1.5;     // Zygmund exponent (cusp-exp-k)
    double nu = 0.0;     // distortion-decay exponent (cusp-exp-k); 0 = default
    double alpha = 1.0;  // modulus exponent (power-log)
};

// All registered preset names, in their canonical order.
const std::vector<std::string>& preset_names();

// Construct the named preset; throws domain_error for unknown names or
// parameters the underlying family rejects.
FamilyPtr make_preset(const std::string& name, const PresetOptions& options = {});

}  // namespace gfd
