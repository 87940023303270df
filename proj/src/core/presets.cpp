#include "core/presets.hpp"

#include "core/cusp.hpp"
#include "core/errors.hpp"
#include "core/radial_maps.hpp"
#include "core/spiral.hpp"

namespace gfd {

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "cusp-lp-duality", "cusp-sigma-ls",       "cusp-exp-k", "spiral-bounded-sigma",
        "spiral-lp",       "triple-log",          "power-log",
    };
    return names;
}

FamilyPtr make_preset(const std::string& name, const PresetOptions& options) {
    if (name == "cusp-lp-duality")
        return std::make_shared<CuspMap>(CuspParams::lp_duality(options.p, options.eps));
    if (name == "cusp-sigma-ls") return std::make_shared<CuspMap>(CuspParams::sigma_ls(options.p));
    if (name == "cusp-exp-k")
        return std::make_shared<CuspMap>(CuspParams::exp_k(options.mu, options.nu));
    if (name == "spiral-bounded-sigma")
        return std::make_shared<SpiralMap>(SpiralParams::bounded_sigma());
    if (name == "spiral-lp") return std::make_shared<SpiralMap>(SpiralParams::lp(options.p));
    if (name == "triple-log") return std::make_shared<TripleLogMap>();
    if (name == "power-log") return std::make_shared<PowerLogMap>(options.alpha);
    throw domain_error("unknown preset: " + name);
}

}  // namespace gfd
