// gauss.hpp: cached Gauss-Legendre rules on [-1, 1].
#pragma once

#include <vector>

namespace gfd {

struct GaussRule {
    std::vector<double> x;  // nodes, ascending
    std::vector<double> w;  // weights, sum to 2
};

// Returns the n-point rule; built on first request and cached (thread-safe).
const GaussRule& gauss_legendre(int n);

}  // namespace gfd
