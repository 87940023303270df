// errors.hpp: exception taxonomy; the C API maps these onto status codes.
#pragma once

#include <stdexcept>
#include <string>

namespace gfd {

// Point outside the map's domain, or a scalar argument outside its range.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Point on (or too close to) a region interface curve to classify.
struct interface_error : std::runtime_error {
    explicit interface_error(const std::string& what) : std::runtime_error(what) {}
};

// A stencil or instance violates a precondition in a recoverable way.
struct degenerate_error : std::runtime_error {
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested operation does not exist for this map family.
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

// An iteration failed to reach its tolerance.
struct no_convergence_error : std::runtime_error {
    explicit no_convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gfd
