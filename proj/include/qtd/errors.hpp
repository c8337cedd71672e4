#pragma once

#include <stdexcept>
#include <string>

namespace qtd {

/// Thrown when a superposition's normalization falls below the representable
/// floor; the state carries no usable probability mass.
struct NearNullStateError : std::domain_error {
    explicit NearNullStateError(const std::string& what) : std::domain_error(what) {}
};

/// Thrown by model builders when a discretization parameter violates one of
/// the documented bounds.  The message names the violated bound.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a named builtin scenario does not exist.  The message lists
/// the available names.
struct UnknownScenarioError : std::invalid_argument {
    explicit UnknownScenarioError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qtd
