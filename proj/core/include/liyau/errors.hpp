#pragma once

#include <stdexcept>
#include <string>

namespace liyau {

// Raised when a numerical procedure cannot meet its accuracy contract
// (quadrature non-convergence, spectral tail too large, loss of positivity).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace liyau
