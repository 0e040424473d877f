#pragma once

#include <cstddef>
#include <functional>

namespace liyau {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    std::size_t max_evals = 1'000'000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};

// Adaptive Gauss-Kronrod (15 point) on [a, b]. The rule never evaluates the
// endpoints, so integrands with removable endpoint singularities are fine.
// Throws NumericalError when the tolerance cannot be met within max_evals.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

}  // namespace liyau
