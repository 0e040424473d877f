#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace liyau {

enum class Family {
    EuclideanLine,
    EuclideanRadial,
    Circle,
    HalfLineNeumann,
    IntervalNeumann,
    SphereRadial,
    HyperbolicRadial,
};

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

// Constant drift Z = c d/dx on the flat 1-D families; "none" otherwise.
struct Drift {
    double c = 0.0;
    bool active() const { return c != 0.0; }
    std::string id() const;
};

Drift parse_drift(std::string_view spec);

// Coordinate interval of the 1-D reduction. Boundaries marked reflecting carry
// a Neumann condition (physical boundary or computational window edge).
struct CoordinateDomain {
    double lo = 0.0;
    double hi = 0.0;
    bool periodic = false;
    bool lo_reflecting = false;
    bool hi_reflecting = false;
    bool lo_is_pole = false;
    bool hi_is_pole = false;
    double length() const { return hi - lo; }
};

struct ModelManifold {
    Family family = Family::EuclideanLine;
    int m = 1;
    double n = 1.0;
    double K = 0.0;
    std::optional<double> sigma;
    Drift drift;
    // Interval length for IntervalNeumann; computational window radius for
    // the unbounded families (line: [-W, W], half-line and radial: [0, W]).
    double length = 0.0;

    bool has_boundary() const;
    bool is_radial() const;
    double sigma_or_zero() const { return sigma.value_or(0.0); }

    // Domain used by deterministic solvers (windows applied).
    CoordinateDomain solver_domain() const;
    // Domain seen by the diffusion: only physical boundaries reflect.
    CoordinateDomain process_domain() const;

    // L = d^2/dr^2 + coefficient(r) d/dr, coefficient = b(r) + Z.
    double volume_drift(double r) const;
    double volume_drift_derivative(double r) const;
    double coefficient(double r) const { return volume_drift(r) + drift.c; }
    // Density of the reversible measure of L in the coordinate.
    double density(double r) const;
    // Model curvature-dimension constant for this family, ignoring overrides.
    double model_K() const;
    // Reference length used for default finite-difference steps.
    double extent() const;
};

ModelManifold make_model_manifold(Family family, int m, double n,
                                  std::string_view drift_spec = "none",
                                  std::optional<double> K_override = std::nullopt,
                                  std::optional<double> length = std::nullopt);

nlohmann::json to_json(const ModelManifold& M);
ModelManifold manifold_from_json(const nlohmann::json& j);

using ScalarField = std::function<long double(long double)>;

struct CdCheckReport {
    std::size_t points = 0;
    double min_defect = 0.0;
    double worst_point = 0.0;
    double h = 0.0;
    std::vector<double> defects;
};

// Evaluates 1/2 L|f'|^2 - f'(Lf)' - K f'^2 - (Lf)^2/n by central differences at
// the interior grid points (first and last points are stencil anchors only).
// h <= 0 selects 1e-4 * M.extent().
CdCheckReport cd_check(const ModelManifold& M, const ScalarField& f,
                       const std::vector<double>& grid, double h = 0.0);

// sqrt(K (n-1)) coth(sqrt(K/(n-1)) r); (n-1)/r when K_region = 0.
double laplacian_comparison(double K_region, double n, double r);

}  // namespace liyau
