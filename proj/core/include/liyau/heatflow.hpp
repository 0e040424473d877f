#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "liyau/geometry.hpp"

namespace liyau {

inline constexpr double kPositivityFloor = 1e-12;

enum class Scheme { Spectral, CrankNicolsonFD };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

// Value, derivative and generator of a basis function or datum at a point.
struct Jet {
    double value = 0.0;
    double grad = 0.0;
    double L = 0.0;
};

// k-th Neumann mode of the family: cos(k theta) on the circle, cos(k pi x / l)
// on the interval, cos(k x) on the line and half-line, normalized Gegenbauer
// C_k^{(m-1)/2}(cos r) on the sphere, Gamma(nu+1)(2/kr)^nu J_nu(kr) on flat
// radial space. On the hyperbolic window the profile cos(k pi r / R) is used;
// it satisfies the boundary conditions but is not an eigenfunction.
Jet mode_jet(const ModelManifold& M, int k, double x);
// Eigenvalue of -L for mode k, or nullopt when the mode is not an eigenfunction.
std::optional<double> mode_eigenvalue(const ModelManifold& M, int k);

struct ModeTerm {
    int k = 0;
    double amplitude = 0.0;
};

class InitialDatum {
public:
    enum class Kind { Constant, Modes, Gaussian, Custom, Fourier, Nodal };

    static InitialDatum constant(double c);
    static InitialDatum modes(double base, std::vector<ModeTerm> terms);
    // base + amplitude * exp(-r^2 / (4 spread)) on Euclidean families.
    static InitialDatum gaussian(double base, double amplitude, double spread);
    // Arbitrary smooth datum; derivatives fall back to central differences.
    static InitialDatum custom(std::string id, std::function<double(double)> u0,
                               std::function<double(double)> du0 = {},
                               std::function<double(double)> d2u0 = {});
    // Cosine/sine coefficients: u = sum_k a_k phi_k (+ b_k sin(k theta) on the circle).
    static InitialDatum fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs = {});
    // Nodal values on a solver grid (continuation of finite-difference solves).
    static InitialDatum nodal(std::vector<double> grid, std::vector<double> values);

    Kind kind() const { return kind_; }
    std::string id() const;
    nlohmann::json params() const;

    Jet evaluate(const ModelManifold& M, double x) const;
    // Rigorous lower bound when available, otherwise a dense-sample minimum.
    double lower_bound(const ModelManifold& M) const;
    double upper_bound(const ModelManifold& M) const;

    double base() const { return base_; }
    const std::vector<ModeTerm>& terms() const { return terms_; }
    double amplitude() const { return amplitude_; }
    double spread() const { return spread_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }
    const std::vector<double>& nodal_grid() const { return cos_; }
    const std::vector<double>& nodal_values() const { return sin_; }

private:
    Kind kind_ = Kind::Constant;
    std::string custom_id_;
    double base_ = 0.0;
    std::vector<ModeTerm> terms_;
    double amplitude_ = 0.0;
    double spread_ = 1.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
    std::function<double(double)> f_, df_, d2f_;
};

InitialDatum datum_from_json(const nlohmann::json& j);

struct SolveDiagnostics {
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double u0_min = 0.0;
    double u0_max = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    std::size_t steps = 0;
    std::size_t modes = 0;
    bool max_principle_ok = true;
    bool positivity_ok = true;
    bool mass_checked = false;
};

struct HeatState {
    ModelManifold manifold;
    double t = 0.0;
    Scheme scheme = Scheme::Spectral;
    int grid_size = 0;
    std::vector<double> grid;
    std::vector<double> u;
    std::vector<double> grad_u;
    std::vector<double> Lu;
    SolveDiagnostics diagnostics;
    // Closed-form datum equal to u_t (spectral scheme) or nodal values (FD),
    // used to continue the flow from this state.
    std::optional<InitialDatum> evolved;

    std::size_t index_of(double x) const;
};

struct Harnack {
    double X = 0.0;
    double Y = 0.0;
    double W = 0.0;
};

// Heat kernel p_t(x, y) of d/dt = L (with Neumann reflection when a boundary exists).
double exact_kernel(const ModelManifold& M, double t, double x, double y);
double circle_kernel_wrapped(double t, double x, double y);
double circle_kernel_spectral(double t, double x, double y);

// Grid snapshot of p_t(., y) with analytic gradient and generator (Euclidean families).
HeatState kernel_state(const ModelManifold& M, double t, const std::vector<double>& grid,
                       double y = 0.0);

// Nodes used by solve_heat for the given family and scheme.
std::vector<double> solver_grid(const ModelManifold& M, int grid_size, Scheme scheme);

HeatState solve_heat(const ModelManifold& M, const InitialDatum& u0, double t, int grid_size,
                     Scheme scheme);

Harnack harnack_quantities(const HeatState& state, double x);
Harnack harnack_at(const HeatState& state, std::size_t i);

double mass(const ModelManifold& M, const std::vector<double>& grid, const std::vector<double>& u);

void write_csv(const HeatState& state, std::ostream& os);

}  // namespace liyau
