#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "liyau/clock.hpp"
#include "liyau/geometry.hpp"
#include "liyau/heatflow.hpp"

namespace liyau {

// Scalar coefficient on the model coordinate: a constant or a bounded callable.
class Field {
public:
    static Field constant(double v);
    static Field callable(std::function<double(double)> fn);

    double operator()(double x) const { return fn_ ? fn_(x) : value_; }
    bool is_constant() const { return !fn_; }
    double constant_value() const { return value_; }

private:
    double value_ = 0.0;
    std::function<double(double)> fn_;
};

enum class ReflectionScheme {
    // Skorokhod step using the exact Brownian-bridge extremum between grid points.
    BridgeCorrected,
    // Plain projection of the Euler endpoint; local time = projection distance.
    Projection,
};

std::string_view to_string(ReflectionScheme s);
ReflectionScheme parse_reflection_scheme(std::string_view name);

struct SimOptions {
    ReflectionScheme scheme = ReflectionScheme::BridgeCorrected;
    std::optional<Field> K_field;      // defaults to the manifold's K
    std::optional<Field> sigma_field;  // defaults to the manifold's sigma (or 0)
};

struct PathSample {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> dL;        // local-time increment of step k (both boundaries)
    std::vector<double> dL_upper;  // part of dL accrued at the upper boundary
    std::vector<double> A;         // int_0^{s_k} K(X_r) dr, left-point rule
    std::vector<double> B;         // int_0^{s_k} sigma(X_r) dL_r
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::size_t chart_escapes = 0;
};

// Steps of size t / ceil(t / dt); the effective step is reported by the sample times.
PathSample simulate_reflected_path(const ModelManifold& M, double x0, double t, double dt,
                                   std::uint64_t seed, const SimOptions& opts = {},
                                   std::uint64_t path_index = 0);

// exp(-2 (A(s) + B(s))) recomputed for the given fields.
double path_weight(const PathSample& sample, const Field& K_field, const Field& sigma_field, double s);

void write_path_csv(const PathSample& sample, std::ostream& os);

struct Estimate {
    std::string functional_id;
    double value = 0.0;
    double std_err = 0.0;
    std::size_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::size_t chart_escapes = 0;
    nlohmann::json manifold;
};

nlohmann::json to_json(const Estimate& e);
Estimate estimate_from_json(const nlohmann::json& j);

enum class Functional { J0_rhs, A1_rhs, G_rhs, XW };

std::string_view to_string(Functional f);
Functional parse_functional(std::string_view name);

struct FunctionalOptions {
    double alpha = 2.0;  // A1_rhs
    SimOptions sim;
};

// Monte-Carlo right-hand sides along reflected paths started at x:
//  J0_rhs = (n/2) E[u0(X_t) int l'^2 w] - E[Lu0(X_t) int (l^2)' w],  w = e^{-2 int (K dr + sigma dL)}
//  A1_rhs = (n alpha / 2) E[u0(X_t) int (K l/(alpha-1) + l')^2 e^{2 int K dr/(alpha-1)}]
//  G_rhs  = E[|grad u0|(X_t) e^{-int (K dr + sigma dL)}]
//  XW     = E[u0(X_t)]
Estimate estimate_functional(const ModelManifold& M, const InitialDatum& u0, double x, double t,
                             const Clock& clock, Functional functional, std::size_t n_paths,
                             double dt, std::uint64_t seed, const FunctionalOptions& opts = {});

// E[exp(p L_t)] accumulated in log-sum-exp form; exactly 1 for p = 0.
Estimate local_time_moment(const ModelManifold& M, double x0, double t, double p,
                           std::size_t n_paths, double dt, std::uint64_t seed,
                           const SimOptions& opts = {});

// E[L_t].
Estimate local_time_mean(const ModelManifold& M, double x0, double t, std::size_t n_paths,
                         double dt, std::uint64_t seed, const SimOptions& opts = {});

struct Cutoff {
    std::function<double(double)> f;
    std::function<double(double)> grad;
    std::function<double(double)> Lf;
    double center = 0.0;
    double R = 1.0;
};

// f = cos(pi rho / 2R), rho the distance to the center (the pole for radial families).
Cutoff cosine_cutoff(const ModelManifold& M, double center, double R);
// sup over the grid (inside the ball) of 6|grad f|^2 - f Lf.
double cutoff_Kf(const ModelManifold& M, const Cutoff& cutoff, const std::vector<double>& grid);

struct TimeChange {
    std::vector<double> s;          // sample times
    std::vector<double> T;          // T(s_k) = sum f^{-2}(x_j) dt
    std::vector<double> positions;  // copied from the sample up to exit
    double exit_time = 0.0;         // first sample time with f below threshold
    bool exited = false;
    bool truncated = false;         // f dropped below 1e-8 before the recorded exit

    // Inverse clock by linear interpolation; saturates at the last recorded time.
    double tau(double u) const;
    double position_at_tau(double u) const;
};

TimeChange time_change(const PathSample& sample, const Cutoff& cutoff);

struct TimeChangeCheck {
    std::vector<double> s;
    std::vector<double> mean;     // E[f^{-2}(X_{tau(s)})]
    std::vector<double> std_err;
    std::vector<double> bound;    // e^{K_f s}
    std::vector<bool> pass;       // mean <= bound + 3 SE
    std::vector<bool> tau_le_s;   // tau(s) <= s on every path
    std::size_t truncated_paths = 0;
};

TimeChangeCheck time_change_moment(const ModelManifold& M, double x0, const Cutoff& cutoff,
                                   double K_f, const std::vector<double>& s_grid,
                                   std::size_t n_paths, double dt, std::uint64_t seed);

}  // namespace liyau
