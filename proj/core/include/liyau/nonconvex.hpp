#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "liyau/bounds.hpp"
#include "liyau/clock.hpp"

namespace liyau {

struct NonconvexInputs {
    double k = 0.0;          // sectional curvature upper bound near the boundary
    double theta = 0.0;      // upper bound of the second fundamental form
    double sigma = -1.0;     // lower bound of the second fundamental form, < 0
    double r0 = 1.0;         // width of the boundary collar
    double d = 2.0;          // dimension entering the collar integrals
    double zrho_norm = 0.0;  // sup of |Z rho_boundary| on the collar
    double K = 0.0;          // curvature-dimension constant
    double n = 2.0;
};

struct NonconvexData {
    NonconvexInputs inputs;
    double h_r0 = 0.0;
    double delta = 0.0;
    double kappa = 1.0;
    double gamma = 0.0;
    double K_phi = 0.0;
    std::optional<double> alpha;
    std::optional<double> K_alpha_phi;

    double h(double s) const;
    double K_alpha_phi_at(double alpha) const;
};

double collar_profile(double k, double theta, double s);

NonconvexData nonconvex_constants(const NonconvexInputs& in, std::optional<double> alpha = std::nullopt);

enum class NonconvexMode { A1pp, A100p };

std::string_view to_string(NonconvexMode m);
NonconvexMode parse_nonconvex_mode(std::string_view name);

// Coefficients of  lhs * X <= a * Y + c  with lhs = 1/kappa^2 (A1'') or
// 1 + gamma_{t,alpha,phi} (A100'), using phi >= 1.
BoundForm nonconvex_bound_rhs(const NonconvexData& data, const Clock& clock, double t, double eps,
                              std::optional<double> alpha, NonconvexMode mode);

}  // namespace liyau
