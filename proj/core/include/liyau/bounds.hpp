#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "liyau/clock.hpp"

namespace liyau {

// Normal form gamma * X <= a * Y + c, X = |grad u|^2/u^2, Y = Lu/u.
struct BoundForm {
    std::string bound_id;
    double gamma = 1.0;
    double a = 1.0;
    double c = 0.0;
    bool domain_ok = true;
    std::string note;
};

struct BoundParams {
    double n = 1.0;
    double K = 0.0;
    std::optional<double> K_prime;
    std::optional<double> alpha;
    std::optional<double> eps;
    double t = 1.0;
    std::optional<double> R;
    double K_region = 0.0;
    bool has_drift = false;
    // Pointwise quantities needed by the implicit bounds (BBG, Yau, BQ6).
    std::optional<double> X;
    std::optional<double> Y;
    std::optional<double> W;
};

nlohmann::json to_json(const BoundParams& p);

struct BoundInfo {
    std::string id;
    std::string description;
    bool needs_alpha = false;
    bool needs_eps = false;
    bool needs_R = false;
    bool classic_zero_drift = false;  // stated for L = Laplacian only
};

const std::vector<BoundInfo>& bound_catalog();
const BoundInfo& bound_info(std::string_view id);

double phi_bbg(double K, double t, double r);

double beta_t_alpha(double K, double t, double alpha);

// (beta_{eps,R}, beta~_{alpha,R}) from the cutoff cos(pi rho / 2R).
std::pair<double, double> local_betas(double n, double K_region, double R, double eps, double alpha);

BoundForm eval_bound(std::string_view bound_id, const BoundParams& params);

struct MarginResult {
    BoundForm form;
    double margin = 0.0;
    bool in_domain = true;
};

// margin = a*Y + c - gamma*X, or for the implicit bounds the stated right side
// minus X. Out-of-domain results carry in_domain = false and no margin.
MarginResult check_inequality(std::string_view bound_id, const BoundParams& params, double X, double Y);

nlohmann::json to_json(const BoundForm& f, const BoundParams& p);

}  // namespace liyau
