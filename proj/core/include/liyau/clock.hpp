#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace liyau {

enum class ClockFamily { Linear, Trig, ExpIntegral, ExpLinear, Bbg, LocalExp };

std::string_view to_string(ClockFamily f);
ClockFamily parse_clock_family(std::string_view name);

struct ClockParams {
    double a = 0.0;       // trig
    double alpha = 2.0;   // exp-integral, exp-linear
    double K = 0.0;       // trig, exp-integral, exp-linear, bbg
    double lambda = 0.0;  // bbg
    double beta = 0.0;    // local-exp
};

// Deterministic test process on [0, t] with l(0) = 1 and l(t) = 0.
class Clock {
public:
    Clock(ClockFamily family, const ClockParams& params, double t);

    ClockFamily family() const { return family_; }
    const ClockParams& params() const { return params_; }
    double horizon() const { return t_; }

    double value(double s) const;
    double deriv(double s) const;
    // log l(s); -inf where l vanishes. Accurate where l itself underflows.
    double log_value(double s) const;

    nlohmann::json to_json() const;

private:
    ClockFamily family_;
    ClockParams params_;
    double t_;
    double norm_ = 0.0;  // family-specific normalization, fixed at construction
};

Clock make_clock(ClockFamily family, const ClockParams& params, double t);
Clock clock_from_json(const nlohmann::json& j, double t);

struct ClockIntegrals {
    double I_derivsq = 0.0;  // int l'^2 e^{-2Ks}
    double I_sqprime = 0.0;  // int (l^2)' e^{-2Ks}
    double I_sq = 0.0;       // int l^2 e^{-2Ks}
    std::optional<double> I_gamma;  // 2 K0 int l^2 e^{2 alpha K0 s/(alpha-1)}
    std::optional<double> I_A1;     // int (K l/(alpha-1) + l')^2 e^{2Ks/(alpha-1)}
    bool closed_form_checked = false;
};

struct ClockIntegralOptions {
    std::optional<double> alpha;  // enables I_gamma (with K0) and I_A1
    std::optional<double> K0;     // defaults to K
};

// Adaptive quadrature of the clock-weighted integrals on [0, t]. Families with
// a closed form are evaluated both ways; disagreement beyond 1e-9 throws.
ClockIntegrals clock_integrals(const Clock& clock, double K, double t,
                               const ClockIntegralOptions& opts = {});

}  // namespace liyau
