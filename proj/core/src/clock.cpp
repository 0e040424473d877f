#include "liyau/clock.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "liyau/errors.hpp"
#include "liyau/quadrature.hpp"
#include "liyau/special.hpp"

namespace liyau {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct FamilyName {
    ClockFamily family;
    const char* name;
};

constexpr FamilyName kNames[] = {
    {ClockFamily::Linear, "linear"},        {ClockFamily::Trig, "trig"},
    {ClockFamily::ExpIntegral, "exp-integral"}, {ClockFamily::ExpLinear, "exp-linear"},
    {ClockFamily::Bbg, "bbg"},              {ClockFamily::LocalExp, "local-exp"},
};

bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

}  // namespace

std::string_view to_string(ClockFamily f) {
    for (const auto& n : kNames)
        if (n.family == f) return n.name;
    return "unknown";
}

ClockFamily parse_clock_family(std::string_view name) {
    for (const auto& n : kNames)
        if (name == n.name) return n.family;
    throw std::invalid_argument("unknown clock family: " + std::string(name));
}

Clock::Clock(ClockFamily family, const ClockParams& params, double t)
    : family_(family), params_(params), t_(t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("clock horizon must be positive");
    switch (family) {
        case ClockFamily::Linear:
        case ClockFamily::Trig:
            break;
        case ClockFamily::ExpIntegral:
            if (!(params.alpha > 1.0)) throw std::invalid_argument("exp-integral clock needs alpha > 1");
            norm_ = log_int_exp(params.K / (params.alpha - 1.0), t);
            break;
        case ClockFamily::ExpLinear:
            if (!(params.alpha > 1.0)) throw std::invalid_argument("exp-linear clock needs alpha > 1");
            break;
        case ClockFamily::Bbg: {
            if (!(params.K > 0.0)) throw std::invalid_argument("bbg clock needs K > 0");
            const double lower = -kPi * kPi / (params.K * params.K * t * t);
            if (!(params.lambda > lower))
                throw std::invalid_argument("bbg clock needs lambda > -pi^2/(K^2 t^2)");
            norm_ = params.K * std::sqrt(std::fabs(params.lambda));
            break;
        }
        case ClockFamily::LocalExp:
            if (!std::isfinite(params.beta)) throw std::invalid_argument("local-exp clock needs finite beta");
            break;
    }
    if (std::fabs(value(0.0) - 1.0) > 1e-12 || std::fabs(value(t)) > 1e-12)
        throw std::invalid_argument("clock fails l(0) = 1, l(t) = 0 for " + std::string(to_string(family)));
}

double Clock::value(double s) const {
    const double t = t_;
    const double r = t - s;
    switch (family_) {
        case ClockFamily::Linear:
            return r / t;
        case ClockFamily::Trig:
            return std::exp(params_.K * s) *
                   (std::sin(kPi * r / (2.0 * t)) + params_.a * std::sin(kPi * r / t));
        case ClockFamily::ExpIntegral:
        case ClockFamily::Bbg: {
            const double lv = log_value(s);
            if (lv == kNegInf) return 0.0;
            if (family_ == ClockFamily::Bbg && params_.lambda < 0.0) {
                const double b = norm_;
                return std::sin(b * r) / std::sin(b * t) * std::exp(params_.K * s);
            }
            return std::exp(lv);
        }
        case ClockFamily::ExpLinear:
            return std::exp(-params_.K * s / (params_.alpha - 1.0)) * r / t;
        case ClockFamily::LocalExp: {
            const double b = params_.beta;
            if (b == 0.0) return r / t;
            if (b > 0.0) return std::exp(-b * s) * std::expm1(-b * r) / std::expm1(-b * t);
            return std::expm1(b * r) / std::expm1(b * t);
        }
    }
    return 0.0;
}

double Clock::deriv(double s) const {
    const double t = t_;
    const double r = t - s;
    switch (family_) {
        case ClockFamily::Linear:
            return -1.0 / t;
        case ClockFamily::Trig: {
            const double K = params_.K;
            const double a = params_.a;
            const double c1 = std::sin(kPi * r / (2.0 * t));
            const double c2 = std::sin(kPi * r / t);
            const double d1 = -kPi / (2.0 * t) * std::cos(kPi * r / (2.0 * t));
            const double d2 = -kPi / t * std::cos(kPi * r / t);
            return std::exp(K * s) * (K * (c1 + a * c2) + d1 + a * d2);
        }
        case ClockFamily::ExpIntegral: {
            const double k = params_.K / (params_.alpha - 1.0);
            return -std::exp(k * r - norm_);
        }
        case ClockFamily::ExpLinear: {
            const double k = params_.K / (params_.alpha - 1.0);
            return std::exp(-k * s) * (-k * r / t - 1.0 / t);
        }
        case ClockFamily::Bbg: {
            const double K = params_.K;
            const double lam = params_.lambda;
            double h = 0.0;
            double dh = 0.0;
            if (lam > 0.0) {
                const double a = norm_;
                const double den = -std::expm1(-2.0 * a * t);
                h = std::exp(-a * s) * (-std::expm1(-2.0 * a * r)) / den;
                dh = -a * std::exp(-a * s) * (1.0 + std::exp(-2.0 * a * r)) / den;
            } else if (lam < 0.0) {
                const double b = norm_;
                h = std::sin(b * r) / std::sin(b * t);
                dh = -b * std::cos(b * r) / std::sin(b * t);
            } else {
                h = r / t;
                dh = -1.0 / t;
            }
            return (dh + K * h) * std::exp(K * s);
        }
        case ClockFamily::LocalExp: {
            const double b = params_.beta;
            if (b == 0.0) return -1.0 / t;
            if (b > 0.0) return -b * std::exp(-b * s) / (-std::expm1(-b * t));
            return -b * std::exp(b * r) / std::expm1(b * t);
        }
    }
    return 0.0;
}

double Clock::log_value(double s) const {
    const double t = t_;
    const double r = t - s;
    if (r <= 0.0) return kNegInf;
    switch (family_) {
        case ClockFamily::ExpIntegral:
            return log_int_exp(params_.K / (params_.alpha - 1.0), r) - norm_;
        case ClockFamily::ExpLinear:
            return -params_.K * s / (params_.alpha - 1.0) + std::log(r / t);
        case ClockFamily::Bbg: {
            const double K = params_.K;
            const double lam = params_.lambda;
            if (lam > 0.0) {
                const double a = norm_;
                return -a * s + std::log(-std::expm1(-2.0 * a * r)) - std::log(-std::expm1(-2.0 * a * t)) +
                       K * s;
            }
            if (lam < 0.0) {
                const double b = norm_;
                return std::log(std::sin(b * r) / std::sin(b * t)) + K * s;
            }
            return std::log(r / t) + K * s;
        }
        default: {
            const double v = value(s);
            return v > 0.0 ? std::log(v) : kNegInf;
        }
    }
}

nlohmann::json Clock::to_json() const {
    nlohmann::json j;
    j["family"] = std::string(to_string(family_));
    j["t"] = t_;
    switch (family_) {
        case ClockFamily::Linear:
            break;
        case ClockFamily::Trig:
            j["a"] = params_.a;
            j["K"] = params_.K;
            break;
        case ClockFamily::ExpIntegral:
        case ClockFamily::ExpLinear:
            j["alpha"] = params_.alpha;
            j["K"] = params_.K;
            break;
        case ClockFamily::Bbg:
            j["lambda"] = params_.lambda;
            j["K"] = params_.K;
            break;
        case ClockFamily::LocalExp:
            j["beta"] = params_.beta;
            break;
    }
    return j;
}

Clock make_clock(ClockFamily family, const ClockParams& params, double t) {
    return Clock(family, params, t);
}

Clock clock_from_json(const nlohmann::json& j, double t) {
    ClockParams p;
    p.a = j.value("a", 0.0);
    p.alpha = j.value("alpha", 2.0);
    p.K = j.value("K", 0.0);
    p.lambda = j.value("lambda", 0.0);
    p.beta = j.value("beta", 0.0);
    return Clock(parse_clock_family(j.value("family", std::string("linear"))), p, t);
}

ClockIntegrals clock_integrals(const Clock& clock, double K, double t, const ClockIntegralOptions& opts) {
    if (std::fabs(t - clock.horizon()) > 1e-12 * std::max(1.0, t))
        throw std::invalid_argument("clock_integrals: horizon mismatch");
    const QuadOptions q;
    auto quad = [&](auto&& f) { return integrate(f, 0.0, t, q).value; };
    // l^2 e^{c s} in log space so that steep clocks neither overflow nor underflow.
    auto sq_weight = [&](double s, double c) {
        const double lv = clock.log_value(s);
        return lv == kNegInf ? 0.0 : std::exp(2.0 * lv + c * s);
    };

    ClockIntegrals out;
    out.I_derivsq = quad([&](double s) {
        const double d = clock.deriv(s);
        return d * d * std::exp(-2.0 * K * s);
    });
    out.I_sqprime = quad([&](double s) {
        return 2.0 * clock.value(s) * clock.deriv(s) * std::exp(-2.0 * K * s);
    });
    out.I_sq = quad([&](double s) { return sq_weight(s, -2.0 * K); });

    if (opts.alpha) {
        const double alpha = *opts.alpha;
        if (!(alpha > 1.0)) throw std::invalid_argument("clock_integrals: alpha must be > 1");
        const double K0 = opts.K0.value_or(K);
        out.I_gamma = 2.0 * K0 * quad([&](double s) { return sq_weight(s, 2.0 * alpha * K0 / (alpha - 1.0)); });
        const double k = K / (alpha - 1.0);
        out.I_A1 = quad([&](double s) {
            const double v = k * clock.value(s) + clock.deriv(s);
            return v * v * std::exp(2.0 * k * s);
        });
    }

    // Integration by parts: int (l^2)' e^{-2Ks} = -1 + 2K int l^2 e^{-2Ks}.
    if (!close(out.I_sqprime, -1.0 + 2.0 * K * out.I_sq, 1e-9))
        throw NumericalError("clock_integrals: integration-by-parts identity violated");

    auto reconcile = [&](double& quad_value, double closed, const char* what) {
        if (!close(quad_value, closed, 1e-9))
            throw NumericalError(std::string("clock_integrals: closed form disagrees with quadrature for ") +
                                 what + " (" + std::to_string(closed) + " vs " +
                                 std::to_string(quad_value) + ")");
        quad_value = closed;
        out.closed_form_checked = true;
    };

    const ClockParams& p = clock.params();
    switch (clock.family()) {
        case ClockFamily::Linear:
            reconcile(out.I_derivsq, std::exp(log_int_exp(-2.0 * K, t)) / (t * t), "I_derivsq");
            break;
        case ClockFamily::Trig:
            if (p.K == K) {
                const double a = p.a;
                const double Isq = t * (1.0 + a * a) / 2.0 + 8.0 * t * a / (3.0 * kPi);
                const double Id = (K / 2.0) * (K * t * (1.0 + a * a) + 16.0 * K * t * a / (3.0 * kPi)) - K +
                                  kPi * kPi * a * a / (2.0 * t) + kPi * kPi / (8.0 * t) +
                                  2.0 * kPi * a / (3.0 * t);
                reconcile(out.I_sq, Isq, "I_sq");
                reconcile(out.I_derivsq, Id, "I_derivsq");
                reconcile(out.I_sqprime, -1.0 + 2.0 * K * Isq, "I_sqprime");
            }
            break;
        case ClockFamily::ExpLinear:
            if (opts.alpha && p.K == K && p.alpha == *opts.alpha) {
                double v = *out.I_A1;
                reconcile(v, 1.0 / t, "I_A1");
                out.I_A1 = v;
            }
            break;
        case ClockFamily::ExpIntegral:
            if (opts.alpha && p.K == K && p.alpha == *opts.alpha) {
                double v = *out.I_A1;
                reconcile(v, xcoth(K * t / (2.0 * (*opts.alpha - 1.0))) / t, "I_A1");
                out.I_A1 = v;
            }
            break;
        case ClockFamily::Bbg:
        case ClockFamily::LocalExp:
            break;
    }
    return out;
}

}  // namespace liyau
