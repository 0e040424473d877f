#include "liyau/nonconvex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "liyau/quadrature.hpp"

namespace liyau {

double collar_profile(double k, double theta, double s) {
    if (k < 0.0) throw std::invalid_argument("collar_profile: k must be >= 0");
    if (k == 0.0) return 1.0 - theta * s;
    const double r = std::sqrt(k);
    return std::cos(r * s) - (theta / r) * std::sin(r * s);
}

double NonconvexData::h(double s) const { return collar_profile(inputs.k, inputs.theta, s); }

double NonconvexData::K_alpha_phi_at(double a) const {
    if (!(a > kappa * kappa)) throw std::invalid_argument("K_alpha_phi: alpha > kappa^2 required");
    const double Km = inputs.K < 0.0 ? -inputs.K : 0.0;
    return -2.0 * kappa * kappa * (delta - inputs.sigma * inputs.zrho_norm + Km) / (a - kappa * kappa);
}

NonconvexData nonconvex_constants(const NonconvexInputs& in, std::optional<double> alpha) {
    if (!(in.sigma < 0.0)) throw std::invalid_argument("nonconvex_constants: sigma < 0 required");
    if (!(in.k >= 0.0) || !(in.theta >= 0.0) || !(in.r0 > 0.0) || !(in.zrho_norm >= 0.0) || !(in.d >= 1.0))
        throw std::invalid_argument("nonconvex_constants: need k, theta, zrho_norm >= 0, r0 > 0, d >= 1");

    NonconvexData out;
    out.inputs = in;
    const double r0 = in.r0;
    const double d = in.d;
    out.h_r0 = out.h(r0);
    const double hr0 = out.h_r0;
    auto gap = [&](double s) { return out.h(s) - hr0; };

    for (int i = 0; i < 1000; ++i) {
        const double s = r0 * i / 1000.0;
        if (!(gap(s) > 0.0))
            throw std::invalid_argument("nonconvex_constants: h_s - h_{r0} must be positive on [0, r0)");
    }

    const double J = integrate([&](double s) { return std::pow(gap(s), d - 1.0); }, 0.0, r0).value;
    const double top = std::pow(1.0 - hr0, d - 1.0);
    out.delta = -in.sigma * top / J;

    QuadOptions inner_opts;
    inner_opts.abs_tol = 1e-13;
    const double outer = integrate(
                             [&](double s) {
                                 const double inner =
                                     integrate([&](double r) { return std::pow(gap(r), d - 1.0); }, s, r0,
                                               inner_opts)
                                         .value;
                                 return std::pow(gap(s), 1.0 - d) * inner;
                             },
                             0.0, r0)
                             .value;
    out.kappa = 1.0 + out.delta * outer;
    out.gamma = out.delta * std::pow(1.0 - hr0, 1.0 - d) * J;
    out.K_phi = 2.0 * (in.K - out.delta + in.sigma * in.zrho_norm);
    if (alpha) {
        out.alpha = *alpha;
        out.K_alpha_phi = out.K_alpha_phi_at(*alpha);
    }
    return out;
}

std::string_view to_string(NonconvexMode m) { return m == NonconvexMode::A1pp ? "A1''" : "A100'"; }

NonconvexMode parse_nonconvex_mode(std::string_view name) {
    if (name == "A1''" || name == "A1pp") return NonconvexMode::A1pp;
    if (name == "A100'" || name == "A100p") return NonconvexMode::A100p;
    throw std::invalid_argument("unknown nonconvex mode: " + std::string(name));
}

BoundForm nonconvex_bound_rhs(const NonconvexData& data, const Clock& clock, double t, double eps,
                              std::optional<double> alpha, NonconvexMode mode) {
    if (!(eps > 0.0)) throw std::invalid_argument("nonconvex_bound_rhs: eps > 0 required");
    if (std::fabs(clock.horizon() - t) > 1e-12 * std::max(1.0, t))
        throw std::invalid_argument("nonconvex_bound_rhs: clock horizon mismatch");
    const double n = data.inputs.n;
    const double kappa2 = data.kappa * data.kappa;
    auto quad = [&](auto&& f) { return integrate(f, 0.0, t).value; };

    BoundForm f;
    f.bound_id = std::string(to_string(mode));
    if (mode == NonconvexMode::A1pp) {
        const double rate = eps - data.K_phi;
        f.gamma = 1.0 / kappa2;
        f.a = 2.0 * quad([&](double s) {
            return clock.value(s) * std::fabs(clock.deriv(s)) * std::exp(rate * s);
        });
        const double I = quad([&](double s) {
            const double d = clock.deriv(s);
            return d * d * std::exp(rate * s);
        });
        f.c = (n / 2.0 + data.gamma * data.gamma / eps) * I;
        return f;
    }

    if (!alpha) throw std::invalid_argument("nonconvex_bound_rhs: A100' needs alpha");
    const double a = *alpha;
    if (!(a > kappa2)) {
        f.domain_ok = false;
        f.note = "alpha > kappa^2 required";
        return f;
    }
    const double Kap = data.K_alpha_phi_at(a);
    const double g = 2.0 * (a / kappa2 - 1.0) * quad([&](double s) {
        return std::fabs(clock.value(s) * clock.deriv(s)) * std::exp((Kap + data.K_phi - eps) * s);
    });
    const double b = Kap - eps;
    const double I = quad([&](double s) {
        const double v = b * clock.value(s) + 2.0 * clock.deriv(s);
        return std::exp(b * s) * v * v;
    });
    f.gamma = 1.0 + g;
    f.a = a;
    f.c = (n * a * a / 8.0 + a * a * data.gamma * data.gamma / (4.0 * eps * (a - kappa2))) * I;
    return f;
}

}  // namespace liyau
