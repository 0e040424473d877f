#include "liyau/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "liyau/quadrature.hpp"
#include "liyau/special.hpp"

namespace liyau {
namespace {

const double kQ0 = (9.0 * kPi * kPi - 64.0) / (9.0 * kPi * kPi);

double neg_part(double K) { return K < 0.0 ? -K : 0.0; }

BoundForm out_of_domain(BoundForm f, std::string note) {
    f.domain_ok = false;
    f.note = std::move(note);
    return f;
}

// g(x) / (1 - e^{-x})^2 with g(x) = int_0^x (1 - e^{-u})^2 du.
double ne_ratio(double x) {
    if (std::fabs(x) < 0.5) {
        // g / x^2 = sum_{k>=3} (-1)^{k+1} (2^{k-1} - 2) x^{k-2} / k!
        double g = 0.0;
        double term = 0.5;  // x^{k-2} / k! for k = 2
        for (int k = 3; k <= 30; ++k) {
            term *= x / k;
            const double coeff = (std::ldexp(1.0, k - 1) - 2.0) * ((k % 2 == 1) ? 1.0 : -1.0);
            g += coeff * term;
        }
        const double d = x == 0.0 ? -1.0 : std::expm1(-x) / x;
        return g / (d * d);
    }
    if (x > 0.0) {
        const double d = -std::expm1(-x);
        const double g = x - 2.0 * d + 0.5 * (-std::expm1(-2.0 * x));
        return g / (d * d);
    }
    const double E = std::exp(x);
    const double one_minus = -std::expm1(x);
    return ((x - 1.5) * E * E + 2.0 * E - 0.5) / (one_minus * one_minus);
}

// (sinh x cosh x - x) / sinh^2 x.
double lx_ratio(double x) {
    if (x < 1e-3) return (2.0 / 3.0) * x * (1.0 - 2.0 * x * x / 15.0);
    if (x > 20.0) return 1.0 / std::tanh(x);
    const double s = std::sinh(x);
    return 1.0 / std::tanh(x) - x / (s * s);
}

BoundForm finish(BoundForm f) {
    if (f.domain_ok && !(std::isfinite(f.gamma) && std::isfinite(f.a) && std::isfinite(f.c)))
        throw std::invalid_argument("bound " + f.bound_id + " produced a non-finite coefficient");
    return f;
}

}  // namespace

nlohmann::json to_json(const BoundParams& p) {
    nlohmann::json j;
    j["n"] = p.n;
    j["K"] = p.K;
    if (p.K_prime) j["K_prime"] = *p.K_prime;
    if (p.alpha) j["alpha"] = *p.alpha;
    if (p.eps) j["eps"] = *p.eps;
    j["t"] = p.t;
    if (p.R) j["R"] = *p.R;
    j["K_region"] = p.K_region;
    j["has_drift"] = p.has_drift;
    if (p.X) j["X"] = *p.X;
    if (p.Y) j["Y"] = *p.Y;
    if (p.W) j["W"] = *p.W;
    return j;
}

const std::vector<BoundInfo>& bound_catalog() {
    static const std::vector<BoundInfo> catalog = {
        {"LY1", "X <= alpha Y + n K^- alpha^2/(4(alpha-1)) + n alpha^2/(2t)", true, false, false, true},
        {"LY3", "X <= (1 + 2K^- t/3) Y + n/(2t) + (n K^-/2)(1 + K^- t/3)", false, false, false, true},
        {"L-X-1", "X <= (1 + (sinh cosh - x)/sinh^2) Y + (n K^-/2)(1 + coth(K^- t))", false, false, false, true},
        {"Yau", "X <= Y + sqrt(2nK^-) sqrt(W + n/(2t) + 2nK^-) + n/(2t)", false, false, false, true},
        {"BQ6", "X <= Y + sqrt(nK^-) sqrt(X + n/(2t) + nK^-/4) + n/(2t)", false, false, false, true},
        {"BBG", "X <= Y - nK/2 + (n/2) Phi_t(1 - 4Y/(nK)), K > 0", false, false, false, false},
        {"J2", "two-sided bound on Y alone", false, false, false, false},
        {"A2", "X - alpha Y <= (n/2)[K(alpha-1)/2 + (1+alpha)pi^2/(2Kt^2) - 2 pi beta/t - 3pi^2/(8t)]", true, false,
         false, false},
        {"A2'", "X <= (n/2)[pi^2 K/(2 m^2) - K/2 - 3K pi^2/(8m)] e^{-2K'(t - 1/K)^+}, m = 1 ^ Kt", false, false,
         false, false},
        {"NE", "(1 + gamma) X <= Y + (n K alpha/(4(alpha-1))) coth(Kt/(2(alpha-1)))", true, false, false, false},
        {"A2B", "(1 + 2Kt/(3 alpha)) X <= Y + n alpha/(2t), alpha >= 1 + K^- t", true, false, false, false},
        {"A2BB", "(1 + 2Kt/3) X <= Y + n/(2t), K > 0", false, false, false, false},
        {"G3", "local: X <= a Y + n(1+eps)^2 beta/(2(1 - e^{-beta t}))", false, true, true, false},
        {"D4", "local: X <= alpha Y + (n alpha^2/2)[K_D/(alpha-1) + beta~/(1 - e^{-beta~ t})]", true, false, true,
         false},
    };
    return catalog;
}

const BoundInfo& bound_info(std::string_view id) {
    if (id == "A2p") id = "A2'";
    for (const auto& b : bound_catalog())
        if (b.id == id) return b;
    throw std::invalid_argument("unknown bound id: " + std::string(id));
}

double phi_bbg(double K, double t, double r) {
    if (!(K > 0.0) || !(t > 0.0)) throw std::invalid_argument("phi_bbg: K and t must be positive");
    if (!std::isfinite(r)) throw std::invalid_argument("phi_bbg: r must be finite");
    const double lower = -kPi * kPi / (K * K * t * t);
    if (r <= lower) throw std::domain_error("phi_bbg: r <= -pi^2/(K^2 t^2)");
    if (r > 0.0) return xcoth(K * t * std::sqrt(r)) / t;
    if (r < 0.0) return xcot(K * t * std::sqrt(-r)) / t;
    return 1.0 / t;
}

double beta_t_alpha(double K, double t, double alpha) {
    if (K == 0.0 || !(t > 0.0)) throw std::invalid_argument("beta_t_alpha: K != 0 and t > 0 required");
    const double q = (1.0 + alpha) / (K * t);
    if (!(q >= kQ0)) throw std::domain_error("beta_t_alpha: (1+alpha)/(Kt) below (9pi^2-64)/(9pi^2)");
    return std::sqrt(q - kQ0) - 8.0 / (3.0 * kPi);
}

std::pair<double, double> local_betas(double n, double K_region, double R, double eps, double alpha) {
    if (!(K_region >= 0.0) || !(R > 0.0) || !(eps > 0.0) || !(alpha > 1.0) || !(n >= 1.0))
        throw std::invalid_argument("local_betas: need n >= 1, K_region >= 0, R > 0, eps > 0, alpha > 1");
    const double root = (kPi / (2.0 * R)) * std::sqrt(K_region * (n - 1.0));
    const double beta = 2.0 * K_region + root +
                        (kPi * kPi / (4.0 * R * R)) * (4.0 + ((1.0 + eps) * (1.0 + eps) / eps + 2.0) * n);
    const double beta_tilde = (kPi * kPi / (2.0 * R * R)) * (2.0 + n + n * alpha * alpha / (2.0 * (alpha - 1.0))) +
                              root + 2.0 * K_region / (alpha - 1.0);
    return {beta, beta_tilde};
}

BoundForm eval_bound(std::string_view bound_id, const BoundParams& p) {
    const BoundInfo& info = bound_info(bound_id);
    BoundForm f;
    f.bound_id = info.id;
    const std::string& id = info.id;
    const double n = p.n;
    const double K = p.K;
    const double t = p.t;
    const double Km = neg_part(K);
    if (!(t > 0.0) || !(n >= 1.0)) throw std::invalid_argument("eval_bound: need t > 0 and n >= 1");

    if (info.classic_zero_drift && p.has_drift)
        return out_of_domain(f, "stated for L = Laplacian (Z = 0); skipped on a model with drift");
    if (info.needs_alpha && !p.alpha) return out_of_domain(f, "alpha required");
    if (info.needs_eps && !p.eps) return out_of_domain(f, "eps required");
    if (info.needs_R && !p.R) return out_of_domain(f, "R required");

    if (id == "LY1") {
        const double al = *p.alpha;
        if (!(al > 1.0)) return out_of_domain(f, "alpha > 1 required");
        f.a = al;
        f.c = n * Km * al * al / (4.0 * (al - 1.0)) + n * al * al / (2.0 * t);
    } else if (id == "LY3") {
        f.a = 1.0 + (2.0 / 3.0) * Km * t;
        f.c = n / (2.0 * t) + (n * Km / 2.0) * (1.0 + Km * t / 3.0);
    } else if (id == "L-X-1") {
        const double x = Km * t;
        f.a = 1.0 + lx_ratio(x);
        // (n K^-/2)(1 + coth(K^- t)) with the K^- -> 0 limit n/(2t).
        f.c = (n / 2.0) * (Km + xcoth(x) / t);
    } else if (id == "BQ6") {
        f.c = n / (2.0 * t);
        if (Km > 0.0) {
            if (!p.X) return out_of_domain(f, "X required (implicit bound)");
            f.c += std::sqrt(n * Km) * std::sqrt(*p.X + n / (2.0 * t) + n * Km / 4.0);
        }
    } else if (id == "Yau") {
        f.c = n / (2.0 * t);
        if (Km > 0.0) {
            if (!p.W) return out_of_domain(f, "W = |grad u|^2/u required (implicit bound)");
            f.c += std::sqrt(2.0 * n * Km) * std::sqrt(*p.W + n / (2.0 * t) + 2.0 * n * Km);
        }
    } else if (id == "BBG") {
        if (!(K > 0.0)) return out_of_domain(f, "K > 0 required");
        if (!p.Y) return out_of_domain(f, "Y required to locate lambda");
        const double lambda = 1.0 - 4.0 * *p.Y / (n * K);
        if (!(lambda > -kPi * kPi / (K * K * t * t)))
            return out_of_domain(f, "condition (4/(nK)) Y < 1 + pi^2/(K^2 t^2) violated");
        f.c = -n * K / 2.0 + (n / 2.0) * phi_bbg(K, t, lambda);
    } else if (id == "J2") {
        f.gamma = 0.0;
        if (K > 0.0) {
            const double m = std::min(K * t, kPi);
            f.a = -1.0;
            f.c = (n / (4.0 * t)) * (m + kPi * kPi / m);
            f.note = "upper bound on Y";
        } else {
            const double m = std::max(kPi, -K * t);
            f.a = 1.0;
            f.c = (n / (4.0 * t)) * (m + kPi * kPi / m);
            f.note = "lower bound on Y";
        }
    } else if (id == "A2") {
        const double al = *p.alpha;
        if (K == 0.0) return out_of_domain(f, "K != 0 required");
        if (!((1.0 + al) / (K * t) >= kQ0)) return out_of_domain(f, "(1+alpha)/(Kt) >= (9pi^2-64)/(9pi^2) required");
        const double beta = beta_t_alpha(K, t, al);
        f.a = al;
        f.c = (n / 2.0) * (K * (al - 1.0) / 2.0 + (1.0 + al) * kPi * kPi / (2.0 * K * t * t) -
                           2.0 * kPi * beta / t - 3.0 * kPi * kPi / (8.0 * t));
    } else if (id == "A2'") {
        if (!(K > 0.0)) return out_of_domain(f, "K > 0 required");
        const double Kp = p.K_prime.value_or(K);
        if (!(Kp >= K)) return out_of_domain(f, "K' >= K required");
        const double m = std::min(1.0, K * t);
        f.a = 0.0;
        f.c = (n / 2.0) * (kPi * kPi * K / (2.0 * m * m) - K / 2.0 - 3.0 * K * kPi * kPi / (8.0 * m)) *
              std::exp(-2.0 * Kp * std::max(0.0, t - 1.0 / K));
    } else if (id == "NE") {
        const double al = *p.alpha;
        if (!(al > 1.0)) return out_of_domain(f, "alpha > 1 required");
        const double x = K * t / (al - 1.0);
        f.gamma = 1.0 + (2.0 * (al - 1.0) / al) * ne_ratio(x);
        f.a = 1.0;
        f.c = (n * al / (2.0 * t)) * xcoth(x / 2.0);
    } else if (id == "A2B") {
        const double al = *p.alpha;
        if (!(al >= 1.0) || !(al >= 1.0 + Km * t)) return out_of_domain(f, "alpha >= max(1, 1 + K^- t) required");
        f.gamma = 1.0 + 2.0 * K * t / (3.0 * al);
        f.a = 1.0;
        f.c = n * al / (2.0 * t);
    } else if (id == "A2BB") {
        if (!(K > 0.0)) return out_of_domain(f, "K > 0 required");
        f.gamma = 1.0 + 2.0 * K * t / 3.0;
        f.a = 1.0;
        f.c = n / (2.0 * t);
    } else if (id == "G3") {
        const double eps = *p.eps;
        if (!(eps > 0.0 && eps < 1.0)) return out_of_domain(f, "eps in (0, 1) required");
        if (!(p.K_region >= 0.0)) return out_of_domain(f, "K_region >= 0 required");
        const double beta = local_betas(n, p.K_region, *p.R, eps, p.alpha.value_or(2.0)).first;
        const double KD = p.K_region;
        const double den = -std::expm1(-beta * t);
        const double I = integrate(
                             [&](double s) {
                                 return (std::exp(-2.0 * beta * s) - std::exp(-beta * (s + t))) *
                                        std::exp(2.0 * KD * s);
                             },
                             0.0, t)
                             .value;
        f.a = 2.0 * (1.0 + eps) * beta * I / (den * den);
        f.c = n * (1.0 + eps) * (1.0 + eps) * beta / (2.0 * den);
    } else if (id == "D4") {
        const double al = *p.alpha;
        if (!(al > 1.0)) return out_of_domain(f, "alpha > 1 required");
        if (!(p.K_region >= 0.0)) return out_of_domain(f, "K_region >= 0 required");
        const double bt = local_betas(n, p.K_region, *p.R, p.eps.value_or(0.5), al).second;
        f.a = al;
        f.c = (n * al * al / 2.0) * (p.K_region / (al - 1.0) + bt / (-std::expm1(-bt * t)));
    }
    return finish(f);
}

MarginResult check_inequality(std::string_view bound_id, const BoundParams& params, double X, double Y) {
    if (!(X >= 0.0)) throw std::invalid_argument("check_inequality: X must be >= 0");
    BoundParams p = params;
    p.X = X;
    p.Y = Y;
    MarginResult r;
    r.form = eval_bound(bound_id, p);
    if (!r.form.domain_ok) {
        r.in_domain = false;
        r.margin = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.margin = r.form.a * Y + r.form.c - r.form.gamma * X;
    return r;
}

nlohmann::json to_json(const BoundForm& f, const BoundParams& p) {
    return {{"bound_id", f.bound_id}, {"params", to_json(p)}, {"gamma", f.gamma}, {"a", f.a},
            {"c", f.c},               {"domain_ok", f.domain_ok}, {"note", f.note}};
}

}  // namespace liyau
