#include "liyau/heatflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <gsl/gsl_sf_gegenbauer.h>

#include "liyau/errors.hpp"
#include "liyau/quadrature.hpp"
#include "liyau/special.hpp"

namespace liyau {
namespace {

constexpr double kSphereDelta = 1e-3;
constexpr double kSpectralTail = 1e-14;
constexpr int kMinModes = 32;
constexpr int kMaxProjectedModes = 1024;
constexpr int kProjectionSamples = 4096;

// Generator value of a function at a radial pole, where b(r) u'(r) -> (m-1) u''(0).
bool at_pole(const ModelManifold& M, double x) {
    if (!M.is_radial() || M.m < 2) return false;
    const CoordinateDomain d = M.solver_domain();
    if (d.lo_is_pole && std::fabs(x - d.lo) < 1e-12) return true;
    if (d.hi_is_pole && std::fabs(x - d.hi) < 1e-12) return true;
    return false;
}

Jet make_jet(const ModelManifold& M, double x, double v, double g, double g2) {
    Jet j{v, g, 0.0};
    j.L = at_pole(M, x) ? M.m * g2 : g2 + M.coefficient(x) * g;
    return j;
}

double gegenbauer(int k, double nu, double z) {
    if (k < 0) return 0.0;
    return gsl_sf_gegenpoly_n(k, nu, z);
}

Jet cosine_jet(const ModelManifold& M, double w, double x) {
    const double c = std::cos(w * x);
    const double s = std::sin(w * x);
    return make_jet(M, x, c, -w * s, -w * w * c);
}

double gauss1(double d, double t) {
    return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

void require_no_drift(const ModelManifold& M, const char* what) {
    if (M.drift.active())
        throw std::invalid_argument(std::string(what) + " is not available with a drift");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string_view to_string(Scheme s) {
    return s == Scheme::Spectral ? "spectral" : "crank-nicolson-fd";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "spectral") return Scheme::Spectral;
    if (name == "crank-nicolson-fd" || name == "fd" || name == "cn") return Scheme::CrankNicolsonFD;
    throw std::invalid_argument("unknown scheme: " + std::string(name));
}

Jet mode_jet(const ModelManifold& M, int k, double x) {
    if (k < 0) throw std::invalid_argument("mode index must be >= 0");
    if (k == 0) return {1.0, 0.0, 0.0};
    switch (M.family) {
        case Family::Circle:
        case Family::EuclideanLine:
        case Family::HalfLineNeumann:
            return cosine_jet(M, k, x);
        case Family::IntervalNeumann:
            return cosine_jet(M, k * kPi / M.length, x);
        case Family::HyperbolicRadial:
            return cosine_jet(M, k * kPi / M.length, x);
        case Family::SphereRadial: {
            if (M.m == 1) return cosine_jet(M, k, x);
            const double nu = (M.m - 1) / 2.0;
            const double norm = gegenbauer(k, nu, 1.0);
            const double z = std::cos(x);
            const double s = std::sin(x);
            const double v = gegenbauer(k, nu, z) / norm;
            const double g = -s * 2.0 * nu * gegenbauer(k - 1, nu + 1.0, z) / norm;
            const double lambda = k * (k + M.m - 1.0);
            return {v, g, -lambda * v};
        }
        case Family::EuclideanRadial: {
            if (M.m == 1) return cosine_jet(M, k, x);
            const double nu = (M.m - 2) / 2.0;
            const double z = k * x;
            double v = 1.0;
            double g = 0.0;
            if (z < 1e-8) {
                g = -k * z / (2.0 * (nu + 1.0));
            } else {
                const double scale = std::tgamma(nu + 1.0) * std::pow(2.0 / z, nu);
                v = scale * std::cyl_bessel_j(nu, z);
                g = -k * scale * std::cyl_bessel_j(nu + 1.0, z);
            }
            return {v, g, -static_cast<double>(k) * k * v};
        }
    }
    throw std::logic_error("unhandled family");
}

std::optional<double> mode_eigenvalue(const ModelManifold& M, int k) {
    if (M.drift.active() && k > 0) return std::nullopt;
    const double kk = k;
    switch (M.family) {
        case Family::Circle:
        case Family::EuclideanLine:
        case Family::HalfLineNeumann:
        case Family::EuclideanRadial:
            return kk * kk;
        case Family::IntervalNeumann: {
            const double w = kk * kPi / M.length;
            return w * w;
        }
        case Family::SphereRadial:
            return M.m == 1 ? kk * kk : kk * (kk + M.m - 1.0);
        case Family::HyperbolicRadial:
            if (k == 0) return 0.0;
            return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// InitialDatum

InitialDatum InitialDatum::constant(double c) {
    InitialDatum d;
    d.kind_ = Kind::Constant;
    d.base_ = c;
    return d;
}

InitialDatum InitialDatum::modes(double base, std::vector<ModeTerm> terms) {
    InitialDatum d;
    d.kind_ = Kind::Modes;
    d.base_ = base;
    for (const auto& t : terms)
        if (t.k < 0) throw std::invalid_argument("mode index must be >= 0");
    d.terms_ = std::move(terms);
    return d;
}

InitialDatum InitialDatum::gaussian(double base, double amplitude, double spread) {
    if (!(spread > 0.0)) throw std::invalid_argument("gaussian spread must be positive");
    InitialDatum d;
    d.kind_ = Kind::Gaussian;
    d.base_ = base;
    d.amplitude_ = amplitude;
    d.spread_ = spread;
    return d;
}

InitialDatum InitialDatum::custom(std::string id, std::function<double(double)> u0,
                                  std::function<double(double)> du0,
                                  std::function<double(double)> d2u0) {
    if (!u0) throw std::invalid_argument("custom datum needs a callable");
    InitialDatum d;
    d.kind_ = Kind::Custom;
    d.custom_id_ = std::move(id);
    d.f_ = std::move(u0);
    d.df_ = std::move(du0);
    d.d2f_ = std::move(d2u0);
    return d;
}

InitialDatum InitialDatum::fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    if (cos_coeffs.empty()) throw std::invalid_argument("fourier datum needs coefficients");
    InitialDatum d;
    d.kind_ = Kind::Fourier;
    d.cos_ = std::move(cos_coeffs);
    d.sin_ = std::move(sin_coeffs);
    d.base_ = d.cos_[0];
    return d;
}

InitialDatum InitialDatum::nodal(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size() || grid.size() < 2)
        throw std::invalid_argument("nodal datum: grid and values must match");
    InitialDatum d;
    d.kind_ = Kind::Nodal;
    d.cos_ = std::move(grid);
    d.sin_ = std::move(values);
    return d;
}

std::string InitialDatum::id() const {
    switch (kind_) {
        case Kind::Constant: return "constant";
        case Kind::Modes: return "modes";
        case Kind::Gaussian: return "gaussian";
        case Kind::Custom: return "custom:" + custom_id_;
        case Kind::Fourier: return "fourier";
        case Kind::Nodal: return "nodal";
    }
    return "unknown";
}

nlohmann::json InitialDatum::params() const {
    nlohmann::json j;
    j["kind"] = id();
    switch (kind_) {
        case Kind::Constant:
            j["value"] = base_;
            break;
        case Kind::Modes: {
            j["base"] = base_;
            auto arr = nlohmann::json::array();
            for (const auto& t : terms_) arr.push_back({{"k", t.k}, {"amplitude", t.amplitude}});
            j["modes"] = arr;
            break;
        }
        case Kind::Gaussian:
            j["base"] = base_;
            j["amplitude"] = amplitude_;
            j["spread"] = spread_;
            break;
        case Kind::Fourier:
            j["cos"] = cos_;
            j["sin"] = sin_;
            break;
        case Kind::Nodal:
            j["points"] = cos_.size();
            break;
        case Kind::Custom:
            break;
    }
    return j;
}

Jet InitialDatum::evaluate(const ModelManifold& M, double x) const {
    switch (kind_) {
        case Kind::Constant:
            return {base_, 0.0, 0.0};
        case Kind::Modes: {
            Jet j{base_, 0.0, 0.0};
            for (const auto& t : terms_) {
                const Jet p = mode_jet(M, t.k, x);
                j.value += t.amplitude * p.value;
                j.grad += t.amplitude * p.grad;
                j.L += t.amplitude * p.L;
            }
            return j;
        }
        case Kind::Gaussian: {
            if (!(M.family == Family::EuclideanLine || M.family == Family::EuclideanRadial ||
                  M.family == Family::HalfLineNeumann))
                throw std::invalid_argument("gaussian datum needs a Euclidean family");
            const double s = spread_;
            const double e = amplitude_ * std::exp(-x * x / (4.0 * s));
            const double g = -x / (2.0 * s) * e;
            const double g2 = (x * x / (4.0 * s * s) - 1.0 / (2.0 * s)) * e;
            Jet j{base_ + e, g, 0.0};
            j.L = M.family == Family::EuclideanRadial
                      ? (x * x / (4.0 * s * s) - M.m / (2.0 * s)) * e
                      : g2 + M.drift.c * g;
            return j;
        }
        case Kind::Fourier: {
            Jet j{0.0, 0.0, 0.0};
            for (std::size_t k = 0; k < cos_.size(); ++k) {
                if (cos_[k] == 0.0) continue;
                const Jet p = mode_jet(M, static_cast<int>(k), x);
                j.value += cos_[k] * p.value;
                j.grad += cos_[k] * p.grad;
                j.L += cos_[k] * p.L;
            }
            for (std::size_t k = 1; k < sin_.size(); ++k) {
                if (sin_[k] == 0.0) continue;
                const double w = static_cast<double>(k);
                j.value += sin_[k] * std::sin(w * x);
                j.grad += sin_[k] * w * std::cos(w * x);
                j.L += -sin_[k] * w * w * std::sin(w * x);
            }
            return j;
        }
        case Kind::Custom: {
            const double h = 1e-4;
            const double v = f_(x);
            const double g = df_ ? df_(x) : (f_(x + h) - f_(x - h)) / (2.0 * h);
            const double g2 = d2f_ ? d2f_(x) : (f_(x + h) - 2.0 * v + f_(x - h)) / (h * h);
            return make_jet(M, x, v, g, g2);
        }
        case Kind::Nodal: {
            const auto& g = cos_;
            const auto& v = sin_;
            auto it = std::upper_bound(g.begin(), g.end(), x);
            std::size_t i = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
            i = std::min(i, g.size() - 2);
            const double h = g[i + 1] - g[i];
            const double w = (x - g[i]) / h;
            const double val = (1.0 - w) * v[i] + w * v[i + 1];
            return {val, (v[i + 1] - v[i]) / h, std::numeric_limits<double>::quiet_NaN()};
        }
    }
    throw std::logic_error("unhandled datum kind");
}

double InitialDatum::lower_bound(const ModelManifold& M) const {
    switch (kind_) {
        case Kind::Constant: return base_;
        case Kind::Modes: {
            double lb = base_;
            for (const auto& t : terms_) lb -= t.k == 0 ? -t.amplitude : std::fabs(t.amplitude);
            return lb;
        }
        case Kind::Gaussian: return base_ + std::min(0.0, amplitude_);
        case Kind::Fourier: {
            double lb = cos_[0];
            for (std::size_t k = 1; k < cos_.size(); ++k) lb -= std::fabs(cos_[k]);
            for (std::size_t k = 1; k < sin_.size(); ++k) lb -= std::fabs(sin_[k]);
            return lb;
        }
        case Kind::Nodal: return *std::min_element(sin_.begin(), sin_.end());
        case Kind::Custom: {
            const CoordinateDomain d = M.solver_domain();
            double lb = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 4000; ++i) lb = std::min(lb, f_(d.lo + d.length() * i / 4000.0));
            return lb;
        }
    }
    return 0.0;
}

double InitialDatum::upper_bound(const ModelManifold& M) const {
    switch (kind_) {
        case Kind::Constant: return base_;
        case Kind::Modes: {
            double ub = base_;
            for (const auto& t : terms_) ub += t.k == 0 ? t.amplitude : std::fabs(t.amplitude);
            return ub;
        }
        case Kind::Gaussian: return base_ + std::max(0.0, amplitude_);
        case Kind::Fourier: {
            double ub = cos_[0];
            for (std::size_t k = 1; k < cos_.size(); ++k) ub += std::fabs(cos_[k]);
            for (std::size_t k = 1; k < sin_.size(); ++k) ub += std::fabs(sin_[k]);
            return ub;
        }
        case Kind::Nodal: return *std::max_element(sin_.begin(), sin_.end());
        case Kind::Custom: {
            const CoordinateDomain d = M.solver_domain();
            double ub = -std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 4000; ++i) ub = std::max(ub, f_(d.lo + d.length() * i / 4000.0));
            return ub;
        }
    }
    return 0.0;
}

InitialDatum datum_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return InitialDatum::constant(j.at("value").get<double>());
    if (kind == "modes") {
        std::vector<ModeTerm> terms;
        for (const auto& e : j.at("modes")) {
            if (e.is_array())
                terms.push_back({e.at(0).get<int>(), e.at(1).get<double>()});
            else
                terms.push_back({e.at("k").get<int>(), e.at("amplitude").get<double>()});
        }
        return InitialDatum::modes(j.value("base", 1.0), std::move(terms));
    }
    if (kind == "gaussian")
        return InitialDatum::gaussian(j.value("base", 0.0), j.value("amplitude", 1.0),
                                      j.value("spread", 1.0));
    if (kind == "fourier")
        return InitialDatum::fourier(j.at("cos").get<std::vector<double>>(),
                                     j.value("sin", std::vector<double>{}));
    throw std::invalid_argument("unknown initial datum kind: " + kind);
}

// ---------------------------------------------------------------------------
// Kernels

double circle_kernel_wrapped(double t, double x, double y) {
    double d = std::remainder(x - y, 2.0 * kPi);
    CompensatedSum sum;
    sum.add(gauss1(d, t));
    for (int k = 1;; ++k) {
        const double a = gauss1(d + 2.0 * kPi * k, t);
        const double b = gauss1(d - 2.0 * kPi * k, t);
        sum.add(a);
        sum.add(b);
        if (a + b < 1e-300 || (a + b) < 1e-20 * sum.value()) break;
    }
    return sum.value();
}

double circle_kernel_spectral(double t, double x, double y) {
    const double d = x - y;
    CompensatedSum sum;
    sum.add(1.0);
    for (int k = 1;; ++k) {
        const double e = std::exp(-static_cast<double>(k) * k * t);
        sum.add(2.0 * e * std::cos(k * d));
        if (e < 1e-20) break;
    }
    return sum.value() / (2.0 * kPi);
}

namespace {

double interval_kernel(double t, double x, double y, double ell) {
    if (t <= ell * ell) {
        CompensatedSum sum;
        sum.add(gauss1(x - y, t));
        sum.add(gauss1(x + y, t));
        for (int k = 1;; ++k) {
            double add = 0.0;
            for (int sgn : {1, -1}) {
                const double shift = 2.0 * ell * k * sgn;
                add += gauss1(x - y + shift, t) + gauss1(x + y + shift, t);
            }
            sum.add(add);
            if (add < 1e-300 || add < 1e-20 * sum.value()) break;
        }
        return sum.value();
    }
    CompensatedSum sum;
    sum.add(1.0);
    for (int k = 1;; ++k) {
        const double w = k * kPi / ell;
        const double e = std::exp(-w * w * t);
        sum.add(2.0 * e * std::cos(w * x) * std::cos(w * y));
        if (e < 1e-20) break;
    }
    return sum.value() / ell;
}

}  // namespace

double exact_kernel(const ModelManifold& M, double t, double x, double y) {
    if (!(t > 0.0)) throw std::invalid_argument("exact_kernel: t must be positive");
    require_no_drift(M, "exact_kernel");
    switch (M.family) {
        case Family::EuclideanLine:
            return gauss1(x - y, t);
        case Family::EuclideanRadial: {
            const double d = x - y;
            return std::pow(4.0 * kPi * t, -M.m / 2.0) * std::exp(-d * d / (4.0 * t));
        }
        case Family::Circle:
            return t < 1.0 ? circle_kernel_wrapped(t, x, y) : circle_kernel_spectral(t, x, y);
        case Family::HalfLineNeumann:
            if (x < 0.0 || y < 0.0) throw std::invalid_argument("half-line points must be >= 0");
            return gauss1(x - y, t) + gauss1(x + y, t);
        case Family::IntervalNeumann:
            if (x < 0.0 || y < 0.0 || x > M.length || y > M.length)
                throw std::invalid_argument("interval points out of range");
            return interval_kernel(t, x, y, M.length);
        case Family::SphereRadial:
        case Family::HyperbolicRadial:
            break;
    }
    throw std::invalid_argument("no closed-form kernel for " + std::string(to_string(M.family)) +
                                "; use solve_heat");
}

HeatState kernel_state(const ModelManifold& M, double t, const std::vector<double>& grid, double y) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_state: t must be positive");
    require_no_drift(M, "kernel_state");
    const bool radial = M.family == Family::EuclideanRadial;
    if (!(M.family == Family::EuclideanLine || radial))
        throw std::invalid_argument("kernel_state: Euclidean families only");
    if (radial && y != 0.0) throw std::invalid_argument("kernel_state: radial source must be the pole");
    HeatState st;
    st.manifold = M;
    st.t = t;
    st.scheme = Scheme::Spectral;
    st.grid_size = static_cast<int>(grid.size());
    st.grid = grid;
    const double dim = radial ? M.m : 1.0;
    for (double x : grid) {
        const double d = x - y;
        const double u = exact_kernel(M, t, x, y);
        st.u.push_back(u);
        st.grad_u.push_back(-d / (2.0 * t) * u);
        st.Lu.push_back(u * (d * d / (4.0 * t * t) - dim / (2.0 * t)));
    }
    st.diagnostics.u_min = *std::min_element(st.u.begin(), st.u.end());
    st.diagnostics.u_max = *std::max_element(st.u.begin(), st.u.end());
    return st;
}

// ---------------------------------------------------------------------------
// Grids and mass

std::vector<double> solver_grid(const ModelManifold& M, int grid_size, Scheme scheme) {
    if (grid_size < 5) throw std::invalid_argument("grid_size must be >= 5");
    std::vector<double> g(static_cast<std::size_t>(grid_size));
    const CoordinateDomain d = M.solver_domain();
    if (d.periodic) {
        for (int i = 0; i < grid_size; ++i) g[i] = d.lo + d.length() * i / grid_size;
        return g;
    }
    double lo = d.lo;
    double hi = d.hi;
    if (scheme == Scheme::Spectral && M.family == Family::SphereRadial) {
        lo += kSphereDelta;
        hi -= kSphereDelta;
    }
    for (int i = 0; i < grid_size; ++i) g[i] = lo + (hi - lo) * i / (grid_size - 1);
    g.back() = hi;
    return g;
}

double mass(const ModelManifold& M, const std::vector<double>& grid, const std::vector<double>& u) {
    if (grid.size() != u.size() || grid.size() < 2) throw std::invalid_argument("mass: size mismatch");
    const CoordinateDomain d = M.solver_domain();
    CompensatedSum s;
    if (d.periodic) {
        const double h = d.length() / static_cast<double>(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) s.add(h * M.density(grid[i]) * u[i]);
        return s.value();
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        s.add(0.5 * h * (M.density(grid[i]) * u[i] + M.density(grid[i + 1]) * u[i + 1]));
    }
    return s.value();
}

namespace {

double datum_mass(const ModelManifold& M, const InitialDatum& d) {
    const CoordinateDomain dom = M.solver_domain();
    QuadOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    double total = 0.0;
    const int pieces = 16;
    for (int i = 0; i < pieces; ++i) {
        const double a = dom.lo + dom.length() * i / pieces;
        const double b = dom.lo + dom.length() * (i + 1) / pieces;
        total += integrate([&](double x) { return M.density(x) * d.evaluate(M, x).value; }, a, b, opts).value;
    }
    return total;
}

void check_datum(const ModelManifold& M, const InitialDatum& u0, SolveDiagnostics& diag) {
    diag.u0_min = u0.lower_bound(M);
    diag.u0_max = u0.upper_bound(M);
    if (!(diag.u0_min >= kPositivityFloor))
        throw std::invalid_argument("initial datum must be positive (inf u0 >= 1e-12), got lower bound " +
                                    fmt(diag.u0_min));
    if (u0.kind() == InitialDatum::Kind::Nodal) return;
    // Neumann compatibility at physical boundaries and regularity at poles.
    const CoordinateDomain d = M.solver_domain();
    std::vector<double> ends;
    if (M.has_boundary() || d.lo_is_pole) ends.push_back(d.lo);
    if (M.family == Family::IntervalNeumann || d.hi_is_pole) ends.push_back(d.hi);
    for (double e : ends) {
        const Jet j = u0.evaluate(M, e);
        const double tol = (u0.kind() == InitialDatum::Kind::Custom ? 1e-6 : 1e-8) *
                           std::max(1.0, std::fabs(j.value));
        if (std::fabs(j.grad) > tol)
            throw std::invalid_argument("initial datum violates the Neumann condition at x = " + fmt(e));
    }
}

// Cosine/sine projection for the circle and interval (even extension).
InitialDatum project(const ModelManifold& M, const InitialDatum& u0, double t, std::size_t& modes) {
    const bool circle = M.family == Family::Circle;
    const int S = kProjectionSamples;
    std::vector<double> samples(static_cast<std::size_t>(S));
    const double span = circle ? 2.0 * kPi : M.length;
    // Circle: periodic trapezoid on S points. Interval: trapezoid on S+1 points of [0, l].
    std::vector<double> xs;
    if (circle) {
        for (int j = 0; j < S; ++j) xs.push_back(span * j / S);
    } else {
        for (int j = 0; j <= S; ++j) xs.push_back(span * j / S);
    }
    std::vector<double> fx;
    for (double x : xs) fx.push_back(u0.evaluate(M, x).value);

    const int K = kMaxProjectedModes;
    std::vector<double> a(K + 1, 0.0), b(circle ? K + 1 : 0, 0.0);
    for (int k = 0; k <= K; ++k) {
        CompensatedSum sc, ss;
        const double w = circle ? k : k * kPi / span;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            double wt = 1.0;
            if (!circle && (j == 0 || j + 1 == xs.size())) wt = 0.5;
            sc.add(wt * fx[j] * std::cos(w * xs[j]));
            if (circle) ss.add(fx[j] * std::sin(w * xs[j]));
        }
        const double scale = circle ? 2.0 / S : 2.0 / S;
        a[k] = sc.value() * scale;
        if (circle) b[k] = ss.value() * scale;
    }
    a[0] /= 2.0;
    if (circle) b[0] = 0.0;

    double amax = 0.0;
    for (int k = 0; k <= K; ++k) {
        amax = std::max(amax, std::fabs(a[k]));
        if (circle) amax = std::max(amax, std::fabs(b[k]));
    }
    int N = -1;
    for (int k = kMinModes; k <= K; ++k) {
        if (std::exp(-*mode_eigenvalue(M, k) * t) * amax < kSpectralTail) {
            N = k;
            break;
        }
    }
    if (N < 0)
        throw NumericalError("spectral truncation insufficient: tail estimate above 1e-14 at " +
                             std::to_string(K) + " modes");
    a.resize(N + 1);
    if (circle) b.resize(N + 1);
    modes = static_cast<std::size_t>(N) + 1;
    return InitialDatum::fourier(std::move(a), std::move(b));
}

InitialDatum evolve_spectral(const ModelManifold& M, const InitialDatum& u0, double t,
                             std::size_t& modes) {
    switch (u0.kind()) {
        case InitialDatum::Kind::Constant:
            modes = 1;
            return u0;
        case InitialDatum::Kind::Modes: {
            std::vector<ModeTerm> terms;
            for (const auto& term : u0.terms()) {
                const auto lambda = mode_eigenvalue(M, term.k);
                if (!lambda)
                    throw std::invalid_argument("spectral scheme: mode " + std::to_string(term.k) +
                                                " is not an eigenfunction on " +
                                                std::string(to_string(M.family)));
                terms.push_back({term.k, term.amplitude * std::exp(-*lambda * t)});
            }
            modes = terms.size() + 1;
            return InitialDatum::modes(u0.base(), std::move(terms));
        }
        case InitialDatum::Kind::Gaussian: {
            require_no_drift(M, "spectral gaussian solution");
            const double s = u0.spread();
            const double dim = M.family == Family::EuclideanRadial ? M.m : 1.0;
            const double amp = u0.amplitude() * std::pow(s / (s + t), dim / 2.0);
            modes = 1;
            return InitialDatum::gaussian(u0.base(), amp, s + t);
        }
        case InitialDatum::Kind::Fourier: {
            std::vector<double> a = u0.cos_coeffs();
            std::vector<double> b = u0.sin_coeffs();
            for (std::size_t k = 0; k < a.size(); ++k) {
                const auto lambda = mode_eigenvalue(M, static_cast<int>(k));
                if (!lambda) throw std::invalid_argument("spectral scheme: no eigenbasis on this family");
                a[k] *= std::exp(-*lambda * t);
            }
            for (std::size_t k = 0; k < b.size(); ++k)
                b[k] *= std::exp(-static_cast<double>(k) * k * t);
            modes = a.size();
            return InitialDatum::fourier(std::move(a), std::move(b));
        }
        case InitialDatum::Kind::Custom: {
            if (!(M.family == Family::Circle || M.family == Family::IntervalNeumann))
                throw std::invalid_argument(
                    "spectral scheme: custom data are projected only on the circle and interval");
            const InitialDatum proj = project(M, u0, t, modes);
            std::size_t unused = 0;
            return evolve_spectral(M, proj, t, unused);
        }
        case InitialDatum::Kind::Nodal:
            break;
    }
    throw std::invalid_argument("spectral scheme: nodal data need the finite-difference scheme");
}

HeatState solve_spectral(const ModelManifold& M, const InitialDatum& u0, double t, int grid_size) {
    require_no_drift(M, "spectral scheme");
    HeatState st;
    st.manifold = M;
    st.t = t;
    st.scheme = Scheme::Spectral;
    st.grid_size = grid_size;
    st.grid = solver_grid(M, grid_size, Scheme::Spectral);
    check_datum(M, u0, st.diagnostics);
    const InitialDatum ut = evolve_spectral(M, u0, t, st.diagnostics.modes);
    for (double x : st.grid) {
        const Jet j = ut.evaluate(M, x);
        st.u.push_back(j.value);
        st.grad_u.push_back(j.grad);
        st.Lu.push_back(j.L);
    }
    st.evolved = ut;
    const bool closed = M.family == Family::Circle || M.family == Family::IntervalNeumann ||
                        M.family == Family::SphereRadial;
    if (closed) {
        st.diagnostics.mass_initial = datum_mass(M, u0);
        st.diagnostics.mass_final = datum_mass(M, ut);
        st.diagnostics.mass_checked = true;
    }
    return st;
}

// Finite-volume Crank-Nicolson on the node grid.
struct FvOperator {
    std::vector<double> lower, diag, upper;  // rows of A (periodic: lower[0], upper[N-1] wrap)
    std::vector<double> volume;              // cell measures
    bool periodic = false;

    std::vector<double> apply(const std::vector<double>& u) const {
        const std::size_t N = u.size();
        std::vector<double> r(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double um = i > 0 ? u[i - 1] : (periodic ? u[N - 1] : 0.0);
            const double up = i + 1 < N ? u[i + 1] : (periodic ? u[0] : 0.0);
            r[i] = lower[i] * um + diag[i] * u[i] + upper[i] * up;
        }
        return r;
    }
};

double cell_integral(const ModelManifold& M, double a, double b) {
    static constexpr double xg[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                     -0.9061798459386640, 0.9061798459386640};
    static constexpr double wg[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                     0.2369268850561891, 0.2369268850561891};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += wg[i] * M.density(c + h * xg[i]);
    return s * h;
}

FvOperator build_operator(const ModelManifold& M, const std::vector<double>& x) {
    const CoordinateDomain d = M.solver_domain();
    const std::size_t N = x.size();
    FvOperator op;
    op.periodic = d.periodic;
    op.lower.assign(N, 0.0);
    op.diag.assign(N, 0.0);
    op.upper.assign(N, 0.0);
    op.volume.assign(N, 0.0);
    const double h = d.periodic ? d.length() / N : x[1] - x[0];
    // Face weights w_{i+1/2}; zero flux through the ends of a non-periodic domain.
    std::vector<double> face(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        if (!d.periodic && i + 1 == N) break;
        face[i] = M.density(x[i] + 0.5 * h);
    }
    for (std::size_t i = 0; i < N; ++i) {
        double a = x[i] - 0.5 * h;
        double b = x[i] + 0.5 * h;
        if (!d.periodic) {
            a = std::max(a, d.lo);
            b = std::min(b, d.hi);
        }
        op.volume[i] = cell_integral(M, a, b);
        const double wr = face[i];
        const double wl = i > 0 ? face[i - 1] : (d.periodic ? face[N - 1] : 0.0);
        op.upper[i] = wr / (h * op.volume[i]);
        op.lower[i] = wl / (h * op.volume[i]);
        op.diag[i] = -(op.upper[i] + op.lower[i]);
    }
    return op;
}

// Solves (I - c A) u = rhs for tridiagonal (optionally cyclic) A.
std::vector<double> solve_shifted(const FvOperator& op, double c, const std::vector<double>& rhs) {
    const std::size_t N = rhs.size();
    std::vector<double> a(N), b(N), cc(N);
    for (std::size_t i = 0; i < N; ++i) {
        a[i] = -c * op.lower[i];
        b[i] = 1.0 - c * op.diag[i];
        cc[i] = -c * op.upper[i];
    }
    auto thomas = [N](std::vector<double> lo, std::vector<double> di, std::vector<double> up,
                      std::vector<double> r) {
        for (std::size_t i = 1; i < N; ++i) {
            const double w = lo[i] / di[i - 1];
            di[i] -= w * up[i - 1];
            r[i] -= w * r[i - 1];
        }
        std::vector<double> xsol(N);
        xsol[N - 1] = r[N - 1] / di[N - 1];
        for (std::size_t i = N - 1; i-- > 0;) xsol[i] = (r[i] - up[i] * xsol[i + 1]) / di[i];
        return xsol;
    };
    if (!op.periodic) return thomas(a, b, cc, rhs);

    // Sherman-Morrison for the corner entries a[0] (row 0, col N-1) and cc[N-1] (row N-1, col 0).
    const double alpha = cc[N - 1];
    const double beta = a[0];
    const double gamma = -b[0];
    std::vector<double> bb = b;
    bb[0] -= gamma;
    bb[N - 1] -= alpha * beta / gamma;
    std::vector<double> y = thomas(a, bb, cc, rhs);
    std::vector<double> u(N, 0.0);
    u[0] = gamma;
    u[N - 1] = alpha;
    std::vector<double> z = thomas(a, bb, cc, u);
    const double fact = (y[0] + beta * y[N - 1] / gamma) / (1.0 + z[0] + beta * z[N - 1] / gamma);
    for (std::size_t i = 0; i < N; ++i) y[i] -= fact * z[i];
    return y;
}

HeatState solve_fd(const ModelManifold& M, const InitialDatum& u0, double t, int grid_size) {
    HeatState st;
    st.manifold = M;
    st.t = t;
    st.scheme = Scheme::CrankNicolsonFD;
    st.grid_size = grid_size;
    st.grid = solver_grid(M, grid_size, Scheme::CrankNicolsonFD);
    const std::vector<double>& x = st.grid;
    const std::size_t N = x.size();
    check_datum(M, u0, st.diagnostics);

    std::vector<double> u(N);
    if (u0.kind() == InitialDatum::Kind::Nodal) {
        const auto& g = u0.nodal_grid();
        if (g.size() != N) throw std::invalid_argument("nodal datum does not match the solver grid");
        for (std::size_t i = 0; i < N; ++i)
            if (std::fabs(g[i] - x[i]) > 1e-12 * std::max(1.0, std::fabs(x[i])))
                throw std::invalid_argument("nodal datum does not match the solver grid");
        u = u0.nodal_values();
    } else {
        for (std::size_t i = 0; i < N; ++i) u[i] = u0.evaluate(M, x[i]).value;
    }
    const double nodal_min = *std::min_element(u.begin(), u.end());
    const double nodal_max = *std::max_element(u.begin(), u.end());

    const FvOperator op = build_operator(M, x);
    auto discrete_mass = [&](const std::vector<double>& v) {
        CompensatedSum s;
        for (std::size_t i = 0; i < N; ++i) s.add(op.volume[i] * v[i]);
        return s.value();
    };
    st.diagnostics.mass_initial = discrete_mass(u);

    const double h = M.solver_domain().periodic ? M.solver_domain().length() / N : x[1] - x[0];
    if (t > 0.0) {
        const std::size_t steps = static_cast<std::size_t>(std::ceil(t / h - 1e-12));
        const double dt = t / static_cast<double>(steps);
        for (std::size_t n = 0; n < steps; ++n) {
            std::vector<double> Au = op.apply(u);
            for (std::size_t i = 0; i < N; ++i) Au[i] = u[i] + 0.5 * dt * Au[i];
            u = solve_shifted(op, 0.5 * dt, Au);
        }
        st.diagnostics.steps = steps;
    }
    st.diagnostics.mass_final = discrete_mass(u);
    st.diagnostics.mass_checked = true;

    const double range = std::max(1.0, std::fabs(nodal_max));
    const double umin = *std::min_element(u.begin(), u.end());
    const double umax = *std::max_element(u.begin(), u.end());
    if (umin < nodal_min - 1e-10 * range || umax > nodal_max + 1e-10 * range) {
        st.diagnostics.max_principle_ok = false;
        throw NumericalError("finite-difference solve violated the maximum principle (unstable step)");
    }

    const CoordinateDomain d = M.solver_domain();
    st.u = u;
    st.Lu = op.apply(u);
    st.grad_u.assign(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        if (d.periodic) {
            st.grad_u[i] = (u[(i + 1) % N] - u[(i + N - 1) % N]) / (2.0 * h);
        } else if (i > 0 && i + 1 < N) {
            st.grad_u[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
        }
    }
    st.evolved = InitialDatum::nodal(x, u);
    return st;
}

}  // namespace

HeatState solve_heat(const ModelManifold& M, const InitialDatum& u0, double t, int grid_size,
                     Scheme scheme) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("solve_heat: t must be >= 0");
    HeatState st = scheme == Scheme::Spectral ? solve_spectral(M, u0, t, grid_size)
                                               : solve_fd(M, u0, t, grid_size);
    auto& dg = st.diagnostics;
    dg.u_min = *std::min_element(st.u.begin(), st.u.end());
    dg.u_max = *std::max_element(st.u.begin(), st.u.end());
    dg.positivity_ok = dg.u_min >= kPositivityFloor;
    const double tol = 1e-10 * std::max(1.0, std::fabs(dg.u0_max));
    if (scheme == Scheme::Spectral)
        dg.max_principle_ok = dg.u_min >= dg.u0_min - tol && dg.u_max <= dg.u0_max + tol;
    if (!dg.positivity_ok) throw NumericalError("solution dropped below the positivity floor");
    return st;
}

std::size_t HeatState::index_of(double x) const {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::fabs(grid[i] - x) <= 1e-9 * std::max(1.0, std::fabs(x))) return i;
    throw std::invalid_argument("point " + fmt(x) + " is not a grid node");
}

Harnack harnack_at(const HeatState& state, std::size_t i) {
    if (i >= state.u.size()) throw std::out_of_range("harnack_at: index out of range");
    const double u = state.u[i];
    if (!(u >= kPositivityFloor))
        throw NumericalError("u below the positivity floor at x = " + fmt(state.grid[i]));
    const double g = state.grad_u[i];
    return {g * g / (u * u), state.Lu[i] / u, g * g / u};
}

Harnack harnack_quantities(const HeatState& state, double x) {
    return harnack_at(state, state.index_of(x));
}

void write_csv(const HeatState& state, std::ostream& os) {
    const auto& M = state.manifold;
    std::ostringstream hdr;
    hdr.precision(17);
    hdr << "# family=" << to_string(M.family) << ",m=" << M.m << ",n=" << M.n << ",t=" << state.t
        << ",scheme=" << to_string(state.scheme) << ",grid_size=" << state.grid_size << '\n';
    os << hdr.str() << "coord,u,grad_u,Lu\n";
    char buf[128];
    for (std::size_t i = 0; i < state.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", state.grid[i], state.u[i],
                      state.grad_u[i], state.Lu[i]);
        os << buf;
    }
}

}  // namespace liyau
