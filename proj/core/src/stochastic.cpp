#include "liyau/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "liyau/errors.hpp"
#include "liyau/quadrature.hpp"
#include "liyau/special.hpp"

namespace liyau {
namespace {

constexpr int kMaxEscapeRetries = 100;
constexpr double kBridgeSkip = 40.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::size_t step_count(double t, double dt) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("horizon t must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step dt must be positive");
    return static_cast<std::size_t>(std::max(1.0, std::ceil(t / dt - 1e-9)));
}

// One reflected diffusion path in the model coordinate.
class Engine {
public:
    Engine(const ModelManifold& M, double x0, double dt, std::uint64_t seed, ReflectionScheme scheme)
        : M_(M), dom_(M.process_domain()), dt_(dt), sq_(std::sqrt(2.0 * dt)), scheme_(scheme), rng_(seed), x_(x0) {
        if (!std::isfinite(x0)) throw std::invalid_argument("start point must be finite");
        if (!dom_.periodic && (x0 < dom_.lo || x0 > dom_.hi))
            throw std::invalid_argument("start point " + std::to_string(x0) + " outside the domain");
        if (dom_.periodic) x_ = wrap(x0);
        radial_ = M.is_radial() && M.m >= 2;
    }

    double x() const { return x_; }
    std::size_t escapes() const { return escapes_; }

    // Advances one step; returns local-time increments at the lower and upper boundary.
    void step(double& dL_lo, double& dL_hi) {
        dL_lo = 0.0;
        dL_hi = 0.0;
        if (dom_.periodic) {
            x_ = wrap(x_ + sq_ * normal_(rng_));
            return;
        }
        double y = 0.0;
        if (radial_) {
            y = radial_step();
        } else {
            y = x_ + M_.coefficient(x_) * dt_ + sq_ * normal_(rng_);
        }
        if (dom_.lo_reflecting) dL_lo = push(x_ - dom_.lo, y - dom_.lo);
        if (dom_.hi_reflecting) dL_hi = push(dom_.hi - x_, dom_.hi - y);
        y += dL_lo - dL_hi;
        if (dom_.lo_reflecting || dom_.lo_is_pole) y = std::max(y, dom_.lo);
        if (dom_.hi_reflecting || dom_.hi_is_pole) y = std::min(y, dom_.hi);
        x_ = y;
    }

private:
    static double wrap(double x) {
        double r = std::fmod(x, 2.0 * kPi);
        if (r < 0.0) r += 2.0 * kPi;
        return r;
    }

    // Skorokhod push for a boundary at distance a (start) and b (free end point).
    double push(double a, double b) {
        if (scheme_ == ReflectionScheme::Projection) return b < 0.0 ? -b : 0.0;
        if (b > 0.0 && a * b > kBridgeSkip * dt_) return 0.0;
        double u = uniform_(rng_);
        while (u <= 0.0) u = uniform_(rng_);
        const double d = a - b;
        const double m = 0.5 * (a + b - std::sqrt(d * d - 4.0 * dt_ * std::log(u)));
        return m < 0.0 ? -m : 0.0;
    }

    // Exact flat Bessel increment plus the bounded curvature part of the radial drift.
    double radial_step() {
        const bool sphere = M_.family == Family::SphereRadial;
        const bool mirrored = sphere && x_ > 0.5 * kPi;
        const double r = mirrored ? kPi - x_ : x_;
        double extra = 0.0;
        const double k = M_.m - 1.0;
        if (M_.family == Family::SphereRadial) {
            extra = r > 1e-4 ? k * (std::cos(r) / std::sin(r) - 1.0 / r) : -k * r / 3.0;
        } else if (M_.family == Family::HyperbolicRadial) {
            extra = r > 1e-4 ? k * (1.0 / std::tanh(r) - 1.0 / r) : k * r / 3.0;
        }
        if (mirrored) extra = -extra;
        for (int attempt = 0; attempt <= kMaxEscapeRetries; ++attempt) {
            double sum = 0.0;
            const double first = r + sq_ * normal_(rng_);
            sum = first * first;
            for (int i = 1; i < M_.m; ++i) {
                const double g = sq_ * normal_(rng_);
                sum += g * g;
            }
            double rn = std::sqrt(sum);
            double y = mirrored ? kPi - rn : rn;
            y += extra * dt_;
            const bool escaped = sphere ? (y <= 0.0 || y >= kPi) : (y < 0.0);
            if (!escaped) return y;
            ++escapes_;
        }
        throw NumericalError("radial step left the coordinate chart after " +
                             std::to_string(kMaxEscapeRetries) + " resamples");
    }

    const ModelManifold& M_;
    CoordinateDomain dom_;
    double dt_;
    double sq_;
    ReflectionScheme scheme_;
    boost::random::mt19937_64 rng_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
    double x_;
    bool radial_ = false;
    std::size_t escapes_ = 0;
};

struct Fields {
    Field K;
    Field sigma;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
};

Fields resolve_fields(const ModelManifold& M, const SimOptions& opts) {
    Fields f{opts.K_field.value_or(Field::constant(M.K)),
             opts.sigma_field.value_or(Field::constant(M.sigma_or_zero())), 0.0, 0.0};
    const CoordinateDomain d = M.process_domain();
    if (d.lo_reflecting) f.sigma_lo = f.sigma(d.lo);
    if (d.hi_reflecting) f.sigma_hi = f.sigma(d.hi);
    return f;
}

void check_paths(std::size_t n_paths) {
    if (n_paths < 2) throw std::invalid_argument("at least 2 paths are required");
}

Estimate make_estimate(std::string id, const std::vector<double>& values, const ModelManifold& M, double dt,
                       std::uint64_t seed, std::size_t escapes) {
    const MeanStderr ms = mean_stderr(values);
    Estimate e;
    e.functional_id = std::move(id);
    e.value = ms.mean;
    e.std_err = ms.std_err;
    e.n_paths = values.size();
    e.dt = dt;
    e.seed = seed;
    e.chart_escapes = escapes;
    e.manifold = to_json(M);
    return e;
}

}  // namespace

Field Field::constant(double v) {
    Field f;
    f.value_ = v;
    return f;
}

Field Field::callable(std::function<double(double)> fn) {
    if (!fn) throw std::invalid_argument("Field::callable needs a function");
    Field f;
    f.fn_ = std::move(fn);
    return f;
}

std::string_view to_string(ReflectionScheme s) {
    return s == ReflectionScheme::BridgeCorrected ? "bridge" : "projection";
}

ReflectionScheme parse_reflection_scheme(std::string_view name) {
    if (name == "bridge" || name == "bridge-corrected") return ReflectionScheme::BridgeCorrected;
    if (name == "projection") return ReflectionScheme::Projection;
    throw std::invalid_argument("unknown reflection scheme: " + std::string(name));
}

PathSample simulate_reflected_path(const ModelManifold& M, double x0, double t, double dt, std::uint64_t seed,
                                   const SimOptions& opts, std::uint64_t path_index) {
    const std::size_t N = step_count(t, dt);
    const double h = t / static_cast<double>(N);
    const Fields fields = resolve_fields(M, opts);
    Engine eng(M, x0, h, path_seed(seed, path_index), opts.scheme);

    PathSample p;
    p.seed = seed;
    p.path_index = path_index;
    p.times.resize(N + 1);
    p.positions.resize(N + 1);
    p.dL.resize(N);
    p.dL_upper.resize(N);
    p.A.resize(N + 1);
    p.B.resize(N + 1);
    p.times[0] = 0.0;
    p.positions[0] = eng.x();
    p.A[0] = 0.0;
    p.B[0] = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double xk = eng.x();
        double lo = 0.0;
        double hi = 0.0;
        eng.step(lo, hi);
        p.dL[k] = lo + hi;
        p.dL_upper[k] = hi;
        p.A[k + 1] = p.A[k] + fields.K(xk) * h;
        p.B[k + 1] = p.B[k] + fields.sigma_lo * lo + fields.sigma_hi * hi;
        p.times[k + 1] = static_cast<double>(k + 1) * h;
        p.positions[k + 1] = eng.x();
    }
    p.times[N] = t;
    p.chart_escapes = eng.escapes();
    return p;
}

double path_weight(const PathSample& sample, const Field& K_field, const Field& sigma_field, double s) {
    const std::size_t N = sample.dL.size();
    if (N == 0) return 1.0;
    const double t = sample.times.back();
    if (s < 0.0 || s > t * (1.0 + 1e-12)) throw std::invalid_argument("path_weight: s outside [0, t]");
    const double h = t / static_cast<double>(N);
    double A = 0.0;
    double B = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double a = sample.times[k];
        if (a >= s) break;
        const double len = std::min(h, s - a);
        A += K_field(sample.positions[k]) * len;
        // sigma is sampled where the step ended, which sits on the boundary it touched.
        if (sample.times[k + 1] <= s + 1e-12 * t && sample.dL[k] > 0.0)
            B += sigma_field(sample.positions[k + 1]) * sample.dL[k];
    }
    return std::exp(-2.0 * (A + B));
}

void write_path_csv(const PathSample& sample, std::ostream& os) {
    os << "# seed=" << sample.seed << ",path_index=" << sample.path_index
       << ",chart_escapes=" << sample.chart_escapes << '\n';
    os << "s,x,dL,dL_upper,A,B\n";
    char buf[256];
    for (std::size_t k = 0; k < sample.times.size(); ++k) {
        const double dl = k < sample.dL.size() ? sample.dL[k] : 0.0;
        const double du = k < sample.dL_upper.size() ? sample.dL_upper[k] : 0.0;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sample.times[k],
                      sample.positions[k], dl, du, sample.A[k], sample.B[k]);
        os << buf;
    }
}

nlohmann::json to_json(const Estimate& e) {
    return {{"functional_id", e.functional_id}, {"value", e.value},         {"stderr", e.std_err},
            {"n_paths", e.n_paths},             {"dt", e.dt},               {"seed", e.seed},
            {"chart_escapes", e.chart_escapes}, {"manifold", e.manifold}};
}

Estimate estimate_from_json(const nlohmann::json& j) {
    Estimate e;
    e.functional_id = j.at("functional_id").get<std::string>();
    e.value = j.at("value").get<double>();
    e.std_err = j.at("stderr").get<double>();
    e.n_paths = j.at("n_paths").get<std::size_t>();
    e.dt = j.at("dt").get<double>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.chart_escapes = j.value("chart_escapes", std::size_t{0});
    e.manifold = j.value("manifold", nlohmann::json::object());
    return e;
}

std::string_view to_string(Functional f) {
    switch (f) {
        case Functional::J0_rhs: return "J0_rhs";
        case Functional::A1_rhs: return "A1_rhs";
        case Functional::G_rhs: return "G_rhs";
        case Functional::XW: return "XW";
    }
    return "unknown";
}

Functional parse_functional(std::string_view name) {
    for (Functional f : {Functional::J0_rhs, Functional::A1_rhs, Functional::G_rhs, Functional::XW})
        if (name == to_string(f)) return f;
    throw std::invalid_argument("unknown functional: " + std::string(name));
}

Estimate estimate_functional(const ModelManifold& M, const InitialDatum& u0, double x, double t, const Clock& clock,
                             Functional functional, std::size_t n_paths, double dt, std::uint64_t seed,
                             const FunctionalOptions& opts) {
    check_paths(n_paths);
    if (std::fabs(clock.horizon() - t) > 1e-12 * std::max(1.0, t))
        throw std::invalid_argument("estimate_functional: clock horizon differs from t");
    const std::size_t N = step_count(t, dt);
    const double h = t / static_cast<double>(N);
    const Fields fields = resolve_fields(M, opts.sim);
    const bool constK = fields.K.is_constant();
    const double K0 = fields.K.constant_value();
    const double alpha = opts.alpha;
    if (functional == Functional::A1_rhs && !(alpha > 1.0))
        throw std::invalid_argument("A1_rhs needs alpha > 1");
    const double n = M.n;

    // Per-step clock integrals for constant K; node values for the Simpson rule otherwise.
    std::vector<double> P, Q;
    std::vector<double> ln, dn;  // l and l' at s_0, s_1/2, s_1, ... (2N + 1 nodes)
    if (functional == Functional::J0_rhs || functional == Functional::A1_rhs) {
        if (constK) {
            P.resize(N);
            Q.resize(N);
            for (std::size_t k = 0; k < N; ++k) {
                const double a = static_cast<double>(k) * h;
                const double b = k + 1 == N ? t : a + h;
                if (functional == Functional::J0_rhs) {
                    P[k] = integrate([&](double s) {
                               const double d = clock.deriv(s);
                               return d * d * std::exp(-2.0 * K0 * s);
                           }, a, b).value;
                    Q[k] = integrate([&](double s) {
                               return 2.0 * clock.value(s) * clock.deriv(s) * std::exp(-2.0 * K0 * s);
                           }, a, b).value;
                } else {
                    const double kk = K0 / (alpha - 1.0);
                    P[k] = integrate([&](double s) {
                               const double v = kk * clock.value(s) + clock.deriv(s);
                               return v * v * std::exp(2.0 * kk * s);
                           }, a, b).value;
                }
            }
        } else {
            ln.resize(2 * N + 1);
            dn.resize(2 * N + 1);
            for (std::size_t i = 0; i <= 2 * N; ++i) {
                const double s = i == 2 * N ? t : 0.5 * h * static_cast<double>(i);
                ln[i] = clock.value(s);
                dn[i] = clock.deriv(s);
            }
        }
    }

    std::vector<double> values(n_paths);
    std::size_t escapes = 0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        Engine eng(M, x, h, path_seed(seed, p), opts.sim.scheme);
        double A = 0.0;
        double B = 0.0;
        CompensatedSum s1, s2;
        for (std::size_t k = 0; k < N; ++k) {
            const double xk = eng.x();
            const double Kk = constK ? K0 : fields.K(xk);
            switch (functional) {
                case Functional::J0_rhs:
                    if (constK) {
                        const double w = B != 0.0 ? std::exp(-2.0 * B) : 1.0;
                        s1.add(P[k] * w);
                        s2.add(Q[k] * w);
                    } else {
                        const double w0 = std::exp(-2.0 * (A + B));
                        const double wm = w0 * std::exp(-Kk * h);
                        const double w1 = w0 * std::exp(-2.0 * Kk * h);
                        const std::size_t i = 2 * k;
                        auto d2 = [&](std::size_t j) { return dn[j] * dn[j]; };
                        auto sq = [&](std::size_t j) { return 2.0 * ln[j] * dn[j]; };
                        s1.add(h / 6.0 * (d2(i) * w0 + 4.0 * d2(i + 1) * wm + d2(i + 2) * w1));
                        s2.add(h / 6.0 * (sq(i) * w0 + 4.0 * sq(i + 1) * wm + sq(i + 2) * w1));
                    }
                    break;
                case Functional::A1_rhs:
                    if (constK) {
                        s1.add(P[k]);
                    } else {
                        const double c = 1.0 / (alpha - 1.0);
                        const double w0 = std::exp(2.0 * c * A);
                        const double wm = w0 * std::exp(c * Kk * h);
                        const double w1 = w0 * std::exp(2.0 * c * Kk * h);
                        const std::size_t i = 2 * k;
                        auto g = [&](std::size_t j) {
                            const double v = c * Kk * ln[j] + dn[j];
                            return v * v;
                        };
                        s1.add(h / 6.0 * (g(i) * w0 + 4.0 * g(i + 1) * wm + g(i + 2) * w1));
                    }
                    break;
                default:
                    break;
            }
            double lo = 0.0;
            double hi = 0.0;
            eng.step(lo, hi);
            A += Kk * h;
            B += fields.sigma_lo * lo + fields.sigma_hi * hi;
        }
        const Jet j = u0.evaluate(M, eng.x());
        switch (functional) {
            case Functional::J0_rhs:
                values[p] = 0.5 * n * j.value * s1.value() - j.L * s2.value();
                break;
            case Functional::A1_rhs:
                values[p] = 0.5 * n * alpha * j.value * s1.value();
                break;
            case Functional::G_rhs:
                values[p] = std::fabs(j.grad) * std::exp(-(A + B));
                break;
            case Functional::XW:
                values[p] = j.value;
                break;
        }
        escapes += eng.escapes();
    }
    return make_estimate(std::string(to_string(functional)), values, M, h, seed, escapes);
}

namespace {

std::vector<double> local_times(const ModelManifold& M, double x0, double t, std::size_t n_paths, double dt,
                                std::uint64_t seed, const SimOptions& opts, std::size_t& escapes, double& h) {
    const CoordinateDomain d = M.process_domain();
    if (!d.lo_reflecting && !d.hi_reflecting)
        throw std::invalid_argument("local time needs a reflecting boundary");
    const std::size_t N = step_count(t, dt);
    h = t / static_cast<double>(N);
    std::vector<double> L(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        Engine eng(M, x0, h, path_seed(seed, p), opts.scheme);
        double total = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            double lo = 0.0;
            double hi = 0.0;
            eng.step(lo, hi);
            total += lo + hi;
        }
        L[p] = total;
        escapes += eng.escapes();
    }
    return L;
}

}  // namespace

Estimate local_time_moment(const ModelManifold& M, double x0, double t, double p, std::size_t n_paths, double dt,
                           std::uint64_t seed, const SimOptions& opts) {
    check_paths(n_paths);
    if (!std::isfinite(p)) throw std::invalid_argument("local_time_moment: p must be finite");
    if (p == 0.0) {
        Estimate e;
        e.functional_id = "local_time_moment";
        e.value = 1.0;
        e.std_err = 0.0;
        e.n_paths = n_paths;
        e.dt = t / static_cast<double>(step_count(t, dt));
        e.seed = seed;
        e.manifold = to_json(M);
        return e;
    }
    std::size_t escapes = 0;
    double h = 0.0;
    const std::vector<double> L = local_times(M, x0, t, n_paths, dt, seed, opts, escapes, h);
    // exp(p L) = e^{m} exp(p L - m) with m = max p L.
    double m = -std::numeric_limits<double>::infinity();
    for (double l : L) m = std::max(m, p * l);
    std::vector<double> scaled(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) scaled[i] = std::exp(p * L[i] - m);
    const MeanStderr ms = mean_stderr(scaled);
    Estimate e = make_estimate("local_time_moment", scaled, M, h, seed, escapes);
    e.value = std::exp(m) * ms.mean;
    e.std_err = std::exp(m) * ms.std_err;
    if (!std::isfinite(e.value)) throw NumericalError("local_time_moment overflowed");
    return e;
}

Estimate local_time_mean(const ModelManifold& M, double x0, double t, std::size_t n_paths, double dt,
                         std::uint64_t seed, const SimOptions& opts) {
    check_paths(n_paths);
    std::size_t escapes = 0;
    double h = 0.0;
    const std::vector<double> L = local_times(M, x0, t, n_paths, dt, seed, opts, escapes, h);
    return make_estimate("local_time_mean", L, M, h, seed, escapes);
}

Cutoff cosine_cutoff(const ModelManifold& M, double center, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("cosine_cutoff: R must be positive");
    const bool radial = M.is_radial() && M.m >= 2;
    if (radial && center != 0.0) throw std::invalid_argument("cosine_cutoff: radial balls are centered at the pole");
    if (M.family == Family::SphereRadial && R > kPi) throw std::invalid_argument("cosine_cutoff: R beyond the cut locus");
    const bool circle = M.family == Family::Circle;
    const double w = kPi / (2.0 * R);
    auto rho = [=](double x) {
        if (circle) return std::fabs(std::remainder(x - center, 2.0 * kPi));
        return std::fabs(x - center);
    };
    auto sgn = [=](double x) {
        const double d = circle ? std::remainder(x - center, 2.0 * kPi) : x - center;
        return d < 0.0 ? -1.0 : 1.0;
    };
    Cutoff c;
    c.center = center;
    c.R = R;
    c.f = [=](double x) {
        const double r = rho(x);
        return r >= R ? 0.0 : std::cos(w * r);
    };
    c.grad = [=](double x) {
        const double r = rho(x);
        return r >= R ? 0.0 : -w * std::sin(w * r) * sgn(x);
    };
    const ModelManifold Mc = M;
    c.Lf = [=](double x) {
        const double r = rho(x);
        if (r >= R) return 0.0;
        const double f2 = -w * w * std::cos(w * r);
        const double f1 = -w * std::sin(w * r) * sgn(x);
        if (radial && r < 1e-12) return Mc.m * f2;
        return f2 + Mc.coefficient(x) * f1;
    };
    return c;
}

double cutoff_Kf(const ModelManifold& M, const Cutoff& cutoff, const std::vector<double>& grid) {
    (void)M;
    double best = -std::numeric_limits<double>::infinity();
    for (double x : grid) {
        const double f = cutoff.f(x);
        if (!(f > 0.0)) continue;
        const double g = cutoff.grad(x);
        best = std::max(best, 6.0 * g * g - f * cutoff.Lf(x));
    }
    if (!std::isfinite(best)) throw std::invalid_argument("cutoff_Kf: no grid point inside the ball");
    return best;
}

double TimeChange::tau(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= T.back()) return s.back();
    const auto it = std::upper_bound(T.begin(), T.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - T.begin()) - 1;
    const double w = (u - T[k]) / (T[k + 1] - T[k]);
    return s[k] + w * (s[k + 1] - s[k]);
}

double TimeChange::position_at_tau(double u) const {
    if (u <= 0.0) return positions.front();
    if (u >= T.back()) return positions.back();
    const auto it = std::upper_bound(T.begin(), T.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - T.begin()) - 1;
    const double w = (u - T[k]) / (T[k + 1] - T[k]);
    return positions[k] + w * (positions[k + 1] - positions[k]);
}

TimeChange time_change(const PathSample& sample, const Cutoff& cutoff) {
    TimeChange tc;
    const std::size_t N = sample.dL.size();
    tc.s.push_back(0.0);
    tc.T.push_back(0.0);
    tc.positions.push_back(sample.positions.front());
    for (std::size_t k = 0; k < N; ++k) {
        const double fk = cutoff.f(sample.positions[k]);
        if (!(fk > 0.0)) {
            tc.exited = true;
            break;
        }
        if (fk < 1e-8) {
            tc.truncated = true;
            break;
        }
        const double fn = cutoff.f(sample.positions[k + 1]);
        const double h = sample.times[k + 1] - sample.times[k];
        if (!(fn > 0.0)) {
            tc.exited = true;
            tc.exit_time = sample.times[k + 1];
            break;
        }
        tc.s.push_back(sample.times[k + 1]);
        tc.T.push_back(tc.T.back() + h / (fk * fk));
        tc.positions.push_back(sample.positions[k + 1]);
    }
    if (!tc.exited) tc.exit_time = tc.s.back();
    return tc;
}

TimeChangeCheck time_change_moment(const ModelManifold& M, double x0, const Cutoff& cutoff, double K_f,
                                   const std::vector<double>& s_grid, std::size_t n_paths, double dt,
                                   std::uint64_t seed) {
    check_paths(n_paths);
    if (s_grid.empty()) throw std::invalid_argument("time_change_moment: empty s grid");
    const double horizon = *std::max_element(s_grid.begin(), s_grid.end());
    TimeChangeCheck out;
    out.s = s_grid;
    std::vector<std::vector<double>> vals(s_grid.size(), std::vector<double>(n_paths));
    out.tau_le_s.assign(s_grid.size(), true);
    for (std::size_t p = 0; p < n_paths; ++p) {
        const PathSample sample = simulate_reflected_path(M, x0, horizon, dt, seed, {}, p);
        const TimeChange tc = time_change(sample, cutoff);
        bool short_path = false;
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            const double u = s_grid[i];
            if (tc.T.back() < u) short_path = true;
            if (tc.tau(u) > u + 1e-12) out.tau_le_s[i] = false;
            const double f = cutoff.f(tc.position_at_tau(u));
            vals[i][p] = 1.0 / (f * f);
        }
        if (short_path || tc.truncated) ++out.truncated_paths;
    }
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const MeanStderr ms = mean_stderr(vals[i]);
        out.mean.push_back(ms.mean);
        out.std_err.push_back(ms.std_err);
        out.bound.push_back(std::exp(K_f * s_grid[i]));
        out.pass.push_back(ms.mean <= out.bound.back() + 3.0 * ms.std_err);
    }
    return out;
}

}  // namespace liyau
