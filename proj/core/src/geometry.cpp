#include "liyau/geometry.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "liyau/special.hpp"

namespace liyau {
namespace {

struct FamilyName {
    Family family;
    std::string_view name;
};

constexpr std::array<FamilyName, 7> kFamilyNames{{
    {Family::EuclideanLine, "EuclideanLine"},
    {Family::EuclideanRadial, "EuclideanRadial"},
    {Family::Circle, "Circle"},
    {Family::HalfLineNeumann, "HalfLineNeumann"},
    {Family::IntervalNeumann, "IntervalNeumann"},
    {Family::SphereRadial, "SphereRadial"},
    {Family::HyperbolicRadial, "HyperbolicRadial"},
}};

bool is_flat_1d(Family f) {
    return f == Family::EuclideanLine || f == Family::Circle || f == Family::HalfLineNeumann ||
           f == Family::IntervalNeumann;
}

bool supports_drift(Family f) {
    return f == Family::EuclideanLine || f == Family::HalfLineNeumann ||
           f == Family::IntervalNeumann;
}

double default_length(Family f) {
    switch (f) {
        case Family::EuclideanLine: return 10.0;
        case Family::EuclideanRadial: return 10.0;
        case Family::Circle: return 2.0 * kPi;
        case Family::HalfLineNeumann: return 8.0 * kPi;
        case Family::IntervalNeumann: return kPi;
        case Family::SphereRadial: return kPi;
        case Family::HyperbolicRadial: return 3.0;
    }
    return 1.0;
}

}  // namespace

std::string_view to_string(Family f) {
    for (const auto& e : kFamilyNames)
        if (e.family == f) return e.name;
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (const auto& e : kFamilyNames)
        if (e.name == name) return e.family;
    throw std::invalid_argument("unknown manifold family: " + std::string(name));
}

std::string Drift::id() const {
    if (!active()) return "none";
    std::ostringstream os;
    os.precision(17);
    os << "constant:" << c;
    return os.str();
}

Drift parse_drift(std::string_view spec) {
    if (spec.empty() || spec == "none" || spec == "0") return {};
    constexpr std::string_view prefix = "constant:";
    if (spec.substr(0, prefix.size()) != prefix)
        throw std::invalid_argument("unsupported drift specification: " + std::string(spec));
    const std::string value(spec.substr(prefix.size()));
    std::size_t used = 0;
    double c = 0.0;
    try {
        c = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || !std::isfinite(c))
        throw std::invalid_argument("bad drift coefficient: " + value);
    return Drift{c};
}

bool ModelManifold::has_boundary() const {
    return family == Family::HalfLineNeumann || family == Family::IntervalNeumann;
}

bool ModelManifold::is_radial() const {
    return family == Family::EuclideanRadial || family == Family::SphereRadial ||
           family == Family::HyperbolicRadial;
}

CoordinateDomain ModelManifold::solver_domain() const {
    CoordinateDomain d;
    const bool pole = m >= 2;
    switch (family) {
        case Family::EuclideanLine:
            d = {-length, length, false, true, true, false, false};
            break;
        case Family::Circle:
            d = {0.0, 2.0 * kPi, true, false, false, false, false};
            break;
        case Family::HalfLineNeumann:
        case Family::IntervalNeumann:
            d = {0.0, length, false, true, true, false, false};
            break;
        case Family::EuclideanRadial:
        case Family::HyperbolicRadial:
            d = {0.0, length, false, !pole, true, pole, false};
            break;
        case Family::SphereRadial:
            d = {0.0, kPi, false, !pole, !pole, pole, pole};
            break;
    }
    return d;
}

CoordinateDomain ModelManifold::process_domain() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    CoordinateDomain d = solver_domain();
    switch (family) {
        case Family::EuclideanLine:
            d = {-inf, inf, false, false, false, false, false};
            break;
        case Family::HalfLineNeumann:
            d.hi = inf;
            d.hi_reflecting = false;
            break;
        case Family::EuclideanRadial:
            d.hi = inf;
            d.hi_reflecting = false;
            break;
        default:
            break;
    }
    return d;
}

double ModelManifold::volume_drift(double r) const {
    const double k = m - 1.0;
    switch (family) {
        case Family::EuclideanRadial: return k == 0.0 ? 0.0 : k / r;
        case Family::SphereRadial: return k == 0.0 ? 0.0 : k * std::cos(r) / std::sin(r);
        case Family::HyperbolicRadial: return k == 0.0 ? 0.0 : k / std::tanh(r);
        default: return 0.0;
    }
}

double ModelManifold::volume_drift_derivative(double r) const {
    const double k = m - 1.0;
    switch (family) {
        case Family::EuclideanRadial: return -k / (r * r);
        case Family::SphereRadial: {
            const double s = std::sin(r);
            return -k / (s * s);
        }
        case Family::HyperbolicRadial: {
            const double s = std::sinh(r);
            return -k / (s * s);
        }
        default: return 0.0;
    }
}

double ModelManifold::density(double r) const {
    const double k = m - 1.0;
    switch (family) {
        case Family::EuclideanRadial: return std::pow(r, k);
        case Family::SphereRadial: return std::pow(std::sin(r), k);
        case Family::HyperbolicRadial: return std::pow(std::sinh(r), k);
        default: return drift.active() ? std::exp(drift.c * r) : 1.0;
    }
}

double ModelManifold::model_K() const {
    switch (family) {
        case Family::SphereRadial: return m - 1.0;
        case Family::HyperbolicRadial: return -(m - 1.0);
        default:
            if (drift.active()) return -drift.c * drift.c / (n - m);
            return 0.0;
    }
}

double ModelManifold::extent() const {
    const CoordinateDomain d = solver_domain();
    return d.length();
}

ModelManifold make_model_manifold(Family family, int m, double n, std::string_view drift_spec,
                                  std::optional<double> K_override, std::optional<double> length) {
    if (m < 1) throw std::invalid_argument("dimension m must be >= 1");
    if (!(n >= m)) throw std::invalid_argument("effective dimension n must satisfy n >= m");
    if (is_flat_1d(family) && m != 1)
        throw std::invalid_argument(std::string(to_string(family)) + " requires m = 1");

    ModelManifold M;
    M.family = family;
    M.m = m;
    M.n = n;
    M.drift = parse_drift(drift_spec);
    if (M.drift.active()) {
        if (!supports_drift(family))
            throw std::invalid_argument("drift is not supported on " + std::string(to_string(family)));
        if (!(n > m))
            throw std::invalid_argument("a non-zero drift requires n > m");
    }
    if (length) {
        if (!(*length > 0.0) || !std::isfinite(*length))
            throw std::invalid_argument("length must be positive");
        if (family == Family::Circle || family == Family::SphereRadial)
            throw std::invalid_argument("length is fixed for " + std::string(to_string(family)));
    }
    M.length = length.value_or(default_length(family));
    M.K = M.model_K();
    if (K_override) {
        if (*K_override > M.K + 1e-15)
            throw std::invalid_argument("K override exceeds the model curvature bound");
        M.K = *K_override;
    }
    if (M.has_boundary()) M.sigma = 0.0;
    return M;
}

nlohmann::json to_json(const ModelManifold& M) {
    nlohmann::json j;
    j["family"] = std::string(to_string(M.family));
    j["m"] = M.m;
    j["n"] = M.n;
    j["K"] = M.K;
    j["sigma"] = M.sigma ? nlohmann::json(*M.sigma) : nlohmann::json(nullptr);
    j["drift"] = M.drift.id();
    j["length"] = M.length;
    return j;
}

ModelManifold manifold_from_json(const nlohmann::json& j) {
    const Family family = parse_family(j.at("family").get<std::string>());
    const int m = j.value("m", 1);
    const double n = j.value("n", static_cast<double>(m));
    const std::string drift = j.value("drift", std::string("none"));
    std::optional<double> K;
    if (j.contains("K") && !j["K"].is_null()) K = j["K"].get<double>();
    std::optional<double> length;
    if (j.contains("length") && !j["length"].is_null() && family != Family::Circle &&
        family != Family::SphereRadial)
        length = j["length"].get<double>();
    return make_model_manifold(family, m, n, drift, K, length);
}

CdCheckReport cd_check(const ModelManifold& M, const ScalarField& f,
                       const std::vector<double>& grid, double h) {
    if (grid.size() < 5) throw std::invalid_argument("cd_check: grid needs at least 5 points");
    if (h <= 0.0) h = 1e-4 * M.extent();
    const CoordinateDomain dom = M.solver_domain();
    const bool singular = M.is_radial() && M.m >= 2;

    using ld = long double;
    const ld H = h;
    auto B = [&](ld x) { return static_cast<ld>(M.coefficient(static_cast<double>(x))); };
    auto d1 = [&](ld x) { return (f(x + H) - f(x - H)) / (2 * H); };
    auto d2 = [&](ld x) { return (f(x + H) - 2 * f(x) + f(x - H)) / (H * H); };
    auto Lf = [&](ld x) { return d2(x) + B(x) * d1(x); };

    CdCheckReport rep;
    rep.h = h;
    rep.min_defect = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const ld x = grid[i];
        if (singular && (x - 2 * H <= dom.lo || (dom.hi_is_pole && x + 2 * H >= dom.hi)))
            throw std::invalid_argument("cd_check: stencil reaches a coordinate pole");
        const ld g = d1(x);
        const ld qp = d1(x + H) * d1(x + H);
        const ld q0 = g * g;
        const ld qm = d1(x - H) * d1(x - H);
        const ld Lq = (qp - 2 * q0 + qm) / (H * H) + B(x) * (qp - qm) / (2 * H);
        const ld dLf = (Lf(x + H) - Lf(x - H)) / (2 * H);
        const ld lf = Lf(x);
        const ld defect = Lq / 2 - g * dLf - static_cast<ld>(M.K) * q0 - lf * lf / static_cast<ld>(M.n);
        const double d = static_cast<double>(defect);
        rep.defects.push_back(d);
        ++rep.points;
        if (d < rep.min_defect) {
            rep.min_defect = d;
            rep.worst_point = grid[i];
        }
    }
    return rep;
}

double laplacian_comparison(double K_region, double n, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("laplacian_comparison: r must be positive");
    if (K_region < 0.0) throw std::invalid_argument("laplacian_comparison: K_region must be >= 0");
    if (K_region == 0.0) return (n - 1.0) / r;
    if (!(n > 1.0)) throw std::invalid_argument("laplacian_comparison: n must exceed 1 when K_region > 0");
    return (n - 1.0) / r * xcoth(std::sqrt(K_region / (n - 1.0)) * r);
}

}  // namespace liyau
