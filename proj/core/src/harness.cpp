#include "liyau/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "liyau/errors.hpp"

#ifndef LIYAU_VERSION
#define LIYAU_VERSION "unknown"
#endif

namespace liyau {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> number_list(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    const auto& v = j[key];
    if (v.is_number()) return {v.get<double>()};
    return v.get<std::vector<double>>();
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_double(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

double nan_double(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return kNaN;
    return j[key].get<double>();
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

nlohmann::json clock_params_json(ClockFamily f, const ClockParams& p) {
    return {{"family", std::string(to_string(f))}, {"a", p.a},           {"alpha", p.alpha},
            {"K", p.K},                            {"lambda", p.lambda}, {"beta", p.beta}};
}

struct Point {
    double x = 0.0;
    Harnack h;
    Jet jet;
};

// Evaluation at an arbitrary point: closed-form continuation when available, grid nodes otherwise.
Point evaluate_point(const HeatState& state, double x) {
    Point p;
    p.x = x;
    if (state.evolved && state.evolved->kind() != InitialDatum::Kind::Nodal) {
        p.jet = state.evolved->evaluate(state.manifold, x);
        if (!(p.jet.value >= kPositivityFloor)) throw NumericalError("u below the positivity floor at x = " + fmt(x));
        const double g = p.jet.grad;
        p.h = {g * g / (p.jet.value * p.jet.value), p.jet.L / p.jet.value, g * g / p.jet.value};
        return p;
    }
    const std::size_t i = state.index_of(x);
    p.h = harnack_at(state, i);
    p.jet = {state.u[i], state.grad_u[i], state.Lu[i]};
    return p;
}

std::vector<double> default_points(const HeatState& state, int n_points) {
    std::vector<double> pts;
    const std::size_t N = state.grid.size();
    if (N == 0 || n_points <= 0) return pts;
    for (int j = 1; j <= n_points; ++j) {
        const auto i = static_cast<std::size_t>(
            std::llround(static_cast<double>(j) * static_cast<double>(N - 1) / (n_points + 1.0)));
        if (pts.empty() || state.grid[i] != pts.back()) pts.push_back(state.grid[i]);
    }
    return pts;
}

struct Combo {
    std::optional<double> alpha, eps, K_prime, R;
};

std::vector<Combo> combos(const BoundSpec& b) {
    auto opts = [](const std::vector<double>& v) {
        std::vector<std::optional<double>> out;
        if (v.empty()) out.emplace_back(std::nullopt);
        for (double d : v) out.emplace_back(d);
        return out;
    };
    std::vector<Combo> out;
    for (const auto& a : opts(b.alpha))
        for (const auto& e : opts(b.eps))
            for (const auto& k : opts(b.K_prime))
                for (const auto& r : opts(b.R)) out.push_back({a, e, k, r});
    return out;
}

ReportRow base_row(const ModelManifold& M, const std::string& id, double t, double x, const Combo& c) {
    ReportRow r;
    r.bound_id = id;
    r.family = std::string(to_string(M.family));
    r.m = M.m;
    r.n = M.n;
    r.K = M.K;
    r.t = t;
    r.x = x;
    r.alpha = c.alpha;
    r.eps = c.eps;
    r.K_prime = c.K_prime;
    r.R = c.R;
    r.gamma = r.a = r.c = r.margin = kNaN;
    r.X = r.Y = kNaN;
    return r;
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t index) {
    return seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1);
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.name = j.value("name", c.name);
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
        throw std::invalid_argument("config: name must be a plain file stem");
    c.manifold = manifold_from_json(j.at("manifold"));
    if (j.contains("datum")) c.datum = datum_from_json(j["datum"]);
    c.times = number_list(j, "times");
    if (c.times.empty()) throw std::invalid_argument("config: times must be a non-empty list");
    for (double t : c.times)
        if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("config: times must be positive");
    c.points = number_list(j, "points");
    c.n_points = j.value("n_points", c.n_points);
    c.grid_size = j.value("grid_size", c.grid_size);
    if (c.grid_size < 5) throw std::invalid_argument("config: grid_size must be >= 5");
    if (j.contains("scheme"))
        c.scheme = parse_scheme(j["scheme"].get<std::string>());
    else if (!mode_eigenvalue(c.manifold, 1))
        c.scheme = Scheme::CrankNicolsonFD;
    c.seed = j.value("seed", c.seed);
    c.tol = opt_double(j, "tol");
    if (c.tol && !(*c.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
    c.out_dir = j.value("out_dir", c.out_dir);

    for (const auto& b : j.value("bounds", nlohmann::json::array())) {
        BoundSpec s;
        if (b.is_string()) {
            s.id = b.get<std::string>();
        } else {
            s.id = b.at("id").get<std::string>();
            s.alpha = number_list(b, "alpha");
            s.eps = number_list(b, "eps");
            s.K_prime = number_list(b, "K_prime");
            s.R = number_list(b, "R");
            s.K_region = b.value("K_region", 0.0);
        }
        s.id = bound_info(s.id).id;
        c.bounds.push_back(std::move(s));
    }
    for (const auto& m : j.value("mc", nlohmann::json::array())) {
        McSpec s;
        s.functional = parse_functional(m.at("functional").get<std::string>());
        if (m.contains("clock")) {
            const auto& cj = m["clock"];
            s.clock = parse_clock_family(cj.value("family", std::string("linear")));
            s.clock_params.a = cj.value("a", 0.0);
            s.clock_params.alpha = cj.value("alpha", 2.0);
            s.clock_params.K = cj.value("K", 0.0);
            s.clock_params.lambda = cj.value("lambda", 0.0);
            s.clock_params.beta = cj.value("beta", 0.0);
        }
        s.alpha = m.value("alpha", s.alpha);
        s.points = number_list(m, "points");
        s.n_paths = m.value("n_paths", s.n_paths);
        s.dt = m.value("dt", s.dt);
        if (m.contains("scheme")) s.scheme = parse_reflection_scheme(m["scheme"].get<std::string>());
        if (s.n_paths < 2 || !(s.dt > 0.0)) throw std::invalid_argument("config: mc needs n_paths >= 2 and dt > 0");
        c.mc.push_back(std::move(s));
    }
    return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["manifold"] = to_json(c.manifold);
    j["datum"] = c.datum.params();
    j["times"] = c.times;
    j["points"] = c.points;
    j["n_points"] = c.n_points;
    j["grid_size"] = c.grid_size;
    j["scheme"] = std::string(to_string(c.scheme));
    j["seed"] = c.seed;
    j["tol"] = opt_json(c.tol);
    j["out_dir"] = c.out_dir;
    auto bounds = nlohmann::json::array();
    for (const auto& b : c.bounds)
        bounds.push_back({{"id", b.id},
                          {"alpha", b.alpha},
                          {"eps", b.eps},
                          {"K_prime", b.K_prime},
                          {"R", b.R},
                          {"K_region", b.K_region}});
    j["bounds"] = bounds;
    auto mc = nlohmann::json::array();
    for (const auto& m : c.mc)
        mc.push_back({{"functional", std::string(to_string(m.functional))},
                      {"clock", clock_params_json(m.clock, m.clock_params)},
                      {"alpha", m.alpha},
                      {"points", m.points},
                      {"n_paths", m.n_paths},
                      {"dt", m.dt},
                      {"scheme", std::string(to_string(m.scheme))}});
    j["mc"] = mc;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("cannot parse config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

std::string_view to_string(RowStatus s) {
    switch (s) {
        case RowStatus::Pass: return "pass";
        case RowStatus::Fail: return "fail";
        case RowStatus::Skipped: return "skipped";
        case RowStatus::Error: return "error";
    }
    return "error";
}

RowStatus parse_row_status(std::string_view s) {
    for (RowStatus r : {RowStatus::Pass, RowStatus::Fail, RowStatus::Skipped, RowStatus::Error})
        if (s == to_string(r)) return r;
    throw std::invalid_argument("unknown row status: " + std::string(s));
}

std::size_t Report::count(RowStatus s) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.status == s;
    for (const auto& r : mc) n += r.status == s;
    for (const auto& r : solves) n += r.status == s;
    return n;
}

bool Report::ok() const { return count(RowStatus::Fail) == 0 && count(RowStatus::Error) == 0; }

double Report::worst_margin(std::string_view bound_id) const {
    double w = kNaN;
    for (const auto& r : rows) {
        if (r.bound_id != bound_id || !r.domain_ok || std::isnan(r.margin)) continue;
        if (std::isnan(w) || r.margin < w) w = r.margin;
    }
    return w;
}

Report run_experiment(const ExperimentConfig& cfg) {
    Report rep;
    rep.name = cfg.name;
    rep.config = to_json(cfg);
    rep.environment = {{"library_version", LIYAU_VERSION},
#if defined(__VERSION__)
                       {"compiler", __VERSION__},
#endif
                       {"cxx_standard", static_cast<long>(__cplusplus)},
                       {"seed", cfg.seed},
                       {"rng", "mt19937_64 per path, splitmix64 seeding"}};
    const ModelManifold& M = cfg.manifold;
    std::size_t mc_index = 0;

    for (double t : cfg.times) {
        SolveRow sr;
        sr.t = t;
        std::optional<HeatState> state;
        try {
            state = solve_heat(M, cfg.datum, t, cfg.grid_size, cfg.scheme);
            const auto& d = state->diagnostics;
            sr.mass_initial = d.mass_initial;
            sr.mass_final = d.mass_final;
            sr.u_min = d.u_min;
            sr.u_max = d.u_max;
            sr.modes = d.modes;
            sr.steps = d.steps;
            sr.max_principle_ok = d.max_principle_ok;
            sr.positivity_ok = d.positivity_ok;
            if (!d.max_principle_ok || !d.positivity_ok) {
                sr.status = RowStatus::Fail;
                sr.note = "maximum principle or positivity violated";
            }
        } catch (const std::exception& e) {
            sr.status = RowStatus::Error;
            sr.note = e.what();
        }
        rep.solves.push_back(sr);

        const std::vector<double> pts =
            state ? (cfg.points.empty() ? default_points(*state, cfg.n_points) : cfg.points) : cfg.points;

        for (const auto& b : cfg.bounds) {
            const std::vector<Combo> cs = combos(b);
            for (double x : pts) {
                std::optional<Point> pt;
                std::string point_error = state ? "" : "solve failed: " + sr.note;
                if (state) {
                    try {
                        pt = evaluate_point(*state, x);
                    } catch (const std::exception& e) {
                        point_error = e.what();
                    }
                }
                for (const auto& c : cs) {
                    ReportRow row = base_row(M, b.id, t, x, c);
                    if (!pt) {
                        row.status = RowStatus::Error;
                        row.note = point_error;
                        rep.rows.push_back(std::move(row));
                        continue;
                    }
                    row.X = pt->h.X;
                    row.Y = pt->h.Y;
                    BoundParams p;
                    p.n = M.n;
                    p.K = M.K;
                    p.t = t;
                    p.alpha = c.alpha;
                    p.eps = c.eps;
                    p.K_prime = c.K_prime;
                    p.R = c.R;
                    p.K_region = b.K_region;
                    p.has_drift = M.drift.active();
                    p.W = pt->h.W;
                    // The local constants assume the cutoff equals 1, i.e. the ball center x = 0.
                    if (bound_info(b.id).needs_R && x != 0.0) {
                        row.domain_ok = false;
                        row.status = RowStatus::Skipped;
                        row.note = "local bound evaluated at the ball center x = 0 only";
                        rep.rows.push_back(std::move(row));
                        continue;
                    }
                    try {
                        const MarginResult mr = check_inequality(b.id, p, pt->h.X, pt->h.Y);
                        row.gamma = mr.form.gamma;
                        row.a = mr.form.a;
                        row.c = mr.form.c;
                        row.note = mr.form.note;
                        row.domain_ok = mr.in_domain;
                        if (!mr.in_domain) {
                            row.status = RowStatus::Skipped;
                        } else {
                            row.margin = mr.margin;
                            const double tol = cfg.tol.value_or(1e-6 * (1.0 + std::fabs(row.c)));
                            row.status = row.margin >= -tol ? RowStatus::Pass : RowStatus::Fail;
                        }
                    } catch (const std::exception& e) {
                        row.status = RowStatus::Error;
                        row.note = e.what();
                    }
                    rep.rows.push_back(std::move(row));
                }
            }
        }

        for (const auto& spec : cfg.mc) {
            const std::vector<double>& mpts = spec.points.empty() ? pts : spec.points;
            for (double x : mpts) {
                McRow row;
                row.functional = std::string(to_string(spec.functional));
                row.clock = std::string(to_string(spec.clock));
                row.t = t;
                row.x = x;
                row.n_paths = spec.n_paths;
                row.seed = row_seed(cfg.seed, mc_index++);
                row.estimate = row.std_err = row.lhs = kNaN;
                try {
                    if (!state) throw std::runtime_error("solve failed: " + sr.note);
                    const Point pt = evaluate_point(*state, x);
                    const Clock clock = make_clock(spec.clock, spec.clock_params, t);
                    FunctionalOptions fo;
                    fo.alpha = spec.alpha;
                    fo.sim.scheme = spec.scheme;
                    const Estimate est = estimate_functional(M, cfg.datum, x, t, clock, spec.functional,
                                                             spec.n_paths, spec.dt, row.seed, fo);
                    row.estimate = est.value;
                    row.std_err = est.std_err;
                    row.dt = est.dt;
                    row.chart_escapes = est.chart_escapes;
                    bool pass = false;
                    switch (spec.functional) {
                        case Functional::J0_rhs:
                            row.lhs = pt.h.W;
                            pass = row.lhs <= est.value + 3.0 * est.std_err;
                            break;
                        case Functional::A1_rhs: {
                            ClockIntegralOptions co;
                            co.alpha = spec.alpha;
                            co.K0 = M.K;
                            const double g = *clock_integrals(clock, M.K, t, co).I_gamma;
                            row.lhs = (1.0 + g) * pt.h.W - pt.jet.L;
                            pass = row.lhs <= est.value + 3.0 * est.std_err;
                            break;
                        }
                        case Functional::G_rhs:
                            row.lhs = std::fabs(pt.jet.grad);
                            pass = row.lhs <= est.value + 3.0 * est.std_err;
                            break;
                        case Functional::XW:
                            row.lhs = pt.jet.value;
                            pass = std::fabs(row.lhs - est.value) <= 3.0 * est.std_err;
                            row.note = "two-sided";
                            break;
                    }
                    row.status = pass ? RowStatus::Pass : RowStatus::Fail;
                } catch (const std::exception& e) {
                    row.status = RowStatus::Error;
                    row.note = e.what();
                }
                rep.mc.push_back(std::move(row));
            }
        }
    }
    return rep;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["config"] = r.config;
    j["environment"] = r.environment;
    auto solves = nlohmann::json::array();
    for (const auto& s : r.solves)
        solves.push_back({{"t", s.t},
                          {"mass_initial", num(s.mass_initial)},
                          {"mass_final", num(s.mass_final)},
                          {"u_min", num(s.u_min)},
                          {"u_max", num(s.u_max)},
                          {"modes", s.modes},
                          {"steps", s.steps},
                          {"max_principle_ok", s.max_principle_ok},
                          {"positivity_ok", s.positivity_ok},
                          {"status", std::string(to_string(s.status))},
                          {"note", s.note}});
    j["solves"] = solves;
    auto rows = nlohmann::json::array();
    for (const auto& w : r.rows)
        rows.push_back({{"bound_id", w.bound_id},
                        {"family", w.family},
                        {"m", w.m},
                        {"n", w.n},
                        {"K", w.K},
                        {"t", w.t},
                        {"x", w.x},
                        {"alpha", opt_json(w.alpha)},
                        {"eps", opt_json(w.eps)},
                        {"K_prime", opt_json(w.K_prime)},
                        {"R", opt_json(w.R)},
                        {"X", num(w.X)},
                        {"Y", num(w.Y)},
                        {"gamma", num(w.gamma)},
                        {"a", num(w.a)},
                        {"c", num(w.c)},
                        {"margin", num(w.margin)},
                        {"domain_ok", w.domain_ok},
                        {"status", std::string(to_string(w.status))},
                        {"note", w.note}});
    j["rows"] = rows;
    auto mc = nlohmann::json::array();
    for (const auto& m : r.mc)
        mc.push_back({{"functional", m.functional},
                      {"clock", m.clock},
                      {"t", m.t},
                      {"x", m.x},
                      {"estimate", num(m.estimate)},
                      {"stderr", num(m.std_err)},
                      {"lhs", num(m.lhs)},
                      {"n_paths", m.n_paths},
                      {"dt", m.dt},
                      {"seed", m.seed},
                      {"chart_escapes", m.chart_escapes},
                      {"status", std::string(to_string(m.status))},
                      {"note", m.note}});
    j["mc"] = mc;
    j["summary"] = {{"pass", r.count(RowStatus::Pass)},
                    {"fail", r.count(RowStatus::Fail)},
                    {"skipped", r.count(RowStatus::Skipped)},
                    {"error", r.count(RowStatus::Error)}};
    return j;
}

Report report_from_json(const nlohmann::json& j) {
    Report r;
    r.name = j.at("name").get<std::string>();
    r.config = j.value("config", nlohmann::json::object());
    r.environment = j.value("environment", nlohmann::json::object());
    for (const auto& s : j.value("solves", nlohmann::json::array())) {
        SolveRow w;
        w.t = s.at("t").get<double>();
        w.mass_initial = nan_double(s, "mass_initial");
        w.mass_final = nan_double(s, "mass_final");
        w.u_min = nan_double(s, "u_min");
        w.u_max = nan_double(s, "u_max");
        w.modes = s.value("modes", std::size_t{0});
        w.steps = s.value("steps", std::size_t{0});
        w.max_principle_ok = s.value("max_principle_ok", true);
        w.positivity_ok = s.value("positivity_ok", true);
        w.status = parse_row_status(s.at("status").get<std::string>());
        w.note = s.value("note", std::string());
        r.solves.push_back(std::move(w));
    }
    for (const auto& s : j.value("rows", nlohmann::json::array())) {
        ReportRow w;
        w.bound_id = s.at("bound_id").get<std::string>();
        w.family = s.at("family").get<std::string>();
        w.m = s.at("m").get<int>();
        w.n = s.at("n").get<double>();
        w.K = s.at("K").get<double>();
        w.t = s.at("t").get<double>();
        w.x = s.at("x").get<double>();
        w.alpha = opt_double(s, "alpha");
        w.eps = opt_double(s, "eps");
        w.K_prime = opt_double(s, "K_prime");
        w.R = opt_double(s, "R");
        w.X = nan_double(s, "X");
        w.Y = nan_double(s, "Y");
        w.gamma = nan_double(s, "gamma");
        w.a = nan_double(s, "a");
        w.c = nan_double(s, "c");
        w.margin = nan_double(s, "margin");
        w.domain_ok = s.at("domain_ok").get<bool>();
        w.status = parse_row_status(s.at("status").get<std::string>());
        w.note = s.value("note", std::string());
        r.rows.push_back(std::move(w));
    }
    for (const auto& s : j.value("mc", nlohmann::json::array())) {
        McRow w;
        w.functional = s.at("functional").get<std::string>();
        w.clock = s.at("clock").get<std::string>();
        w.t = s.at("t").get<double>();
        w.x = s.at("x").get<double>();
        w.estimate = nan_double(s, "estimate");
        w.std_err = nan_double(s, "stderr");
        w.lhs = nan_double(s, "lhs");
        w.n_paths = s.at("n_paths").get<std::size_t>();
        w.dt = s.at("dt").get<double>();
        w.seed = s.at("seed").get<std::uint64_t>();
        w.chart_escapes = s.value("chart_escapes", std::size_t{0});
        w.status = parse_row_status(s.at("status").get<std::string>());
        w.note = s.value("note", std::string());
        r.mc.push_back(std::move(w));
    }
    return r;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format: " + std::string(name));
}

void write_rows_csv(const Report& r, std::ostream& os) {
    os << kReportCsvHeader << '\n';
    for (const auto& w : r.rows) {
        os << csv_field(w.bound_id) << ',' << w.family << ',' << w.m << ',' << fmt(w.n) << ',' << fmt(w.K) << ','
           << fmt(w.t) << ',' << fmt(w.x) << ',' << fmt(w.alpha) << ',' << fmt(w.eps) << ',' << fmt(w.X) << ','
           << fmt(w.Y) << ',' << fmt(w.gamma) << ',' << fmt(w.a) << ',' << fmt(w.c) << ',' << fmt(w.margin) << ','
           << (w.domain_ok ? "true" : "false") << '\n';
    }
}

void write_plot_csv(const Report& r, std::ostream& os) {
    os << "bound_id,alpha,eps,K_prime,R,t,min_margin,points\n";
    struct Cell {
        double min_margin = kNaN;
        std::size_t points = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, Cell>>> series;
    for (const auto& w : r.rows) {
        const std::string key = csv_field(w.bound_id) + ',' + fmt(w.alpha) + ',' + fmt(w.eps) + ',' +
                                fmt(w.K_prime) + ',' + fmt(w.R);
        auto [it, fresh] = series.try_emplace(key);
        if (fresh) order.push_back(key);
        auto& cells = it->second;
        if (cells.empty() || cells.back().first != w.t) cells.emplace_back(w.t, Cell{});
        Cell& c = cells.back().second;
        if (!w.domain_ok || std::isnan(w.margin)) continue;
        if (std::isnan(c.min_margin) || w.margin < c.min_margin) c.min_margin = w.margin;
        ++c.points;
    }
    for (const auto& key : order)
        for (const auto& [t, c] : series[key])
            os << key << ',' << fmt(t) << ',' << fmt(c.min_margin) << ',' << c.points << '\n';
}

void write_mc_csv(const Report& r, std::ostream& os) {
    os << "functional,clock,t,x,estimate,stderr,lhs,n_paths,dt,seed,status\n";
    for (const auto& m : r.mc)
        os << m.functional << ',' << m.clock << ',' << fmt(m.t) << ',' << fmt(m.x) << ',' << fmt(m.estimate) << ','
           << fmt(m.std_err) << ',' << fmt(m.lhs) << ',' << m.n_paths << ',' << fmt(m.dt) << ',' << m.seed << ','
           << to_string(m.status) << '\n';
}

std::vector<std::filesystem::path> emit_report(const Report& r, ReportFormat format,
                                               const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& path, auto&& body) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        body(os);
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + path.string());
        written.push_back(path);
    };
    if (format == ReportFormat::Json) {
        write(dir / (r.name + ".json"), [&](std::ostream& os) { os << to_json(r).dump(2) << '\n'; });
    } else {
        write(dir / (r.name + ".csv"), [&](std::ostream& os) { write_rows_csv(r, os); });
        if (!r.mc.empty()) write(dir / (r.name + "_mc.csv"), [&](std::ostream& os) { write_mc_csv(r, os); });
    }
    write(dir / (r.name + "_plot.csv"), [&](std::ostream& os) { write_plot_csv(r, os); });
    return written;
}

}  // namespace liyau
