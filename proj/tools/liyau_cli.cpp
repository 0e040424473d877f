#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "liyau/bounds.hpp"
#include "liyau/clock.hpp"
#include "liyau/geometry.hpp"
#include "liyau/harness.hpp"
#include "liyau/heatflow.hpp"
#include "liyau/stochastic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    std::optional<double> tol;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
    auto* opt = app->add_option("--config", c.config, "JSON experiment config");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "Base seed (overrides the config)");
    app->add_option("--out", c.out, "Output directory (or file for single results)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--tol", c.tol, "Absolute margin slack (default 1e-6 (1 + |c|))")->check(CLI::PositiveNumber);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void apply_overrides(json& j, const Common& c) {
    if (c.seed) j["seed"] = *c.seed;
    if (c.tol) j["tol"] = *c.tol;
    if (!c.out.empty()) j["out_dir"] = c.out;
}

void print_summary(const liyau::Report& r, const std::vector<fs::path>& files) {
    using liyau::RowStatus;
    std::cout << r.name << ": pass=" << r.count(RowStatus::Pass) << " fail=" << r.count(RowStatus::Fail)
              << " skipped=" << r.count(RowStatus::Skipped) << " error=" << r.count(RowStatus::Error) << '\n';
    for (const auto& row : r.rows)
        if (row.status == RowStatus::Fail || row.status == RowStatus::Error)
            std::cout << "  " << liyau::to_string(row.status) << ' ' << row.bound_id << " t=" << row.t
                      << " x=" << row.x << " margin=" << row.margin << (row.note.empty() ? "" : " " + row.note)
                      << '\n';
    for (const auto& m : r.mc)
        if (m.status == RowStatus::Fail || m.status == RowStatus::Error)
            std::cout << "  " << liyau::to_string(m.status) << ' ' << m.functional << " t=" << m.t << " x=" << m.x
                      << " lhs=" << m.lhs << " estimate=" << m.estimate << " stderr=" << m.std_err << '\n';
    for (const auto& f : files) std::cout << "  wrote " << f.string() << '\n';
}

int run_one(const json& j, const Common& c) {
    const liyau::ExperimentConfig cfg = liyau::config_from_json(j);
    const liyau::Report rep = liyau::run_experiment(cfg);
    const auto files = liyau::emit_report(rep, liyau::parse_report_format(c.format), cfg.out_dir);
    print_summary(rep, files);
    return rep.ok() ? 0 : 1;
}

int cmd_verify(const Common& c) {
    json j = read_json(c.config);
    apply_overrides(j, c);
    return run_one(j, c);
}

// Expands "manifolds" and "data" lists into one experiment per combination.
int cmd_sweep(const Common& c) {
    json base = read_json(c.config);
    apply_overrides(base, c);
    json manifolds = base.contains("manifolds") ? base["manifolds"] : json::array({base.at("manifold")});
    json data = base.contains("data") ? base["data"] : json::array({base.value("datum", json{{"kind", "constant"}, {"value", 1.0}})});
    base.erase("manifolds");
    base.erase("data");
    const std::string stem = base.value("name", std::string("sweep"));
    int status = 0;
    std::size_t index = 0;
    for (const auto& m : manifolds) {
        for (const auto& d : data) {
            json j = base;
            j["manifold"] = m;
            j["datum"] = d;
            j["name"] = stem + "_" + m.at("family").get<std::string>() + std::to_string(m.value("m", 1)) + "_" +
                        std::to_string(index++);
            status |= run_one(j, c);
        }
    }
    return status;
}

struct McArgs {
    std::string family = "IntervalNeumann";
    int m = 1;
    std::optional<double> n;
    std::optional<double> K;
    std::optional<double> length;
    std::string drift = "none";
    std::string datum = R"({"kind":"constant","value":1})";
    std::string functional = "XW";
    std::string clock = "linear";
    double clock_K = 0.0;
    double alpha = 2.0;
    double x = 0.5;
    double t = 1.0;
    double p = 1.0;
    std::size_t paths = 10000;
    double dt = 1e-3;
    std::string scheme = "bridge";
};

int cmd_mc(const Common& c, const McArgs& a) {
    if (!c.config.empty()) {
        json j = read_json(c.config);
        apply_overrides(j, c);
        j["bounds"] = json::array();
        return run_one(j, c);
    }
    const liyau::ModelManifold M =
        liyau::make_model_manifold(liyau::parse_family(a.family), a.m, a.n.value_or(a.m), a.drift, a.K, a.length);
    const std::uint64_t seed = c.seed.value_or(1);
    liyau::SimOptions sim;
    sim.scheme = liyau::parse_reflection_scheme(a.scheme);
    liyau::Estimate e;
    if (a.functional == "local_time_mean") {
        e = liyau::local_time_mean(M, a.x, a.t, a.paths, a.dt, seed, sim);
    } else if (a.functional == "local_time_moment") {
        e = liyau::local_time_moment(M, a.x, a.t, a.p, a.paths, a.dt, seed, sim);
    } else {
        const liyau::InitialDatum u0 = liyau::datum_from_json(json::parse(a.datum));
        liyau::ClockParams cp;
        cp.alpha = a.alpha;
        cp.K = a.clock_K;
        const liyau::Clock clock = liyau::make_clock(liyau::parse_clock_family(a.clock), cp, a.t);
        liyau::FunctionalOptions fo;
        fo.alpha = a.alpha;
        fo.sim = sim;
        e = liyau::estimate_functional(M, u0, a.x, a.t, clock, liyau::parse_functional(a.functional), a.paths, a.dt,
                                       seed, fo);
    }
    std::ofstream file;
    std::ostream& os = c.out.empty() ? std::cout : (file.open(c.out), file);
    if (!os) throw std::runtime_error("cannot write " + c.out);
    if (c.format == "json") {
        os << liyau::to_json(e).dump(2) << '\n';
    } else {
        os.precision(17);
        os << "functional,value,stderr,n_paths,dt,seed,chart_escapes\n"
           << e.functional_id << ',' << e.value << ',' << e.std_err << ',' << e.n_paths << ',' << e.dt << ','
           << e.seed << ',' << e.chart_escapes << '\n';
    }
    return 0;
}

struct BoundArgs {
    std::string id;
    double n = 2.0;
    double K = 0.0;
    double t = 1.0;
    std::optional<double> alpha, eps, K_prime, R, X, Y, W;
    double K_region = 0.0;
    bool drift = false;
};

int cmd_bounds(const Common& c, const BoundArgs& a) {
    liyau::BoundParams p;
    p.n = a.n;
    p.K = a.K;
    p.t = a.t;
    p.alpha = a.alpha;
    p.eps = a.eps;
    p.K_prime = a.K_prime;
    p.R = a.R;
    p.K_region = a.K_region;
    p.has_drift = a.drift;
    p.X = a.X;
    p.Y = a.Y;
    p.W = a.W;
    json out = liyau::to_json(liyau::eval_bound(a.id, p), p);
    int status = 0;
    if (a.X && a.Y) {
        const liyau::MarginResult r = liyau::check_inequality(a.id, p, *a.X, *a.Y);
        const double tol = c.tol.value_or(1e-6 * (1.0 + std::fabs(r.form.c)));
        out["margin"] = r.in_domain ? json(r.margin) : json(nullptr);
        out["pass"] = r.in_domain && r.margin >= -tol;
        if (r.in_domain && r.margin < -tol) status = 1;
    }
    if (c.format == "json") {
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout.precision(17);
        std::cout << "bound_id,gamma,a,c,domain_ok,margin\n"
                  << out["bound_id"].get<std::string>() << ',' << out["gamma"] << ',' << out["a"] << ','
                  << out["c"] << ',' << (out["domain_ok"].get<bool>() ? "true" : "false") << ','
                  << (out.contains("margin") ? out["margin"].dump() : "") << '\n';
    }
    return status;
}

struct KernelArgs {
    std::string family = "EuclideanLine";
    int m = 1;
    std::optional<double> length;
    double t = 1.0;
    double x = 0.0;
    double y = 0.0;
    int grid = 0;
};

int cmd_kernel(const Common& c, const KernelArgs& a) {
    const liyau::ModelManifold M =
        liyau::make_model_manifold(liyau::parse_family(a.family), a.m, a.m, "none", std::nullopt, a.length);
    std::ofstream file;
    std::ostream& os = c.out.empty() ? std::cout : (file.open(c.out), file);
    if (!os) throw std::runtime_error("cannot write " + c.out);
    os.precision(17);
    if (a.grid > 0) {
        const auto grid = liyau::solver_grid(M, a.grid, liyau::Scheme::Spectral);
        if (c.format == "json") {
            json j = {{"family", a.family}, {"t", a.t}, {"y", a.y}, {"x", json::array()}, {"p", json::array()}};
            for (double x : grid) {
                j["x"].push_back(x);
                j["p"].push_back(liyau::exact_kernel(M, a.t, x, a.y));
            }
            os << j.dump(2) << '\n';
        } else {
            os << "x,p\n";
            for (double x : grid) os << x << ',' << liyau::exact_kernel(M, a.t, x, a.y) << '\n';
        }
        return 0;
    }
    const double p = liyau::exact_kernel(M, a.t, a.x, a.y);
    if (c.format == "json")
        os << json{{"family", a.family}, {"t", a.t}, {"x", a.x}, {"y", a.y}, {"p", p}}.dump(2) << '\n';
    else
        os << "x,y,t,p\n" << a.x << ',' << a.y << ',' << a.t << ',' << p << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient estimates for the Neumann heat flow on model manifolds"};
    app.require_subcommand(1);

    Common cv, cs, cm, cb, ck;
    auto* verify = app.add_subcommand("verify", "Run a bound suite from a config");
    add_common(verify, cv, true);
    auto* sweep = app.add_subcommand("sweep", "Run a config over lists of manifolds and initial data");
    add_common(sweep, cs, true);

    McArgs ma;
    auto* mc = app.add_subcommand("mc", "Monte-Carlo estimators (config or single estimate)");
    add_common(mc, cm, false);
    mc->add_option("--family", ma.family, "Manifold family, e.g. HalfLineNeumann");
    mc->add_option("--m", ma.m, "Dimension m");
    mc->add_option("--n", ma.n, "Effective dimension n (defaults to m)");
    mc->add_option("--K", ma.K, "Curvature bound override");
    mc->add_option("--length", ma.length, "Interval length or ball radius");
    mc->add_option("--drift", ma.drift, "Drift, none or constant:c");
    mc->add_option("--datum", ma.datum, "Initial datum as JSON");
    mc->add_option("--functional", ma.functional)
        ->check(CLI::IsMember({"J0_rhs", "A1_rhs", "G_rhs", "XW", "local_time_mean", "local_time_moment"}));
    mc->add_option("--clock", ma.clock, "Clock family");
    mc->add_option("--clock-K", ma.clock_K, "K parameter of the clock");
    mc->add_option("--alpha", ma.alpha, "alpha for A1_rhs and the exp clocks");
    mc->add_option("--x", ma.x, "Start point");
    mc->add_option("--t", ma.t, "Horizon");
    mc->add_option("--p", ma.p, "Exponent of the local-time moment");
    mc->add_option("--paths", ma.paths, "Number of paths");
    mc->add_option("--dt", ma.dt, "Time step");
    mc->add_option("--scheme", ma.scheme, "Reflection step")->check(CLI::IsMember({"bridge", "projection"}));

    BoundArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Evaluate one bound in normal form");
    add_common(bounds, cb, false);
    bounds->add_option("--id", ba.id, "Bound id, e.g. LY1, NE, G3")->required();
    bounds->add_option("--n", ba.n, "Effective dimension");
    bounds->add_option("--K", ba.K, "Curvature-dimension constant");
    bounds->add_option("--t", ba.t, "Time");
    bounds->add_option("--alpha", ba.alpha, "alpha");
    bounds->add_option("--eps", ba.eps, "epsilon");
    bounds->add_option("--K-prime", ba.K_prime, "K' (A2')");
    bounds->add_option("--R", ba.R, "Ball radius (G3, D4)");
    bounds->add_option("--K-region", ba.K_region, "Curvature bound on the ball (G3, D4)");
    bounds->add_option("--X", ba.X, "X = |grad u|^2/u^2; prints the margin when X and Y are given");
    bounds->add_option("--Y", ba.Y, "Y = Lu/u");
    bounds->add_option("--W", ba.W, "W = |grad u|^2/u (Yau)");
    bounds->add_flag("--drift", ba.drift, "The model carries a drift");

    KernelArgs ka;
    auto* kernel = app.add_subcommand("kernel", "Exact heat kernels");
    add_common(kernel, ck, false);
    kernel->add_option("--family", ka.family, "Manifold family");
    kernel->add_option("--m", ka.m, "Dimension m");
    kernel->add_option("--length", ka.length, "Interval length");
    kernel->add_option("--t", ka.t, "Time");
    kernel->add_option("--x", ka.x, "First point");
    kernel->add_option("--y", ka.y, "Second point");
    kernel->add_option("--grid", ka.grid, "Tabulate p_t(., y) on the solver grid of this size");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*verify) return cmd_verify(cv);
        if (*sweep) return cmd_sweep(cs);
        if (*mc) return cmd_mc(cm, ma);
        if (*bounds) return cmd_bounds(cb, ba);
        if (*kernel) return cmd_kernel(ck, ka);
    } catch (const std::exception& e) {
        std::cerr << "liyau: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
