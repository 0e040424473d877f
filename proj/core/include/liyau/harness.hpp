#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "liyau/bounds.hpp"
#include "liyau/clock.hpp"
#include "liyau/geometry.hpp"
#include "liyau/heatflow.hpp"
#include "liyau/stochastic.hpp"

namespace liyau {

// One bound with its parameter grid; empty lists mean "not swept".
struct BoundSpec {
    std::string id;
    std::vector<double> alpha;
    std::vector<double> eps;
    std::vector<double> K_prime;
    std::vector<double> R;
    double K_region = 0.0;
};

struct McSpec {
    Functional functional = Functional::J0_rhs;
    ClockFamily clock = ClockFamily::Linear;
    ClockParams clock_params;
    double alpha = 2.0;
    std::vector<double> points;
    std::size_t n_paths = 10000;
    double dt = 1e-3;
    ReflectionScheme scheme = ReflectionScheme::BridgeCorrected;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModelManifold manifold;
    InitialDatum datum = InitialDatum::constant(1.0);
    std::vector<double> times;
    // Evaluation points; when empty, n_points nodes are taken evenly from the solver grid.
    std::vector<double> points;
    int n_points = 17;
    int grid_size = 513;
    // Spectral unless the family has no closed-form modes (then Crank-Nicolson).
    Scheme scheme = Scheme::Spectral;
    std::vector<BoundSpec> bounds;
    std::vector<McSpec> mc;
    std::uint64_t seed = 1;
    // Absolute slack of the margin check; default 1e-6 (1 + |c|) per row.
    std::optional<double> tol;
    std::string out_dir = ".";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

enum class RowStatus { Pass, Fail, Skipped, Error };
std::string_view to_string(RowStatus s);
RowStatus parse_row_status(std::string_view s);

struct ReportRow {
    std::string bound_id;
    std::string family;
    int m = 1;
    double n = 1.0;
    double K = 0.0;
    double t = 0.0;
    double x = 0.0;
    std::optional<double> alpha;
    std::optional<double> eps;
    std::optional<double> K_prime;
    std::optional<double> R;
    double X = 0.0;
    double Y = 0.0;
    double gamma = 0.0;
    double a = 0.0;
    double c = 0.0;
    double margin = 0.0;
    bool domain_ok = true;
    RowStatus status = RowStatus::Pass;
    std::string note;
};

struct McRow {
    std::string functional;
    std::string clock;
    double t = 0.0;
    double x = 0.0;
    double estimate = 0.0;
    double std_err = 0.0;
    double lhs = 0.0;  // deterministic side compared against estimate + 3 SE
    std::size_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::size_t chart_escapes = 0;
    RowStatus status = RowStatus::Pass;
    std::string note;
};

struct SolveRow {
    double t = 0.0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    std::size_t modes = 0;
    std::size_t steps = 0;
    bool max_principle_ok = true;
    bool positivity_ok = true;
    RowStatus status = RowStatus::Pass;
    std::string note;
};

struct Report {
    std::string name;
    nlohmann::json config;
    nlohmann::json environment;
    std::vector<SolveRow> solves;
    std::vector<ReportRow> rows;
    std::vector<McRow> mc;

    std::size_t count(RowStatus s) const;
    bool ok() const;
    // Smallest margin among evaluated rows of a bound, NaN when none was evaluated.
    double worst_margin(std::string_view bound_id) const;
};

Report run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view name);

inline constexpr const char* kReportCsvHeader =
    "bound_id,family,m,n,K,t,x,alpha,eps,X,Y,gamma,a,c,margin,domain_ok";

void write_rows_csv(const Report& r, std::ostream& os);
// Margin against t per bound and parameter set, minimized over x.
void write_plot_csv(const Report& r, std::ostream& os);
void write_mc_csv(const Report& r, std::ostream& os);

// Writes <name>.csv (or .json), <name>_plot.csv and, when present, <name>_mc.csv
// into dir. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const Report& r, ReportFormat format,
                                               const std::filesystem::path& dir);

}  // namespace liyau
