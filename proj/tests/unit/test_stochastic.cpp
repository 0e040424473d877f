#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "liyau/clock.hpp"
#include "liyau/heatflow.hpp"
#include "liyau/special.hpp"
#include "liyau/stochastic.hpp"

using namespace liyau;

namespace {

bool within(const Estimate& e, double exact, double k = 3.0) {
    return std::fabs(e.value - exact) <= k * e.std_err + 1e-12 * (1.0 + std::fabs(exact));
}

}  // namespace

TEST_CASE("paths stay in the process domain and accrue local time only at boundaries") {
    const auto circle = make_model_manifold(Family::Circle, 1, 1.0);
    const PathSample c = simulate_reflected_path(circle, 1.0, 1.0, 1e-3, 7);
    CHECK(c.times.size() == 1001);
    for (double d : c.dL) CHECK(d == 0.0);
    for (double x : c.positions) CHECK((x >= 0.0 && x < 2.0 * kPi));

    const auto half = make_model_manifold(Family::HalfLineNeumann, 1, 1.0);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const PathSample h = simulate_reflected_path(half, 0.0, 1.0, 1e-3, 11, {}, i);
        for (double x : h.positions) CHECK(x >= 0.0);
    }

    const auto S2 = make_model_manifold(Family::SphereRadial, 2, 2.0);
    const PathSample s = simulate_reflected_path(S2, 1.0, 2.0, 1e-3, 3);
    for (double x : s.positions) CHECK((x >= 0.0 && x <= kPi));
    for (double d : s.dL) CHECK(d == 0.0);
}

TEST_CASE("projection scheme: local time is exactly the overshoot") {
    const auto half = make_model_manifold(Family::HalfLineNeumann, 1, 1.0);
    SimOptions o;
    o.scheme = ReflectionScheme::Projection;
    std::size_t contacts = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const PathSample p = simulate_reflected_path(half, 0.05, 1.0, 1e-3, 5, o, i);
        for (std::size_t k = 0; k < p.dL.size(); ++k) {
            if (p.positions[k + 1] > 0.0) CHECK(p.dL[k] == 0.0);
            if (p.dL[k] > 0.0) {
                CHECK(p.positions[k + 1] == 0.0);
                ++contacts;
            }
        }
    }
    CHECK(contacts > 0);

    const auto I = make_model_manifold(Family::IntervalNeumann, 1, 1.0, "none", std::nullopt, 0.3);
    const PathSample q = simulate_reflected_path(I, 0.15, 1.0, 1e-3, 9, o);
    for (std::size_t k = 0; k < q.dL.size(); ++k) {
        if (q.dL_upper[k] > 0.0) CHECK(q.positions[k + 1] == 0.3);
        if (q.dL[k] > q.dL_upper[k]) CHECK(q.positions[k + 1] == 0.0);
    }
}

TEST_CASE("paths are reproducible from (seed, index)") {
    const auto I = make_model_manifold(Family::IntervalNeumann, 1, 1.0);
    const PathSample a = simulate_reflected_path(I, 0.5, 0.5, 1e-3, 42, {}, 3);
    const PathSample b = simulate_reflected_path(I, 0.5, 0.5, 1e-3, 42, {}, 3);
    const PathSample c = simulate_reflected_path(I, 0.5, 0.5, 1e-3, 42, {}, 4);
    CHECK(a.positions == b.positions);
    CHECK(a.dL == b.dL);
    CHECK(a.positions != c.positions);

    const auto circle = make_model_manifold(Family::Circle, 1, 1.0);
    const Clock lin(ClockFamily::Linear, {}, 0.5);
    const auto u0 = InitialDatum::modes(1.0, {{1, 0.5}});
    const Estimate e1 = estimate_functional(circle, u0, 0.3, 0.5, lin, Functional::XW, 500, 1e-2, 9);
    const Estimate e2 = estimate_functional(circle, u0, 0.3, 0.5, lin, Functional::XW, 500, 1e-2, 9);
    CHECK(e1.value == e2.value);
    CHECK(e1.std_err == e2.std_err);
}

TEST_CASE("path weights") {
    const auto circle = make_model_manifold(Family::Circle, 1, 1.0);
    const PathSample c = simulate_reflected_path(circle, 0.0, 1.0, 1e-3, 1);
    CHECK(path_weight(c, Field::constant(0.0), Field::constant(0.0), 1.0) == 1.0);
    for (double s : {0.25, 0.5, 1.0})
        CHECK(path_weight(c, Field::constant(0.5), Field::constant(0.0), s) == doctest::Approx(std::exp(-s)).epsilon(1e-12));

    const auto half = make_model_manifold(Family::HalfLineNeumann, 1, 1.0);
    const PathSample h = simulate_reflected_path(half, 0.0, 1.0, 1e-3, 2);
    for (double s : {0.3, 1.0}) {
        double L = 0.0;
        for (std::size_t k = 0; k < h.dL.size(); ++k)
            if (h.times[k + 1] <= s + 1e-12) L += h.dL[k];
        CHECK(L > 0.0);
        CHECK(path_weight(h, Field::constant(0.0), Field::constant(1.0), s) == doctest::Approx(std::exp(-2.0 * L)).epsilon(1e-12));
    }
}

TEST_CASE("deterministic functionals reproduce their closed forms") {
    // u0 = 1, K = 0, no weight: J0 = (n/2) int l'^2 = n/(2t) on every path.
    const Clock lin(ClockFamily::Linear, {}, 0.8);
    const auto one = InitialDatum::constant(1.0);
    for (auto M : {make_model_manifold(Family::Circle, 1, 1.0), make_model_manifold(Family::HalfLineNeumann, 1, 3.0)}) {
        const Estimate j0 = estimate_functional(M, one, 0.4, 0.8, lin, Functional::J0_rhs, 200, 1e-2, 4);
        CHECK(j0.value == doctest::Approx(M.n / 1.6).epsilon(1e-12));
        CHECK(j0.std_err < 1e-12);
        const Estimate g = estimate_functional(M, one, 0.4, 0.8, lin, Functional::G_rhs, 200, 1e-2, 4);
        CHECK(g.value == 0.0);
    }
    const auto I = make_model_manifold(Family::IntervalNeumann, 1, 1.0);
    CHECK_THROWS_AS(estimate_functional(I, one, 0.4, 0.8, lin, Functional::XW, 1, 1e-2, 4), std::invalid_argument);
}

TEST_CASE("E[u0(X_t)] matches the heat solution on every model") {
    struct Case {
        ModelManifold M;
        InitialDatum u0;
        double x;
        Scheme scheme;
        int grid;
    };
    const std::vector<Case> cases = {
        {make_model_manifold(Family::Circle, 1, 1.0), InitialDatum::modes(1.0, {{1, 0.5}}), kPi / 4, Scheme::Spectral, 512},
        {make_model_manifold(Family::IntervalNeumann, 1, 1.0, "none", std::nullopt, kPi), InitialDatum::modes(1.0, {{1, 0.5}}), 0.0, Scheme::Spectral, 65},
        {make_model_manifold(Family::HalfLineNeumann, 1, 1.0), InitialDatum::modes(1.0, {{1, 0.5}}), 0.0, Scheme::Spectral, 1025},
        {make_model_manifold(Family::SphereRadial, 2, 2.0), InitialDatum::modes(1.0, {{1, 0.5}}), 1.0, Scheme::Spectral, 0},
        {make_model_manifold(Family::HyperbolicRadial, 2, 2.0), InitialDatum::modes(2.0, {{1, 1.0}}), 1.5, Scheme::CrankNicolsonFD, 201},
    };
    const double t = 0.5;
    const Clock lin(ClockFamily::Linear, {}, t);
    for (const Case& c : cases) {
        CAPTURE(to_string(c.M.family));
        double exact = 0.0;
        if (c.grid == 0) {
            exact = 1.0 + 0.5 * std::exp(-2.0 * t) * std::cos(c.x);
        } else {
            const HeatState s = solve_heat(c.M, c.u0, t, c.grid, c.scheme);
            exact = s.u[s.index_of(c.x)];
        }
        const Estimate e = estimate_functional(c.M, c.u0, c.x, t, lin, Functional::XW, 20000, 1e-3, 17);
        CHECK(e.n_paths == 20000);
        CHECK(within(e, exact));
    }
}

TEST_CASE("local-time exponential moments") {
    const auto half = make_model_manifold(Family::HalfLineNeumann, 1, 1.0);
    const Estimate zero = local_time_moment(half, 0.0, 1.0, 0.0, 100, 1e-2, 1);
    CHECK(zero.value == 1.0);
    CHECK(zero.std_err == 0.0);

    const Estimate far = local_time_moment(half, 10.0, 0.01, 1.0, 2000, 1e-3, 1);
    CHECK(std::fabs(far.value - 1.0) < 1e-6);

    const Estimate coarse = local_time_moment(half, 0.0, 1.0, 1.0, 20000, 2e-3, 5);
    const Estimate fine = local_time_moment(half, 0.0, 1.0, 1.0, 20000, 1e-3, 6);
    CHECK(std::isfinite(coarse.value));
    CHECK(coarse.value > 1.0);
    CHECK(std::fabs(coarse.value - fine.value) <= 3.0 * std::hypot(coarse.std_err, fine.std_err));

    // E[L_1] from 0 is 2/sqrt(pi) for the reflected process with generator d^2.
    const Estimate mean = local_time_mean(half, 0.0, 1.0, 20000, 1e-3, 8);
    CHECK(within(mean, 2.0 / std::sqrt(kPi)));
}

TEST_CASE("time change under a cutoff") {
    const auto circle = make_model_manifold(Family::Circle, 1, 1.0);
    const PathSample p = simulate_reflected_path(circle, 0.0, 1.0, 1e-3, 12);
    // A flat cutoff makes T the identity.
    const TimeChange id = time_change(p, cosine_cutoff(circle, 0.0, 1e8));
    CHECK_FALSE(id.exited);
    for (std::size_t k = 0; k < id.s.size(); k += 100) CHECK(id.T[k] == doctest::Approx(id.s[k]).epsilon(1e-12));
    for (double u : {0.1, 0.5, 0.9}) CHECK(id.tau(u) == doctest::Approx(u).epsilon(1e-9));

    const TimeChange tc = time_change(p, cosine_cutoff(circle, 0.0, 2.0));
    for (std::size_t k = 1; k < tc.s.size(); ++k) CHECK(tc.T[k] >= tc.s[k] - 1e-15);
    for (double u : {0.05, 0.2, 0.4}) CHECK(tc.tau(u) <= u + 1e-12);

    const auto S2 = make_model_manifold(Family::SphereRadial, 2, 2.0);
    const Cutoff f = cosine_cutoff(S2, 0.0, 1.0);
    CHECK(f.f(0.0) == 1.0);
    CHECK(f.Lf(0.0) == doctest::Approx(-2.0 * kPi * kPi / 4.0).epsilon(1e-14));
    CHECK(f.f(1.0) < 1e-15);
    CHECK_THROWS_AS(cosine_cutoff(S2, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cosine_cutoff(S2, 0.0, 4.0), std::invalid_argument);

    std::vector<double> grid;
    for (int i = 1; i < 200; ++i) grid.push_back(i * 0.005);
    const double Kf = cutoff_Kf(S2, f, grid);
    const TimeChangeCheck chk = time_change_moment(S2, 0.0, f, Kf, {0.05, 0.1, 0.2}, 4000, 1e-3, 21);
    for (std::size_t i = 0; i < chk.s.size(); ++i) {
        CHECK(chk.pass[i]);
        CHECK(chk.tau_le_s[i]);
    }
}

TEST_CASE("estimate serialization") {
    Estimate e;
    e.functional_id = "XW";
    e.value = 1.25;
    e.std_err = 0.01;
    e.n_paths = 100;
    e.dt = 1e-3;
    e.seed = 99;
    const Estimate back = estimate_from_json(to_json(e));
    CHECK(back.functional_id == "XW");
    CHECK(back.value == 1.25);
    CHECK(back.std_err == 0.01);
    CHECK(back.n_paths == 100);
    CHECK(back.seed == 99);
    CHECK(to_json(e).contains("stderr"));
    for (Functional f : {Functional::J0_rhs, Functional::A1_rhs, Functional::G_rhs, Functional::XW})
        CHECK(parse_functional(to_string(f)) == f);

    const auto half = make_model_manifold(Family::HalfLineNeumann, 1, 1.0);
    std::ostringstream os;
    write_path_csv(simulate_reflected_path(half, 0.0, 0.01, 1e-3, 1), os);
    CHECK(os.str().find('\n') != std::string::npos);
}
