#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "liyau/errors.hpp"
#include "liyau/quadrature.hpp"
#include "liyau/special.hpp"

using namespace liyau;

TEST_CASE("xcoth and xcot are 1 at the origin and match the direct forms away from it") {
    CHECK(xcoth(0.0) == 1.0);
    CHECK(xcot(0.0) == 1.0);
    CHECK(xcoth(1e-9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(xcot(1e-9) == doctest::Approx(1.0).epsilon(1e-15));
    for (double x : {0.01, 0.3, 1.0, 2.5, 7.0}) {
        CHECK(xcoth(x) == doctest::Approx(x / std::tanh(x)).epsilon(1e-14));
        CHECK(xcoth(-x) == doctest::Approx(xcoth(x)).epsilon(1e-15));
    }
    for (double x : {0.01, 0.3, 1.0, 1.5, 3.0}) CHECK(xcot(x) == doctest::Approx(x * std::cos(x) / std::sin(x)).epsilon(1e-13));
    CHECK(xcoth(800.0) == doctest::Approx(800.0));
    CHECK(coth(1.0) == doctest::Approx(1.3130352854993312).epsilon(1e-15));
}

TEST_CASE("log_int_exp covers the flat, growing and decaying cases without overflow") {
    CHECK(log_int_exp(0.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(log_int_exp(1.0, 2.0) == doctest::Approx(std::log(std::exp(2.0) - 1.0)).epsilon(1e-14));
    CHECK(log_int_exp(-1.0, 2.0) == doctest::Approx(std::log(1.0 - std::exp(-2.0))).epsilon(1e-14));
    CHECK(log_int_exp(1e-12, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    const double big = log_int_exp(800.0, 1.0);
    CHECK(std::isfinite(big));
    CHECK(big == doctest::Approx(800.0 - std::log(800.0)).epsilon(1e-14));
    CHECK(log_int_exp(-800.0, 1.0) == doctest::Approx(-std::log(800.0)).epsilon(1e-14));
    CHECK(log_int_exp(3.0, 0.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("compensated summation recovers terms lost to cancellation") {
    CompensatedSum s;
    for (double v : {1.0, 1e100, 1.0, -1e100}) s.add(v);
    CHECK(s.value() == 2.0);
    const std::vector<double> v = {0.1, 0.2, 0.3};
    CHECK(compensated_sum(v) == doctest::Approx(0.6).epsilon(1e-16));
}

TEST_CASE("mean_stderr uses the sample standard deviation") {
    const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
    const MeanStderr m = mean_stderr(v);
    CHECK(m.mean == 2.5);
    CHECK(m.std_err == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-15));
    const std::vector<double> same(10, 3.0);
    CHECK(mean_stderr(same).std_err == 0.0);
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi).value == doctest::Approx(2.0).epsilon(1e-13));
    // Integrable endpoint singularity: the rule never samples x = 0.
    CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return x; }, 1.0, 1.0).value == 0.0);
    QuadOptions tight;
    tight.max_evals = 100;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight), NumericalError);
}
