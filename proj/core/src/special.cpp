#include "liyau/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace liyau {

double xcoth(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    if (ax > 20.0) return ax;  // coth = 1 to double precision
    return x / std::tanh(x);
}

double xcot(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
    }
    return x * std::cos(x) / std::sin(x);
}

double coth(double x) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    return xcoth(x) / x;
}

double log_int_exp(double k, double T) {
    if (T < 0.0) throw std::invalid_argument("log_int_exp: T must be >= 0");
    if (T == 0.0) return -std::numeric_limits<double>::infinity();
    const double kT = k * T;
    if (std::fabs(kT) < 1e-8) return std::log(T) + std::log1p(kT / 2.0);
    if (k > 0.0) return kT + std::log(-std::expm1(-kT)) - std::log(k);
    return std::log(-std::expm1(kT)) - std::log(-k);
}

void CompensatedSum::add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> values) {
    CompensatedSum s;
    for (double v : values) s.add(v);
    return s.value();
}

MeanStderr mean_stderr(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("mean_stderr: need at least 2 samples");
    const double mean = compensated_sum(values) / static_cast<double>(n);
    CompensatedSum ss;
    for (double v : values) {
        const double d = v - mean;
        ss.add(d * d);
    }
    const double var = ss.value() / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace liyau
