#pragma once

#include <cstddef>
#include <span>

namespace liyau {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// x*coth(x) and x*cot(x), both equal to 1 at x = 0.
double xcoth(double x);
double xcot(double x);

double coth(double x);

// log of  int_0^T exp(k r) dr  for T >= 0 (returns -inf at T = 0).
double log_int_exp(double k, double T);

// Neumaier compensated summation; order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

struct MeanStderr {
    double mean = 0.0;
    double std_err = 0.0;
};

// Two-pass sample mean and standard error (sample std / sqrt(N)), N >= 2.
MeanStderr mean_stderr(std::span<const double> values);

}  // namespace liyau
