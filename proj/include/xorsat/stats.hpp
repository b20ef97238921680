#pragma once

#include <span>
#include <vector>

namespace xorsat {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    std::size_t points = 0;
};

/// Ordinary least squares of y on x. Throws std::invalid_argument with
/// fewer than two distinct x.
LinearFit ols(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> v);
double median(std::vector<double> v);

}  // namespace xorsat
