#pragma once

#include <span>
#include <vector>

namespace gpb {

double mean(std::span<const double> x);
/// Sample standard deviation with the n - 1 denominator.
double sample_sd(std::span<const double> x);
/// Standard error of the mean, sample_sd / sqrt(n).
double standard_error(std::span<const double> x);

/// Linear-interpolation quantile (the default "type 7" rule), q in [0, 1].
double quantile(std::vector<double> x, double q);
double median(std::vector<double> x);
double iqr(std::vector<double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (Stephens' effective-size correction).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace gpb
