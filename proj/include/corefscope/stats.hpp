#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace corefscope::stats {

inline constexpr double kAlpha05 = 0.05;
inline constexpr double kAlpha001 = 0.001;

/// Mean, minimum and maximum over the defined values of a column.
struct Aggregate {
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
  std::size_t n = 0;
  std::size_t n_absent = 0;
};

Aggregate aggregate(std::span<const std::optional<double>> values);

struct TestResult {
  double statistic = 0.0;  // t for t-tests, r for correlations
  double dof = 0.0;
  double p_value = 1.0;    // two-sided
  std::optional<double> effect_size;  // Cohen's d, t-tests only
  std::size_t n = 0;       // observations (both groups, or pairs)
  bool significant_05 = false;
  bool significant_001 = false;
};

/// Two-sided p-value of a Student t statistic, via the regularized incomplete
/// beta function: p = I_{dof/(dof+t^2)}(dof/2, 1/2).
double t_two_sided_p(double t, double dof);

double mean(std::span<const double> xs);
/// Sample variance (n - 1 denominator).
double variance(std::span<const double> xs);

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Needs two or more values per group and non-zero variance in
/// each; throws InputError otherwise.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// (mean(a) - mean(b)) / pooled SD, pooling the (n - 1)-weighted variances.
double cohens_d(std::span<const double> a, std::span<const double> b);

/// Sample Pearson correlation with a t-transform p-value on n - 2 dof.
TestResult pearson(std::span<const double> x, std::span<const double> y);

struct PairedCorrelation {
  TestResult result;
  std::size_t n_excluded = 0;
};

/// Pearson over positions where both columns are defined. Throws InputError
/// with fewer than three complete pairs.
PairedCorrelation pairwise_correlation(std::span<const std::optional<double>> a,
                                       std::span<const std::optional<double>> b);

}  // namespace corefscope::stats
