#include "corefscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "corefscope/errors.hpp"

namespace corefscope::stats {

namespace {

void set_flags(TestResult& r) {
  r.significant_05 = r.p_value < kAlpha05;
  r.significant_001 = r.p_value < kAlpha001;
}

double sum_sq_dev(std::span<const double> xs, double m) {
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc;
}

}  // namespace

Aggregate aggregate(std::span<const std::optional<double>> values) {
  Aggregate agg;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) {
      ++agg.n_absent;
      continue;
    }
    sum += *v;
    agg.min = agg.min ? std::min(*agg.min, *v) : *v;
    agg.max = agg.max ? std::max(*agg.max, *v) : *v;
    ++agg.n;
  }
  if (agg.n > 0) {
    // Clamp so rounding never pushes the mean outside [min, max].
    agg.mean = std::clamp(sum / static_cast<double>(agg.n), *agg.min, *agg.max);
  }
  return agg;
}

double t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw InputError("t distribution needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  const double p = boost::math::ibeta(dof / 2.0, 0.5, x);
  return std::clamp(p, 0.0, 1.0);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InputError("mean of an empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw InputError("variance needs at least two values");
  return sum_sq_dev(xs, mean(xs)) / static_cast<double>(xs.size() - 1);
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InputError("Cohen's d needs two or more values per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled = ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0);
  if (!(pooled > 0.0)) throw InputError("Cohen's d undefined for zero pooled variance");
  return (mean(a) - mean(b)) / std::sqrt(pooled);
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InputError("t-test needs two or more values per group");
  const double va = variance(a);
  const double vb = variance(b);
  if (!(va > 0.0) || !(vb > 0.0)) throw InputError("t-test needs non-zero variance in both groups");

  const double ra = va / static_cast<double>(a.size());
  const double rb = vb / static_cast<double>(b.size());
  TestResult r;
  r.statistic = (mean(a) - mean(b)) / std::sqrt(ra + rb);
  r.dof = (ra + rb) * (ra + rb) /
          (ra * ra / static_cast<double>(a.size() - 1) + rb * rb / static_cast<double>(b.size() - 1));
  r.p_value = t_two_sided_p(r.statistic, r.dof);
  r.effect_size = cohens_d(a, b);
  r.n = a.size() + b.size();
  set_flags(r);
  return r;
}

TestResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("correlation inputs differ in length");
  if (x.size() < 3) throw InputError("correlation needs at least three pairs");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my);
  const double sxx = sum_sq_dev(x, mx);
  const double syy = sum_sq_dev(y, my);
  if (!(sxx > 0.0) || !(syy > 0.0)) throw InputError("correlation undefined for zero variance");

  TestResult res;
  const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  res.statistic = rho;
  res.dof = static_cast<double>(x.size() - 2);
  const double denom = 1.0 - rho * rho;
  const double t = denom > 0.0 ? rho * std::sqrt(res.dof / denom)
                               : std::copysign(std::numeric_limits<double>::infinity(), rho);
  res.p_value = t_two_sided_p(t, res.dof);
  res.n = x.size();
  set_flags(res);
  return res;
}

PairedCorrelation pairwise_correlation(std::span<const std::optional<double>> a,
                                       std::span<const std::optional<double>> b) {
  if (a.size() != b.size()) throw InputError("correlation columns differ in length");
  std::vector<double> xs, ys;
  PairedCorrelation out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) {
      xs.push_back(*a[i]);
      ys.push_back(*b[i]);
    } else {
      ++out.n_excluded;
    }
  }
  if (xs.size() < 3) {
    throw InputError("need at least three observations with both metrics defined, have " +
                     std::to_string(xs.size()));
  }
  out.result = pearson(xs, ys);
  return out;
}

}  // namespace corefscope::stats
