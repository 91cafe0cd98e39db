#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace bwslex::stats {

double mean(std::span<const double> x);

// Unbiased (n - 1) sample variance. Requires |x| >= 2.
double variance(std::span<const double> x);

// Sample Pearson correlation. Throws DegenerateInput if either input is
// constant and ValidationError on length mismatch or |x| < 2.
double pearson(std::span<const double> x, std::span<const double> y);

// 1-based ranks; ties receive the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

// Pearson correlation of the average-rank vectors.
double spearman(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
// continued fraction (relative tolerance 1e-12, at most 300 iterations).
double incomplete_beta(double x, double a, double b);

// Student-t cumulative distribution function.
double student_t_cdf(double t, double df);

// Two-tailed p-value 2 * (1 - F(|t|; df)) = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_tailed(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_tailed = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double mean1 = 0.0;
  double mean2 = 0.0;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

// Type-7 (linear interpolation) quantile, q in [0, 1].
double quantile(std::span<const double> x, double q);
double median(std::span<const double> x);

struct BoxplotSummary {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  // Most extreme observations within 1.5 IQR of the box.
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
  std::size_t n = 0;
  double mean = 0.0;
};

BoxplotSummary boxplot(std::span<const double> x);

// Silverman's rule of thumb: 0.9 * min(sd, IQR / 1.34) * n^(-1/5).
double silverman_bandwidth(std::span<const double> x);

// Gaussian kernel density estimate evaluated at each grid point.
std::vector<std::pair<double, double>> gaussian_kde(std::span<const double> samples,
                                                    double bandwidth,
                                                    std::span<const double> grid);

// Trapezoid integral of (x, y) pairs sorted by x.
double trapezoid(std::span<const std::pair<double, double>> curve);

}  // namespace bwslex::stats
