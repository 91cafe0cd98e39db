#include "bwslex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bwslex/errors.hpp"

namespace bwslex::stats {

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 300;
constexpr double kTiny = 1e-300;

void require_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError("correlation inputs differ in length");
  if (x.size() < 2) throw ValidationError("correlation needs at least two points");
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaTolerance) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw ValidationError("mean of empty sequence");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("variance needs at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInput("correlation undefined for a constant sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // positions i..j (0-based) share ranks i+1..j+1
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(incomplete_beta(x, 0.5 * df, 0.5), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_tailed(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw ValidationError("Welch's t-test needs at least two values per sample");
  WelchResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  r.mean1 = mean(a);
  r.mean2 = mean(b);
  const double va = variance(a) / static_cast<double>(r.n1);
  const double vb = variance(b) / static_cast<double>(r.n2);
  const double se2 = va + vb;
  if (se2 == 0.0) throw DegenerateInput("Welch's t-test undefined: both samples constant");
  r.t = (r.mean1 - r.mean2) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / static_cast<double>(r.n1 - 1) +
                      vb * vb / static_cast<double>(r.n2 - 1));
  r.p_two_tailed = student_t_two_tailed(r.t, r.df);
  return r;
}

double quantile(std::span<const double> x, double q) {
  if (x.empty()) throw ValidationError("quantile of empty sequence");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level outside [0,1]");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double h = (static_cast<double>(s.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

BoxplotSummary boxplot(std::span<const double> x) {
  BoxplotSummary b;
  b.n = x.size();
  b.mean = mean(x);
  b.q1 = quantile(x, 0.25);
  b.median = quantile(x, 0.5);
  b.q3 = quantile(x, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = std::numeric_limits<double>::infinity();
  b.whisker_high = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
      continue;
    }
    b.whisker_low = std::min(b.whisker_low, v);
    b.whisker_high = std::max(b.whisker_high, v);
  }
  std::sort(b.outliers.begin(), b.outliers.end());
  return b;
}

double silverman_bandwidth(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("bandwidth selection needs at least two values");
  const double sd = std::sqrt(variance(x));
  const double iqr = quantile(x, 0.75) - quantile(x, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd > 0.0 ? sd : 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

std::vector<std::pair<double, double>> gaussian_kde(std::span<const double> samples,
                                                    double bandwidth,
                                                    std::span<const double> grid) {
  if (samples.empty()) throw ValidationError("density estimate of empty sample");
  if (!(bandwidth > 0.0)) throw ValidationError("bandwidth must be positive", "bandwidth");
  const double norm =
      1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * M_PI));
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double g : grid) {
    double acc = 0.0;
    for (double s : samples) {
      const double z = (g - s) / bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    out.emplace_back(g, acc * norm);
  }
  return out;
}

double trapezoid(std::span<const std::pair<double, double>> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += 0.5 * (curve[i].second + curve[i - 1].second) * (curve[i].first - curve[i - 1].first);
  return area;
}

}  // namespace bwslex::stats
