#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "bwslex/errors.hpp"
#include "bwslex/stats.hpp"
#include "test_support.hpp"

using namespace bwslex;
using nlohmann::json;

namespace {

const json& oracle() {
  static const json doc =
      json::parse(testing_support::slurp(testing_support::fixture_path("stats_oracle.json")));
  return doc;
}

std::vector<double> vec(const json& j) { return j.get<std::vector<double>>(); }

}  // namespace

TEST(StatsOracle, PearsonSpearmanWelch) {
  const auto& pairs = oracle().at("pairs");
  ASSERT_EQ(pairs.size(), 50u);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    SCOPED_TRACE("pair " + std::to_string(i));
    const auto x = vec(pairs[i]["x"]);
    const auto y = vec(pairs[i]["y"]);
    const std::size_t m = std::min(x.size(), y.size());
    const std::span<const double> xs(x.data(), m), ys(y.data(), m);
    EXPECT_NEAR(stats::pearson(xs, ys), pairs[i]["pearson"].get<double>(), 1e-9);
    EXPECT_NEAR(stats::spearman(xs, ys), pairs[i]["spearman"].get<double>(), 1e-9);
    const auto w = stats::welch_t(x, y);
    EXPECT_NEAR(w.t, pairs[i]["welch_t"].get<double>(), 1e-9);
    EXPECT_NEAR(w.df, pairs[i]["welch_df"].get<double>(), 1e-9 * std::max(1.0, w.df));
    EXPECT_NEAR(w.p_two_tailed, pairs[i]["welch_p"].get<double>(), 1e-8);
  }
}

TEST(StatsOracle, IncompleteBeta) {
  for (const auto& c : oracle().at("incomplete_beta")) {
    const double x = c["x"], a = c["a"], b = c["b"], v = c["value"];
    EXPECT_NEAR(stats::incomplete_beta(x, a, b), v, 1e-9) << "x=" << x << " a=" << a << " b=" << b;
  }
}

TEST(Stats, WorkedExamples) {
  const auto& ex = oracle().at("examples");
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
  const auto w = stats::welch_t(a, b);
  EXPECT_DOUBLE_EQ(w.t, -1.0);
  EXPECT_NEAR(w.df, 8.0, 1e-12);
  EXPECT_NEAR(w.p_two_tailed, ex["welch_1to5_vs_2to6"]["p"].get<double>(), 1e-12);
  EXPECT_NEAR(stats::pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 1, 4, 3}), 0.6,
              1e-12);
  EXPECT_NEAR(stats::spearman(std::vector<double>{1, 2, 3}, std::vector<double>{9, 4, 4}),
              -0.8660254037844387, 1e-12);
}

TEST(Stats, IncompleteBetaEdges) {
  EXPECT_DOUBLE_EQ(stats::incomplete_beta(0.0, 2.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(stats::incomplete_beta(1.0, 2.0, 3.0), 1.0);
  EXPECT_NEAR(stats::incomplete_beta(0.5, 1.0, 1.0), 0.5, 1e-14);
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  EXPECT_NEAR(stats::incomplete_beta(0.3, 2.5, 4.0), 1.0 - stats::incomplete_beta(0.7, 4.0, 2.5),
              1e-13);
  EXPECT_THROW(stats::incomplete_beta(1.5, 1.0, 1.0), ValidationError);
  EXPECT_THROW(stats::incomplete_beta(0.5, 0.0, 1.0), ValidationError);
}

TEST(Stats, StudentT) {
  EXPECT_NEAR(stats::student_t_cdf(0.0, 5.0), 0.5, 1e-14);
  EXPECT_NEAR(stats::student_t_two_tailed(0.0, 5.0), 1.0, 1e-14);
  // t(1) is Cauchy: F(1) = 3/4
  EXPECT_NEAR(stats::student_t_cdf(1.0, 1.0), 0.75, 1e-12);
  EXPECT_NEAR(stats::student_t_cdf(-1.0, 1.0), 0.25, 1e-12);
}

TEST(Stats, PearsonDegenerate) {
  const std::vector<double> c{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(stats::pearson(c, y), DegenerateInput);
  EXPECT_THROW(stats::pearson(std::vector<double>{1}, std::vector<double>{1}), ValidationError);
  EXPECT_THROW(stats::pearson(y, std::vector<double>{1, 2}), ValidationError);
  EXPECT_THROW(stats::spearman(c, y), DegenerateInput);
}

TEST(Stats, WelchDegenerate) {
  const std::vector<double> c{0.5, 0.5, 0.5};
  EXPECT_THROW(stats::welch_t(c, c), DegenerateInput);
  EXPECT_THROW(stats::welch_t(std::vector<double>{1.0}, c), ValidationError);
  // one constant sample is fine
  EXPECT_NO_THROW(stats::welch_t(c, std::vector<double>{0.1, 0.2, 0.4}));
}

TEST(Stats, AverageRanks) {
  EXPECT_EQ(stats::average_ranks(std::vector<double>{10, 20, 20, 5}),
            (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Stats, QuantileType7) {
  const std::vector<double> x{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(stats::quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(stats::quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(stats::quantile(x, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(stats::median(x), 2.5);
  EXPECT_DOUBLE_EQ(stats::median(std::vector<double>{7}), 7.0);
  EXPECT_THROW(stats::quantile(std::vector<double>{}, 0.5), ValidationError);
}

TEST(Stats, Boxplot) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  const auto b = stats::boxplot(x);
  EXPECT_DOUBLE_EQ(b.q1, 3.25);
  EXPECT_DOUBLE_EQ(b.median, 5.5);
  EXPECT_DOUBLE_EQ(b.q3, 7.75);
  EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
  EXPECT_DOUBLE_EQ(b.whisker_high, 9.0);
  EXPECT_EQ(b.outliers, std::vector<double>{100});
  EXPECT_EQ(b.n, 10u);
}

TEST(Stats, KdeIntegratesToAboutOne) {
  std::vector<double> s;
  for (int i = 0; i < 50; ++i) s.push_back(0.3 + 0.4 * ((i * 37) % 50) / 50.0);
  const double bw = stats::silverman_bandwidth(s);
  EXPECT_GT(bw, 0.0);
  std::vector<double> grid;
  for (int i = -100; i <= 200; ++i) grid.push_back(i / 100.0);
  const auto curve = stats::gaussian_kde(s, bw, grid);
  EXPECT_NEAR(stats::trapezoid(curve), 1.0, 1e-6);
}

TEST(Stats, SilvermanFixedValue) {
  // sd = 1.5811, IQR/1.34 = 1.4925 -> 0.9 * 1.4925 * 5^-0.2
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(stats::silverman_bandwidth(x), 0.9 * (2.0 / 1.34) * std::pow(5.0, -0.2), 1e-12);
}
