#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "tagforge/halting.hpp"
#include "tagforge/walkstats.hpp"

using namespace tagforge;

TEST(FirstPassagePdf, ListedExamples) {
  EXPECT_NEAR(first_passage_pdf(1, 1), std::exp(-0.5) / std::sqrt(2 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(first_passage_pdf(1, 1), 0.2420, 1e-4);
  EXPECT_LT(first_passage_pdf(1e-9, 5), 1e-9);
  EXPECT_NEAR(first_passage_mode(6), 12.0, 1e-12);
  EXPECT_NEAR(numeric_first_passage_mode(6), 12.0, 1e-3);
}

TEST(FirstPassagePdf, IntegratesToAtMostOne) {
  for (double x : {1.0, 3.0, 10.0}) {
    const double mass = first_passage_mass(x, 1e9);
    EXPECT_LE(mass, 1.0 + 1e-9);
    EXPECT_NEAR(mass, 1.0, 1e-3);
  }
  for (double x : {1.0, 3.0, 10.0})
    for (double t : {10.0, 1e3, 1e7}) EXPECT_NEAR(first_passage_mass(x, t), std::erfc(x / std::sqrt(2 * t)), 1e-9);
}

TEST(Survival, LimitsAndAsymptote) {
  EXPECT_LT(survival_probability(5, 1e12), 1e-5);
  EXPECT_NEAR(survival_probability(5, 1e8) / survival_asymptote(5, 1e8), 1.0, 1e-6);
  EXPECT_NEAR(ensemble_survival_estimate(9), 18 * 81 / std::numbers::pi, 1e-9);
  EXPECT_NEAR(ensemble_survival_estimate(9), 464, 1);
}

TEST(MonteCarlo, SurvivalWithinThreeSigma) {
  auto c = compare_survival(10, 1000, 100000, 777);
  EXPECT_LT(std::abs(c.z), 3.0) << c.observed << " vs " << c.expected;
}

TEST(MonteCarlo, FirstPassageBinsWithinThreeSigma) {
  auto bins = compare_first_passage(10, {50, 100, 200, 400, 800, 1600, 3200}, 100000, 12345);
  ASSERT_EQ(bins.size(), 6u);
  for (const auto& b : bins) EXPECT_LT(std::abs(b.z), 3.0) << "[" << b.lo << "," << b.hi << ")";
}

TEST(MonteCarlo, EarlyBinsDepartFromDiffusionLimit) {
  // The lattice walk cannot reach 0 before t = x, so the continuous law
  // overstates the earliest mass.
  auto bins = compare_first_passage(10, {1, 9, 25}, 100000, 12345);
  EXPECT_EQ(bins[0].observed, 0.0);
  EXPECT_GT(bins[0].expected, 0.0);
}

TEST(MonteCarlo, SeededAndDeterministic) {
  auto a = monte_carlo_first_passage(5, 1000, 1000, 42);
  auto b = monte_carlo_first_passage(5, 1000, 1000, 42);
  EXPECT_EQ(a, b);
  for (auto t : a)
    if (t) {
      EXPECT_GE(t, 5u);
      EXPECT_EQ((t - 5) % 2, 0u);
    }
}

TEST(Detrend, ListedExamples) {
  std::vector<double> v{3, 1, 4, 1, 5};
  EXPECT_EQ(detrend(v, 0), v);
  std::vector<double> ramp{0, 1, 2, 3, 4, 5};
  for (double d : detrend(ramp, 1)) EXPECT_DOUBLE_EQ(d, 0.0);
}

TEST(UnitStepWalk, PostTraces) {
  auto tr = length_trace(parse_state_id("9:506:0"), 5000);
  EXPECT_TRUE(is_unit_step_walk(tr.lengths));
  EXPECT_FALSE(is_unit_step_walk({3, 5, 4}));
}

// Sign of each step matches the consumed symbol.
TEST(UnitStepWalk, StepSignsMatchConsumedOnes) {
  auto c = parse_state_id("6:58:0");
  auto tr = length_trace(c, 2000);
  std::uint64_t ups = 0, ones = 0;
  CompressedState s = c;
  for (std::size_t i = 1; i < tr.lengths.size(); ++i) {
    ups += tr.lengths[i] > tr.lengths[i - 1];
    ones += s.word.front();
    step_compressed_inplace(s);
  }
  EXPECT_EQ(ups, ones);
}

TEST(WinnerGrowth, ListedExamples) {
  const std::vector<std::pair<double, double>> table{
      {4, 419},          {6, 2141},         {9, 24552},         {12, 253456},        {13, 341992},
      {15, 20858069},    {15, 357007576},   {20, 2586944104},   {22, 2910925472},    {24, 50048859310},
      {25, 202880696061}, {27, 259447574536}, {28, 643158954877}};
  const double b = winner_growth_fit(table);
  EXPECT_GE(b, 2.2);
  EXPECT_LE(b, 3.5);
  const double robust = winner_growth_fit(table, FitMethod::theil_sen);
  EXPECT_GE(robust, 2.2);
  EXPECT_LE(robust, 3.5);

  EXPECT_NEAR(winner_growth_fit({{1, 7}, {2, 7}, {3, 7}, {4, 7}}), 1.0, 1e-12);
  std::vector<std::pair<double, double>> geo;
  for (int m = 1; m <= 12; ++m) geo.emplace_back(m, std::ldexp(1.0, m));
  EXPECT_NEAR(winner_growth_fit(geo), 2.0, 0.01);
  EXPECT_THROW(winner_growth_fit({{1, 2}, {2, 4}}), std::invalid_argument);
}

TEST(FitLine, TheilSenIgnoresOutlier) {
  std::vector<double> x{0, 1, 2, 3, 4, 5, 6}, y{1, 3, 5, 7, 9, 11, 100};
  EXPECT_NEAR(fit_line(x, y, FitMethod::theil_sen).slope, 2.0, 1e-12);
  EXPECT_GT(fit_line(x, y).slope, 2.5);
}

TEST(TraceCsv, RoundTripAndSvg) {
  std::vector<double> t{5, 6, 7, 6, 5};
  std::stringstream buf;
  write_trace_csv(buf, t);
  EXPECT_EQ(buf.str().substr(0, 19), "# tagforge-trace v1");
  EXPECT_EQ(read_trace_csv(buf), t);
  const auto svg = trace_svg(t, 200, 100, "x");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
