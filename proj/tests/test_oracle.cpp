#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "elseq/oracle.hpp"
#include "elseq/seqgen.hpp"
#include "elseq/stats.hpp"
#include "elseq/theory.hpp"

using namespace elseq;

TEST_CASE("enumerate_balanced visits every word once, lexicographically") {
  const auto words = enumerate_balanced(2, 4);
  REQUIRE(words.size() == 6);
  CHECK(words.front().symbols == std::vector<uint32_t>{0, 0, 1, 1});
  CHECK(words.back().symbols == std::vector<uint32_t>{1, 1, 0, 0});
  CHECK(std::is_sorted(words.begin(), words.end(),
                       [](const SequenceZv& a, const SequenceZv& b) {
                         return a.symbols < b.symbols;
                       }));

  CHECK(enumerate_balanced(2, 2).size() == 2);
  CHECK(enumerate_balanced(3, 6).size() == 90);
  CHECK_THROWS_AS(enumerate_balanced(2, 8, 10), ResourceCapError);  // 70 > 10
  CHECK_THROWS_AS(enumerate_balanced(2, 5), ParameterError);
}

TEST_CASE("exact_tuple_distribution") {
  const CountDistribution dist = exact_tuple_distribution(2, 4, {0, 1});
  CHECK(dist.population == 6);
  CHECK(dist.support == std::map<uint64_t, uint64_t>{{1, 4}, {2, 2}});

  const CountDistribution single = exact_tuple_distribution(2, 2, {0});
  CHECK(single.support == std::map<uint64_t, uint64_t>{{1, 2}});

  // Histogram moments equal the closed-form moments (cross-module identity).
  const MomentPair from_hist = distribution_moments(dist);
  const MomentPair from_theory = tuple_moments_exact(2, 4, {0, 1});
  CHECK(from_hist.mean == from_theory.mean);
  CHECK(from_hist.variance == from_theory.variance);
}

TEST_CASE("exact_run_distribution") {
  const CountDistribution dist = exact_run_distribution(2, 4, 0, 2);
  CHECK(dist.support == std::map<uint64_t, uint64_t>{{0, 2}, {1, 4}});
  const CountDistribution other_symbol = exact_run_distribution(2, 4, 1, 2);
  CHECK(other_symbol.support == dist.support);  // symbol symmetry

  const MomentPair from_hist = distribution_moments(dist);
  const MomentPair from_theory = run_moments_exact(2, 4, 2);
  CHECK(from_hist.mean == from_theory.mean);
  CHECK(from_hist.variance == from_theory.variance);
}

TEST_CASE("symbol-relabeling symmetry of tuple distributions") {
  const CountDistribution a = exact_tuple_distribution(2, 8, {0, 0, 1});
  const CountDistribution b = exact_tuple_distribution(2, 8, {1, 1, 0});
  CHECK(a.support == b.support);
  const CountDistribution c = exact_tuple_distribution(3, 6, {0, 1});
  const CountDistribution d = exact_tuple_distribution(3, 6, {2, 0});
  CHECK(c.support == d.support);
}

TEST_CASE("exact_period_census") {
  CHECK(exact_period_census(2, 4) == std::map<uint64_t, uint64_t>{{2, 2}, {4, 4}});
  CHECK(exact_period_census(2, 2) == std::map<uint64_t, uint64_t>{{2, 2}});
  CHECK(exact_period_census(2, 6) == std::map<uint64_t, uint64_t>{{2, 2}, {6, 18}});

  // Census entries reproduce count_period_exact at each admissible divisor.
  const auto census12 = exact_period_census(2, 12);
  for (const auto& [period, count] : census12) {
    CHECK(BigInt(count) == count_period_exact(2, period).value);
  }
}

TEST_CASE("normality_diagnostic") {
  CountDistribution dist;
  dist.support = {{1, 4}, {2, 2}};
  dist.population = 6;
  const NormalitySummary summary = normality_diagnostic(dist);
  CHECK(summary.mean == doctest::Approx(4.0 / 3));
  CHECK(summary.variance == doctest::Approx(2.0 / 9));
  REQUIRE(summary.skewness.has_value());

  CountDistribution symmetric;
  symmetric.support = {{0, 5}, {2, 5}};
  symmetric.population = 10;
  CHECK(*normality_diagnostic(symmetric).skewness == doctest::Approx(0.0));

  CountDistribution degenerate;
  degenerate.support = {{3, 7}};
  degenerate.population = 7;
  const NormalitySummary flat = normality_diagnostic(degenerate);
  CHECK_FALSE(flat.skewness.has_value());
  CHECK_FALSE(flat.excess_kurtosis.has_value());

  CountDistribution tiny;
  tiny.support = {{1, 1}};
  tiny.population = 1;
  CHECK_THROWS_AS(normality_diagnostic(tiny), ParameterError);
}

TEST_CASE("skewness of tuple distributions shrinks from n = 8 to n = 16") {
  const double skew8 =
      std::fabs(*normality_diagnostic(exact_tuple_distribution(2, 8, {0, 1})).skewness);
  const double skew16 =
      std::fabs(*normality_diagnostic(exact_tuple_distribution(2, 16, {0, 1})).skewness);
  CHECK(skew16 < skew8);
}

TEST_CASE("Monte Carlo sampling converges to oracle means at (v=2, n=12)") {
  const CountDistribution dist = exact_tuple_distribution(2, 12, {0, 1, 0});
  const MomentPair oracle = distribution_moments(dist);
  auto rng = derive_stream(314159);
  const uint64_t samples = 100'000;
  double sum = 0;
  for (uint64_t i = 0; i < samples; ++i) {
    sum += static_cast<double>(
        count_single_tuple(random_balanced_sequence(2, 12, rng), {0, 1, 0}));
  }
  const double empirical = sum / static_cast<double>(samples);
  const double se = std::sqrt(to_double(oracle.variance) / static_cast<double>(samples));
  CHECK(std::fabs(empirical - to_double(oracle.mean)) < 5 * se);
}

TEST_CASE("distribution JSON export") {
  CountDistribution dist;
  dist.support = {{1, 4}, {2, 2}};
  dist.population = 6;
  CHECK(distribution_to_json(dist, 2, 4, "tuple", "01") ==
        R"({"v":2,"n":4,"kind":"tuple","key":"01","histogram":[[1,4],[2,2]],"population":6})");
}
