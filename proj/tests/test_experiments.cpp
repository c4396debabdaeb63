#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "elseq/bounds.hpp"
#include "elseq/experiments.hpp"
#include "elseq/seqgen.hpp"

using namespace elseq;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig config;
  config.prime_min = 100;
  config.prime_max = 2000;
  config.pairs_per_v = 5;
  config.v_values = {2};
  config.t_values = {2, 3};
  config.generators_per_prime = 3;
  config.seed = 7;
  return config;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream is(
      "# comment\n"
      "prime_min=100\n"
      "prime_max = 500\n"
      "pairs_per_v=2\n"
      "v_values=2,3\n"
      "t_values=2\n"
      "generators_per_prime=1\n"
      "require_g_equals_v=true\n"
      "seed=99\n"
      "output_dir=some/dir\n");
  const ExperimentConfig config = parse_config(is);
  CHECK(config.prime_min == 100);
  CHECK(config.prime_max == 500);
  CHECK(config.v_values == std::vector<uint32_t>{2, 3});
  CHECK(config.require_g_equals_v);
  CHECK(config.seed == 99);
  CHECK(config.output_dir == "some/dir");

  std::istringstream bad("nonsense_key=3\n");
  CHECK_THROWS_AS(parse_config(bad), ParameterError);
  std::istringstream malformed("prime_min\n");
  CHECK_THROWS_AS(parse_config(malformed), ParameterError);
}

TEST_CASE("run_trial_grid produces pairs_per_v * generators * |t| records") {
  const auto records = run_trial_grid(tiny_config());
  CHECK(records.size() == 5 * 3 * 2);
  for (const auto& rec : records) {
    CHECK(rec.v == 2);
    CHECK((rec.t == 2 || rec.t == 3));
    CHECK((rec.p - 1) % rec.v == 0);
    CHECK(BigInt(rec.min_lambda) >= rec.lb);
    CHECK(BigInt(rec.max_lambda) <= rec.ub);
    CHECK(rec.lb_hit == (BigInt(rec.min_lambda) == rec.lb));
  }
  // Records are sorted by (p, g, v, t).
  CHECK(std::is_sorted(records.begin(), records.end(),
                       [](const TrialRecord& a, const TrialRecord& b) {
                         return std::tie(a.p, a.g, a.v, a.t) < std::tie(b.p, b.g, b.v, b.t);
                       }));
}

TEST_CASE("insufficient primes raises a configuration error with the count") {
  ExperimentConfig config = tiny_config();
  config.prime_min = 100;
  config.prime_max = 110;  // contains 101, 103, 107, 109: too few pairs
  try {
    run_trial_grid(config);
    FAIL("expected a configuration error");
  } catch (const ParameterError& e) {
    const std::string message = e.what();
    CHECK(message.find("admissible primes") != std::string::npos);
    CHECK(message.find("need 5") != std::string::npos);
  }
}

TEST_CASE("pinned single-point grid matches hand-computed p = 13 facts") {
  ExperimentConfig config;
  config.prime_min = 13;
  config.prime_max = 13;
  config.pairs_per_v = 1;
  config.v_values = {2};
  config.t_values = {1, 2};
  config.generators_per_prime = 1;  // smallest primitive root of 13 is 2
  const auto records = run_trial_grid(config);
  REQUIRE(records.size() == 2);

  const TrialRecord& ones = records[0];
  CHECK(ones.t == 1);
  CHECK(ones.rho_total_t == 2);   // two runs of length 1 in elgamal(13,2,2)
  CHECK(ones.rho_total_t1 == 2);  // two of length 2
  CHECK(ones.has_ratio);
  CHECK(ones.ratio == doctest::Approx(2.0));  // rho(2) * v / rho(1) = 2*2/2

  const TrialRecord& pairs = records[1];
  CHECK(pairs.t == 2);
  CHECK(pairs.min_lambda == 3);
  CHECK(pairs.max_lambda == 3);
  CHECK(pairs.lb == 3);
  CHECK(pairs.ub == 4);
  CHECK(pairs.lb_hit);
  CHECK_FALSE(pairs.ub_hit);
  CHECK(pairs.all_tuples_present);

  // Gap report: lower gap 0, upper gap 1, nothing excluded.
  const GapDistribution gaps = gap_distribution_report({pairs});
  CHECK(gaps.lower_gaps == std::map<uint64_t, uint64_t>{{0, 1}});
  CHECK(gaps.upper_gaps == std::map<uint64_t, uint64_t>{{1, 1}});
  CHECK(gaps.lower_excluded == 0);
}

TEST_CASE("g = v strata: lower bound hit rate is exactly 100 percent") {
  ExperimentConfig config;
  config.prime_min = 100;
  config.prime_max = 3000;
  config.pairs_per_v = 6;
  config.v_values = {2, 3};
  config.t_values = {2, 3};
  config.require_g_equals_v = true;
  config.seed = 5;
  const auto records = run_trial_grid(config);
  REQUIRE(records.size() == 6 * 2 * 2);
  const auto report = bound_tightness_report(records);
  for (const auto& [key, entry] : report) {
    CHECK(entry.pct_lb_hit == 100.0);
    REQUIRE(entry.pct_ub_hit_given_g_eq_v.has_value());
    // ub hit iff n_u > 0 iff p != 1 mod v^t: cross-check via the split.
    uint64_t expect_hits = 0, g_eq_v = 0;
    for (const auto& rec : records) {
      if (rec.v != key.first || rec.t != key.second) continue;
      ++g_eq_v;
      expect_hits += tuple_count_split(rec.p, rec.v, rec.t).upper_attained;
    }
    CHECK(*entry.pct_ub_hit_given_g_eq_v ==
          doctest::Approx(100.0 * expect_hits / g_eq_v));
  }
}

TEST_CASE("single-record tightness rates are 0 or 100") {
  ExperimentConfig config;
  config.prime_min = 13;
  config.prime_max = 13;
  config.pairs_per_v = 1;
  config.v_values = {2};
  config.t_values = {2};
  config.generators_per_prime = 1;
  const auto records = run_trial_grid(config);
  const auto report = bound_tightness_report(records);
  for (const auto& [key, entry] : report) {
    CHECK((entry.pct_lb_hit == 0.0 || entry.pct_lb_hit == 100.0));
    CHECK((entry.pct_ub_hit == 0.0 || entry.pct_ub_hit == 100.0));
  }
  CHECK_THROWS_AS(bound_tightness_report({}), ParameterError);
}

TEST_CASE("normalized lambda report pools to mean zero") {
  const auto records = run_trial_grid(tiny_config());
  const NormalizedLambdaReport report = normalized_lambda_report(records);
  CHECK(report.samples > 0);
  CHECK_FALSE(report.bins.empty());
  // The translation cancels exactly when pooled over all z of a trial.
  CHECK(std::fabs(report.mean) < 1e-6);
  uint64_t mass = 0;
  for (const auto& [bin, count] : report.bins) mass += count;
  CHECK(mass == report.samples);

  // Raw maps absent: configuration error.
  ExperimentConfig no_raw = tiny_config();
  no_raw.retain_raw_lambda = false;
  CHECK_THROWS_AS(normalized_lambda_report(run_trial_grid(no_raw)), ParameterError);
}

TEST_CASE("run ratio report drops zero denominators and summarizes per t") {
  const auto records = run_trial_grid(tiny_config());
  const RunRatioReport report = run_ratio_report(records);
  CHECK(report.samples.size() + report.dropped == records.size());
  for (const auto& [t, summary] : report.per_t) {
    CHECK(summary.count > 0);
    CHECK(summary.q25 <= summary.median);
    CHECK(summary.median <= summary.q75);
  }
}

TEST_CASE("Golomb first-order check: ratio medians near 1 on the default grid") {
  const ExperimentConfig config;  // desk-scale defaults
  const RunRatioReport report = run_ratio_report(run_trial_grid(config));
  for (const auto& [t, summary] : report.per_t) {
    CHECK(summary.median > 0.5);
    CHECK(summary.median < 2.0);
  }
}

TEST_CASE("monte_carlo_moments") {
  MonteCarloTarget tuple_target{true, {0, 1}, 0, 0};
  const MonteCarloResult mc = monte_carlo_moments(2, 4, tuple_target, 100'000, 11);
  CHECK(mc.theory.mean == Rational(4, 3));
  REQUIRE(mc.z_score.has_value());
  CHECK(std::fabs(*mc.z_score) < 5.0);

  // Zero-variance target: z-score undefined.
  MonteCarloTarget constant{true, {0}, 0, 0};
  const MonteCarloResult flat = monte_carlo_moments(2, 4, constant, 100, 11);
  CHECK(flat.theory.variance == 0);
  CHECK_FALSE(flat.z_score.has_value());

  MonteCarloTarget run_target{false, {}, 0, 1};
  const MonteCarloResult runs = monte_carlo_moments(2, 12, run_target, 20'000, 13);
  REQUIRE(runs.z_score.has_value());
  CHECK(std::fabs(*runs.z_score) < 5.0);
}

TEST_CASE("run_experiment writes the four report files and honors the env override") {
  const std::string base = std::filesystem::temp_directory_path() / "elseq_test_out";
  std::filesystem::remove_all(base);
  unsetenv("ELSEQ_OUTPUT_DIR");

  ExperimentConfig config = tiny_config();
  config.pairs_per_v = 2;
  config.t_values = {2};
  config.output_dir = base + "/direct";
  run_experiment(config);
  for (const char* name : {"trials.csv", "runs.csv", "ratios.csv", "aggregates.json"}) {
    CHECK(std::filesystem::exists(config.output_dir + "/" + std::string(name)));
  }

  setenv("ELSEQ_OUTPUT_DIR", (base + "/override").c_str(), 1);
  run_experiment(config);
  CHECK(std::filesystem::exists(base + "/override/trials.csv"));
  unsetenv("ELSEQ_OUTPUT_DIR");

  // CSV headers are stable.
  std::ifstream is(config.output_dir + "/trials.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "p,g,v,t,min_lambda,max_lambda,lb,ub,lb_hit,ub_hit,all_tuples_present,lb_vacuous,"
        "rho_total_t,rho_total_t1,ratio");
}
