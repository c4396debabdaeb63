#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elseq/bounds.hpp"
#include "elseq/seqgen.hpp"
#include "elseq/stats.hpp"
#include "elseq/theory.hpp"

namespace elseq {

/// Grid configuration, parsed from line-oriented key=value files.
struct ExperimentConfig {
  uint64_t prime_min = 10'000;
  uint64_t prime_max = 100'000;
  uint32_t pairs_per_v = 5;
  std::vector<uint32_t> v_values{2, 3, 4, 5, 6, 7, 8};
  std::vector<uint32_t> t_values{2, 3, 4, 5};
  uint32_t generators_per_prime = 3;
  bool require_g_equals_v = false;
  uint64_t seed = 1;
  std::string output_dir = "out";
  bool retain_raw_lambda = true;
  uint64_t raw_lambda_cap = 1'000'000;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

/// One grid point (p, g, v, t). raw_lambda_hist maps a lambda value to
/// the number of tuples attaining it (zero-count tuples included) and is
/// kept only while v^t stays under the configured cap.
struct TrialRecord {
  uint64_t p = 0;
  uint64_t g = 0;
  uint32_t v = 0;
  uint32_t t = 0;
  uint64_t min_lambda = 0;  // over all v^t tuples, absent ones count 0
  uint64_t max_lambda = 0;
  BigInt lb;
  BigInt ub;
  bool lb_vacuous = false;
  bool lb_hit = false;
  bool ub_hit = false;
  bool all_tuples_present = false;
  std::vector<uint64_t> rho;  // rho(b, t) for each symbol b
  BoundInterval run_interval; // best_run_bounds(p, g, v, t)
  uint64_t rho_total_t = 0;
  uint64_t rho_total_t1 = 0;
  bool has_ratio = false;
  double ratio = 0.0;  // rho(t+1) * v / rho(t)
  bool has_raw = false;
  std::vector<std::pair<uint64_t, uint64_t>> raw_lambda_hist;
};

/// Deterministic in the config (seed included): prime pairs are chosen
/// by hashing candidates with the seed, records come out sorted by
/// (p, g, v, t). Aborts with InvariantViolationError on any bound
/// containment failure.
std::vector<TrialRecord> run_trial_grid(const ExperimentConfig& config);

struct TightnessEntry {
  uint64_t records = 0;
  uint64_t all_present_records = 0;
  uint64_t g_eq_v_records = 0;
  double pct_lb_hit = 0;
  double pct_ub_hit = 0;
  std::optional<double> pct_lb_hit_given_all_present;
  std::optional<double> pct_ub_hit_given_g_eq_v;
};
std::map<std::pair<uint32_t, uint32_t>, TightnessEntry> bound_tightness_report(
    const std::vector<TrialRecord>& records);

struct GapDistribution {
  std::map<uint64_t, uint64_t> lower_gaps;  // min_lambda - lb
  std::map<uint64_t, uint64_t> upper_gaps;  // ub - max_lambda
  uint64_t lower_outliers = 0;              // gaps past tracked_max
  uint64_t upper_outliers = 0;
  uint64_t lower_excluded = 0;  // trials with min_lambda = 0, skipped
  uint64_t tracked_max = 25;
};
GapDistribution gap_distribution_report(const std::vector<TrialRecord>& records,
                                        uint64_t tracked_max = 25);

struct NormalizedLambdaReport {
  double bin_width = 0.1;
  std::map<int64_t, uint64_t> bins;  // floor(x / bin_width) -> tuple mass
  uint64_t samples = 0;
  double mean = 0;
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
};
/// Pools (lambda(z) - (p-1)/v^t) * sqrt(v^t/(p-1)) over every tuple of
/// every record that retained raw counts. Errors when none did.
NormalizedLambdaReport normalized_lambda_report(const std::vector<TrialRecord>& records,
                                                double bin_width = 0.1);

struct RatioSummary {
  uint64_t count = 0;
  double median = 0;
  double q25 = 0;
  double q75 = 0;
};
struct RunRatioReport {
  std::vector<std::pair<uint32_t, double>> samples;  // (t, ratio)
  std::map<uint32_t, RatioSummary> per_t;
  uint64_t dropped = 0;  // zero-denominator points
};
RunRatioReport run_ratio_report(const std::vector<TrialRecord>& records);

struct MonteCarloTarget {
  bool is_tuple = true;
  std::vector<uint32_t> z;  // tuple mode
  uint32_t b = 0;           // run mode
  uint64_t t = 1;
};
struct MonteCarloResult {
  uint64_t samples = 0;
  double empirical_mean = 0;
  double empirical_variance = 0;
  MomentPair theory;
  std::optional<double> z_score;  // absent when theory variance is 0
};
MonteCarloResult monte_carlo_moments(uint32_t v, uint64_t n, const MonteCarloTarget& target,
                                     uint64_t samples, uint64_t seed);

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_runs_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_ratio_triples_csv(std::ostream& os, const RunRatioReport& report,
                             double bin_width = 0.05);
std::string aggregates_to_json(const std::vector<TrialRecord>& records);

/// Full pipeline: grid, per-trial CSVs, aggregate JSON. Honors the
/// ELSEQ_OUTPUT_DIR environment override. Returns the output directory.
std::string run_experiment(const ExperimentConfig& config);

}  // namespace elseq
