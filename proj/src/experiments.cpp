#include "elseq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "elseq/modarith.hpp"

namespace elseq {

namespace {

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<uint32_t> parse_u32_list(const std::string& text) {
  std::vector<uint32_t> out;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    if (!part.empty()) out.push_back(static_cast<uint32_t>(std::stoul(part)));
  }
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParameterError("config: expected a boolean, got '" + text + "'");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "prime_min") config.prime_min = std::stoull(value);
    else if (key == "prime_max") config.prime_max = std::stoull(value);
    else if (key == "pairs_per_v") config.pairs_per_v = static_cast<uint32_t>(std::stoul(value));
    else if (key == "v_values") config.v_values = parse_u32_list(value);
    else if (key == "t_values") config.t_values = parse_u32_list(value);
    else if (key == "generators_per_prime") config.generators_per_prime = static_cast<uint32_t>(std::stoul(value));
    else if (key == "require_g_equals_v") config.require_g_equals_v = parse_bool(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "output_dir") config.output_dir = value;
    else if (key == "retain_raw_lambda") config.retain_raw_lambda = parse_bool(value);
    else if (key == "raw_lambda_cap") config.raw_lambda_cap = std::stoull(value);
    else throw ParameterError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (config.prime_min < 3) throw ParameterError("config: prime_min must be >= 3");
  if (config.pairs_per_v < 1 || config.generators_per_prime < 1) {
    throw ParameterError("config: counts must be >= 1");
  }
  for (uint32_t v : config.v_values) {
    if (v < 2) throw ParameterError("config: every v must be >= 2");
  }
  if (config.v_values.empty() || config.t_values.empty()) {
    throw ParameterError("config: v_values and t_values must be nonempty");
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("config: cannot open " + path);
  return parse_config(is);
}

std::vector<TrialRecord> run_trial_grid(const ExperimentConfig& config) {
  std::vector<TrialRecord> records;
  const std::vector<uint64_t> primes = primes_in_range(config.prime_min, config.prime_max);

  for (uint32_t v : config.v_values) {
    // Candidate pairs (p, v): v | p-1, plus primitivity of v when g = v is forced.
    std::vector<uint64_t> candidates;
    for (uint64_t p : primes) {
      if ((p - 1) % v != 0 || v > p - 1) continue;
      if (config.require_g_equals_v && !is_primitive_root(v, p)) continue;
      candidates.push_back(p);
    }
    if (candidates.size() < config.pairs_per_v) {
      throw ParameterError("run_trial_grid: only " + std::to_string(candidates.size()) +
                           " admissible primes for v=" + std::to_string(v) + " in [" +
                           std::to_string(config.prime_min) + ", " +
                           std::to_string(config.prime_max) + "], need " +
                           std::to_string(config.pairs_per_v));
    }
    // Deterministic pseudo-random subset: smallest seed-derived hash ranks.
    std::vector<std::pair<uint64_t, uint64_t>> ranked;
    ranked.reserve(candidates.size());
    for (uint64_t p : candidates) {
      ranked.emplace_back(splitmix(splitmix(config.seed ^ p) ^ v), p);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<uint64_t> chosen;
    for (uint32_t i = 0; i < config.pairs_per_v; ++i) chosen.push_back(ranked[i].second);
    std::sort(chosen.begin(), chosen.end());

    for (uint64_t p : chosen) {
      std::vector<uint64_t> generators;
      if (config.require_g_equals_v) {
        generators.push_back(v);
      } else {
        generators = primitive_roots(p, config.generators_per_prime);
      }
      for (uint64_t g : generators) {
        const SequenceZv seq = elgamal_sequence({p, g, v});
        const RunStats runs = run_counts(seq);
        for (uint32_t t : config.t_values) {
          if (t > seq.size()) continue;
          TrialRecord rec;
          rec.p = p;
          rec.g = g;
          rec.v = v;
          rec.t = t;

          const TupleStats tuples = tuple_counts(seq, t);
          const uint64_t space = tuple_space_size(v, t);
          uint64_t min_l = std::numeric_limits<uint64_t>::max();
          uint64_t max_l = 0;
          for (const auto& [key, count] : tuples.counts) {
            min_l = std::min(min_l, count);
            max_l = std::max(max_l, count);
          }
          rec.all_tuples_present = tuples.counts.size() == space;
          if (!rec.all_tuples_present) min_l = 0;
          rec.min_lambda = min_l;
          rec.max_lambda = max_l;

          const BoundInterval tuple_interval = elgamal_tuple_bounds(p, g, v, t);
          rec.lb = tuple_interval.lower;
          rec.ub = tuple_interval.upper;
          rec.lb_vacuous = tuple_interval.vacuous;
          if (BigInt(rec.min_lambda) < rec.lb || BigInt(rec.max_lambda) > rec.ub) {
            throw InvariantViolationError(
                "run_trial_grid: tuple bound containment failed at p=" + std::to_string(p) +
                " g=" + std::to_string(g) + " v=" + std::to_string(v) +
                " t=" + std::to_string(t));
          }
          rec.lb_hit = BigInt(rec.min_lambda) == rec.lb;
          rec.ub_hit = BigInt(rec.max_lambda) == rec.ub;

          if (config.retain_raw_lambda && space <= config.raw_lambda_cap) {
            std::map<uint64_t, uint64_t> hist;
            for (const auto& [key, count] : tuples.counts) ++hist[count];
            const uint64_t absent = space - tuples.counts.size();
            if (absent > 0) hist[0] += absent;
            rec.has_raw = true;
            rec.raw_lambda_hist.assign(hist.begin(), hist.end());
          }

          rec.run_interval = best_run_bounds(p, g, v, t);
          rec.rho.resize(v);
          for (uint32_t b = 0; b < v; ++b) {
            rec.rho[b] = runs.rho(b, t);
            if (!rec.run_interval.contains(BigInt(rec.rho[b]))) {
              throw InvariantViolationError(
                  "run_trial_grid: run bound containment failed at p=" + std::to_string(p) +
                  " g=" + std::to_string(g) + " v=" + std::to_string(v) +
                  " t=" + std::to_string(t) + " b=" + std::to_string(b));
            }
          }
          rec.rho_total_t = runs.rho_total(t);
          rec.rho_total_t1 = runs.rho_total(t + 1);
          if (rec.rho_total_t > 0) {
            rec.has_ratio = true;
            rec.ratio = static_cast<double>(rec.rho_total_t1) * v /
                        static_cast<double>(rec.rho_total_t);
          }
          records.push_back(std::move(rec));
        }
      }
    }
  }
  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.p, a.g, a.v, a.t) < std::tie(b.p, b.g, b.v, b.t);
  });
  return records;
}

std::map<std::pair<uint32_t, uint32_t>, TightnessEntry> bound_tightness_report(
    const std::vector<TrialRecord>& records) {
  if (records.empty()) throw ParameterError("bound_tightness_report: no records");
  struct Tally {
    uint64_t n = 0, lb_hit = 0, ub_hit = 0;
    uint64_t all_present = 0, lb_hit_all_present = 0;
    uint64_t g_eq_v = 0, ub_hit_g_eq_v = 0;
  };
  std::map<std::pair<uint32_t, uint32_t>, Tally> tallies;
  for (const auto& rec : records) {
    Tally& t = tallies[{rec.v, rec.t}];
    ++t.n;
    t.lb_hit += rec.lb_hit;
    t.ub_hit += rec.ub_hit;
    if (rec.all_tuples_present) {
      ++t.all_present;
      t.lb_hit_all_present += rec.lb_hit;
    }
    if (rec.g == rec.v) {
      ++t.g_eq_v;
      t.ub_hit_g_eq_v += rec.ub_hit;
    }
  }
  std::map<std::pair<uint32_t, uint32_t>, TightnessEntry> report;
  for (const auto& [key, t] : tallies) {
    TightnessEntry entry;
    entry.records = t.n;
    entry.all_present_records = t.all_present;
    entry.g_eq_v_records = t.g_eq_v;
    entry.pct_lb_hit = 100.0 * t.lb_hit / t.n;
    entry.pct_ub_hit = 100.0 * t.ub_hit / t.n;
    if (t.all_present > 0) {
      entry.pct_lb_hit_given_all_present = 100.0 * t.lb_hit_all_present / t.all_present;
    }
    if (t.g_eq_v > 0) {
      entry.pct_ub_hit_given_g_eq_v = 100.0 * t.ub_hit_g_eq_v / t.g_eq_v;
    }
    report[key] = entry;
  }
  return report;
}

GapDistribution gap_distribution_report(const std::vector<TrialRecord>& records,
                                        uint64_t tracked_max) {
  if (records.empty()) throw ParameterError("gap_distribution_report: no records");
  GapDistribution gaps;
  gaps.tracked_max = tracked_max;
  for (const auto& rec : records) {
    if (rec.min_lambda == 0) {
      ++gaps.lower_excluded;
    } else {
      const BigInt gap = BigInt(rec.min_lambda) - rec.lb;
      if (gap > tracked_max) ++gaps.lower_outliers;
      else ++gaps.lower_gaps[gap.convert_to<uint64_t>()];
    }
    const BigInt gap = rec.ub - rec.max_lambda;
    if (gap > tracked_max) ++gaps.upper_outliers;
    else ++gaps.upper_gaps[gap.convert_to<uint64_t>()];
  }
  return gaps;
}

NormalizedLambdaReport normalized_lambda_report(const std::vector<TrialRecord>& records,
                                                double bin_width) {
  NormalizedLambdaReport report;
  report.bin_width = bin_width;
  double sum = 0, sum2 = 0, sum3 = 0, sum4 = 0;
  uint64_t total = 0;
  for (const auto& rec : records) {
    if (!rec.has_raw) continue;
    const double space = static_cast<double>(tuple_space_size(rec.v, rec.t));
    const double n = static_cast<double>(rec.p - 1);
    const double shift = n / space;
    const double scale = std::sqrt(space / n);
    for (const auto& [lambda, mult] : rec.raw_lambda_hist) {
      const double x = (static_cast<double>(lambda) - shift) * scale;
      report.bins[static_cast<int64_t>(std::floor(x / bin_width))] += mult;
      const double w = static_cast<double>(mult);
      sum += x * w;
      sum2 += x * x * w;
      sum3 += x * x * x * w;
      sum4 += x * x * x * x * w;
      total += mult;
    }
  }
  if (total == 0) {
    throw ParameterError("normalized_lambda_report: no records retained raw lambda maps");
  }
  report.samples = total;
  const double mean = sum / total;
  const double m2 = sum2 / total - mean * mean;
  report.mean = mean;
  if (m2 > 0) {
    const double m3 = sum3 / total - 3 * mean * sum2 / total + 2 * mean * mean * mean;
    const double m4 = sum4 / total - 4 * mean * sum3 / total + 6 * mean * mean * sum2 / total -
                      3 * mean * mean * mean * mean;
    report.skewness = m3 / std::pow(m2, 1.5);
    report.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return report;
}

RunRatioReport run_ratio_report(const std::vector<TrialRecord>& records) {
  RunRatioReport report;
  for (const auto& rec : records) {
    if (!rec.has_ratio) {
      ++report.dropped;
      continue;
    }
    report.samples.emplace_back(rec.t, rec.ratio);
  }
  std::map<uint32_t, std::vector<double>> grouped;
  for (const auto& [t, ratio] : report.samples) grouped[t].push_back(ratio);
  for (auto& [t, values] : grouped) {
    std::sort(values.begin(), values.end());
    auto rank = [&](double q) {
      const std::size_t idx = static_cast<std::size_t>(q * (values.size() - 1));
      return values[idx];
    };
    RatioSummary summary;
    summary.count = values.size();
    const std::size_t m = values.size();
    summary.median = (m % 2) ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
    summary.q25 = rank(0.25);
    summary.q75 = rank(0.75);
    report.per_t[t] = summary;
  }
  return report;
}

MonteCarloResult monte_carlo_moments(uint32_t v, uint64_t n, const MonteCarloTarget& target,
                                     uint64_t samples, uint64_t seed) {
  if (samples == 0) throw ParameterError("monte_carlo_moments: samples must be >= 1");
  MonteCarloResult result;
  result.samples = samples;
  result.theory = target.is_tuple ? tuple_moments_exact(v, n, target.z)
                                  : run_moments_exact(v, n, target.t);
  std::mt19937_64 rng = derive_stream(seed, v, n, target.is_tuple ? 0x74 : 0x72);
  double sum = 0, sum2 = 0;
  for (uint64_t s = 0; s < samples; ++s) {
    const SequenceZv word = random_balanced_sequence(v, n, rng);
    uint64_t value;
    if (target.is_tuple) {
      value = count_single_tuple(word, target.z);
    } else {
      value = run_counts(word).rho(target.b, target.t);
    }
    sum += static_cast<double>(value);
    sum2 += static_cast<double>(value) * static_cast<double>(value);
  }
  result.empirical_mean = sum / static_cast<double>(samples);
  result.empirical_variance =
      sum2 / static_cast<double>(samples) - result.empirical_mean * result.empirical_mean;
  const double theory_var = to_double(result.theory.variance);
  if (theory_var > 0) {
    result.z_score = (result.empirical_mean - to_double(result.theory.mean)) /
                     std::sqrt(theory_var / static_cast<double>(samples));
  }
  return result;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "p,g,v,t,min_lambda,max_lambda,lb,ub,lb_hit,ub_hit,all_tuples_present,lb_vacuous,"
        "rho_total_t,rho_total_t1,ratio\n";
  for (const auto& rec : records) {
    os << rec.p << ',' << rec.g << ',' << rec.v << ',' << rec.t << ',' << rec.min_lambda << ','
       << rec.max_lambda << ',' << rec.lb << ',' << rec.ub << ',' << rec.lb_hit << ','
       << rec.ub_hit << ',' << rec.all_tuples_present << ',' << rec.lb_vacuous << ','
       << rec.rho_total_t << ',' << rec.rho_total_t1 << ',';
    if (rec.has_ratio) os << format_double(rec.ratio);
    os << "\n";
  }
}

void write_runs_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "p,g,v,t,b,rho,lb,ub,source_lower,source_upper,vacuous_flag\n";
  for (const auto& rec : records) {
    for (uint32_t b = 0; b < rec.v; ++b) {
      os << rec.p << ',' << rec.g << ',' << rec.v << ',' << rec.t << ',' << b << ','
         << rec.rho[b] << ',' << rec.run_interval.lower << ',' << rec.run_interval.upper << ',';
      for (std::size_t i = 0; i < rec.run_interval.lower_sources.size(); ++i) {
        if (i) os << '|';
        os << to_string(rec.run_interval.lower_sources[i]);
      }
      os << ',';
      for (std::size_t i = 0; i < rec.run_interval.upper_sources.size(); ++i) {
        if (i) os << '|';
        os << to_string(rec.run_interval.upper_sources[i]);
      }
      os << ',' << (rec.run_interval.vacuous ? 1 : 0) << "\n";
    }
  }
}

void write_ratio_triples_csv(std::ostream& os, const RunRatioReport& report, double bin_width) {
  os << "x,y,weight\n";
  std::map<std::pair<uint32_t, int64_t>, uint64_t> binned;
  for (const auto& [t, ratio] : report.samples) {
    ++binned[{t, static_cast<int64_t>(std::floor(ratio / bin_width))}];
  }
  for (const auto& [key, weight] : binned) {
    const double center = (static_cast<double>(key.second) + 0.5) * bin_width;
    os << key.first << ',' << format_double(center) << ',' << weight << "\n";
  }
}

std::string aggregates_to_json(const std::vector<TrialRecord>& records) {
  nlohmann::ordered_json j;
  j["records"] = records.size();

  auto tightness = nlohmann::ordered_json::array();
  for (const auto& [key, entry] : bound_tightness_report(records)) {
    nlohmann::ordered_json e;
    e["v"] = key.first;
    e["t"] = key.second;
    e["records"] = entry.records;
    e["pct_lb_hit"] = entry.pct_lb_hit;
    e["pct_ub_hit"] = entry.pct_ub_hit;
    if (entry.pct_lb_hit_given_all_present) {
      e["pct_lb_hit_given_all_present"] = *entry.pct_lb_hit_given_all_present;
    } else {
      e["pct_lb_hit_given_all_present"] = nullptr;
    }
    if (entry.pct_ub_hit_given_g_eq_v) {
      e["pct_ub_hit_given_g_eq_v"] = *entry.pct_ub_hit_given_g_eq_v;
    } else {
      e["pct_ub_hit_given_g_eq_v"] = nullptr;
    }
    tightness.push_back(std::move(e));
  }
  j["bound_tightness"] = std::move(tightness);

  const GapDistribution gaps = gap_distribution_report(records);
  nlohmann::ordered_json gj;
  gj["lower_gaps"] = nlohmann::ordered_json::object();
  for (const auto& [gap, count] : gaps.lower_gaps) gj["lower_gaps"][std::to_string(gap)] = count;
  gj["upper_gaps"] = nlohmann::ordered_json::object();
  for (const auto& [gap, count] : gaps.upper_gaps) gj["upper_gaps"][std::to_string(gap)] = count;
  gj["lower_outliers"] = gaps.lower_outliers;
  gj["upper_outliers"] = gaps.upper_outliers;
  gj["lower_excluded_zero_min"] = gaps.lower_excluded;
  gj["tracked_max"] = gaps.tracked_max;
  j["gap_distribution"] = std::move(gj);

  bool any_raw = false;
  for (const auto& rec : records) any_raw = any_raw || rec.has_raw;
  if (any_raw) {
    const NormalizedLambdaReport norm = normalized_lambda_report(records);
    nlohmann::ordered_json nj;
    nj["bin_width"] = norm.bin_width;
    nj["samples"] = norm.samples;
    nj["mean"] = norm.mean;
    if (norm.skewness) nj["skewness"] = *norm.skewness; else nj["skewness"] = nullptr;
    if (norm.excess_kurtosis) nj["excess_kurtosis"] = *norm.excess_kurtosis;
    else nj["excess_kurtosis"] = nullptr;
    nj["bins"] = nlohmann::ordered_json::object();
    for (const auto& [bin, mass] : norm.bins) nj["bins"][std::to_string(bin)] = mass;
    j["normalized_lambda"] = std::move(nj);
  } else {
    j["normalized_lambda"] = nullptr;
  }

  const RunRatioReport ratios = run_ratio_report(records);
  nlohmann::ordered_json rj;
  rj["dropped_zero_denominator"] = ratios.dropped;
  rj["per_t"] = nlohmann::ordered_json::object();
  for (const auto& [t, summary] : ratios.per_t) {
    nlohmann::ordered_json sj;
    sj["count"] = summary.count;
    sj["median"] = summary.median;
    sj["q25"] = summary.q25;
    sj["q75"] = summary.q75;
    rj["per_t"][std::to_string(t)] = std::move(sj);
  }
  j["run_ratios"] = std::move(rj);
  return j.dump(2);
}

std::string run_experiment(const ExperimentConfig& config) {
  std::string out_dir = config.output_dir;
  if (const char* env = std::getenv("ELSEQ_OUTPUT_DIR")) {
    if (*env) out_dir = env;
  }
  std::filesystem::create_directories(out_dir);
  const std::vector<TrialRecord> records = run_trial_grid(config);

  {
    std::ofstream os(out_dir + "/trials.csv", std::ios::binary);
    write_trials_csv(os, records);
  }
  {
    std::ofstream os(out_dir + "/runs.csv", std::ios::binary);
    write_runs_csv(os, records);
  }
  {
    std::ofstream os(out_dir + "/ratios.csv", std::ios::binary);
    write_ratio_triples_csv(os, run_ratio_report(records));
  }
  {
    std::ofstream os(out_dir + "/aggregates.json", std::ios::binary);
    os << aggregates_to_json(records) << "\n";
  }
  return out_dir;
}

}  // namespace elseq
