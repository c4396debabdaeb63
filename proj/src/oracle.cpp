#include "elseq/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "elseq/stats.hpp"

namespace elseq {

uint64_t for_each_balanced(uint32_t v, uint64_t n,
                           const std::function<void(const SequenceZv&)>& visit, uint64_t cap) {
  if (v < 2) throw ParameterError("for_each_balanced: v must be >= 2");
  if (n == 0 || n % v != 0) throw ParameterError("for_each_balanced: v must divide n");
  const BigInt population = multinomial_balanced(n, v);
  if (population > cap) {
    throw ResourceCapError("for_each_balanced: |B(v,n)| exceeds the enumeration cap");
  }
  SequenceZv word;
  word.v = v;
  word.symbols.resize(n);
  const uint64_t l = n / v;
  for (uint32_t a = 0; a < v; ++a) {
    std::fill(word.symbols.begin() + a * l, word.symbols.begin() + (a + 1) * l, a);
  }
  uint64_t count = 0;
  do {
    visit(word);
    ++count;
  } while (std::next_permutation(word.symbols.begin(), word.symbols.end()));
  return count;
}

std::vector<SequenceZv> enumerate_balanced(uint32_t v, uint64_t n, uint64_t cap) {
  std::vector<SequenceZv> out;
  for_each_balanced(v, n, [&](const SequenceZv& w) { out.push_back(w); }, cap);
  return out;
}

CountDistribution exact_tuple_distribution(uint32_t v, uint64_t n, const std::vector<uint32_t>& z,
                                           uint64_t cap) {
  if (z.empty() || z.size() > n) {
    throw ParameterError("exact_tuple_distribution: need 1 <= len(z) <= n");
  }
  for (uint32_t s : z) {
    if (s >= v) throw ParameterError("exact_tuple_distribution: symbol out of range");
  }
  CountDistribution dist;
  dist.population = for_each_balanced(
      v, n, [&](const SequenceZv& w) { ++dist.support[count_single_tuple(w, z)]; }, cap);
  return dist;
}

CountDistribution exact_run_distribution(uint32_t v, uint64_t n, uint32_t b, uint64_t t,
                                         uint64_t cap) {
  if (b >= v) throw ParameterError("exact_run_distribution: symbol out of range");
  if (t == 0) throw ParameterError("exact_run_distribution: t must be >= 1");
  CountDistribution dist;
  dist.population = for_each_balanced(
      v, n, [&](const SequenceZv& w) { ++dist.support[run_counts(w).rho(b, t)]; }, cap);
  return dist;
}

std::map<uint64_t, uint64_t> exact_period_census(uint32_t v, uint64_t n, uint64_t cap) {
  std::map<uint64_t, uint64_t> census;
  for_each_balanced(v, n, [&](const SequenceZv& w) { ++census[least_period(w)]; }, cap);
  return census;
}

MomentPair distribution_moments(const CountDistribution& dist) {
  if (dist.population == 0) throw ParameterError("distribution_moments: empty distribution");
  BigInt sum = 0;
  BigInt sum_sq = 0;
  for (const auto& [value, freq] : dist.support) {
    sum += BigInt(value) * freq;
    sum_sq += BigInt(value) * value * freq;
  }
  const Rational mean(sum, BigInt(dist.population));
  const Rational second(sum_sq, BigInt(dist.population));
  return {mean, second - mean * mean};
}

NormalitySummary normality_diagnostic(const CountDistribution& dist) {
  if (dist.population < 2) throw ParameterError("normality_diagnostic: population must be >= 2");
  const double pop = static_cast<double>(dist.population);
  double mean = 0;
  for (const auto& [value, freq] : dist.support) mean += static_cast<double>(value) * freq / pop;
  double m2 = 0, m3 = 0, m4 = 0;
  for (const auto& [value, freq] : dist.support) {
    const double d = static_cast<double>(value) - mean;
    const double w = freq / pop;
    m2 += d * d * w;
    m3 += d * d * d * w;
    m4 += d * d * d * d * w;
  }
  NormalitySummary summary;
  summary.mean = mean;
  summary.variance = m2;
  if (m2 > 0) {
    summary.skewness = m3 / std::pow(m2, 1.5);
    summary.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return summary;
}

std::string distribution_to_json(const CountDistribution& dist, uint32_t v, uint64_t n,
                                 const std::string& kind, const std::string& key) {
  nlohmann::ordered_json j;
  j["v"] = v;
  j["n"] = n;
  j["kind"] = kind;
  j["key"] = key;
  auto histogram = nlohmann::ordered_json::array();
  for (const auto& [value, freq] : dist.support) {
    histogram.push_back({value, freq});
  }
  j["histogram"] = std::move(histogram);
  j["population"] = dist.population;
  return j.dump();
}

}  // namespace elseq
