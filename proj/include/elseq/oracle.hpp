#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elseq/seqgen.hpp"
#include "elseq/theory.hpp"

namespace elseq {

/// Exact histogram of a statistic over all of B(v, n): support maps an
/// observed count to the number of sequences attaining it.
struct CountDistribution {
  std::map<uint64_t, uint64_t> support;
  uint64_t population = 0;
};

constexpr uint64_t kDefaultEnumerationCap = 10'000'000;

/// Visits every balanced word of length n over Z_v exactly once, in
/// lexicographic order (multiset-permutation successor). Returns the
/// population. Throws ResourceCapError when |B(v,n)| exceeds the cap.
uint64_t for_each_balanced(uint32_t v, uint64_t n,
                           const std::function<void(const SequenceZv&)>& visit,
                           uint64_t cap = kDefaultEnumerationCap);

std::vector<SequenceZv> enumerate_balanced(uint32_t v, uint64_t n,
                                           uint64_t cap = kDefaultEnumerationCap);

/// Histogram of lambda(z) over B(v, n).
CountDistribution exact_tuple_distribution(uint32_t v, uint64_t n, const std::vector<uint32_t>& z,
                                           uint64_t cap = kDefaultEnumerationCap);

/// Histogram of rho(b, t) over B(v, n).
CountDistribution exact_run_distribution(uint32_t v, uint64_t n, uint32_t b, uint64_t t,
                                         uint64_t cap = kDefaultEnumerationCap);

/// Least-period census over B(v, n): period -> number of words.
std::map<uint64_t, uint64_t> exact_period_census(uint32_t v, uint64_t n,
                                                 uint64_t cap = kDefaultEnumerationCap);

/// Exact mean and variance of a histogram.
MomentPair distribution_moments(const CountDistribution& dist);

struct NormalitySummary {
  double mean = 0;
  double variance = 0;
  std::optional<double> skewness;         // absent when variance is 0
  std::optional<double> excess_kurtosis;  // absent when variance is 0
};

/// Moment-based location/shape summary; requires population >= 2.
NormalitySummary normality_diagnostic(const CountDistribution& dist);

/// JSON export: {v, n, kind, key, histogram: [[count, freq], ...], population}.
std::string distribution_to_json(const CountDistribution& dist, uint32_t v, uint64_t n,
                                 const std::string& kind, const std::string& key);

}  // namespace elseq
