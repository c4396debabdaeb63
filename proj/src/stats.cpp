#include "elseq/stats.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace elseq {

namespace {

// v^t if it fits below 2^63, otherwise nullopt.
std::optional<uint64_t> checked_pow(uint64_t v, uint32_t t) {
  uint64_t out = 1;
  for (uint32_t i = 0; i < t; ++i) {
    if (out > (uint64_t(1) << 62) / v) return std::nullopt;
    out *= v;
  }
  return out;
}

}  // namespace

uint64_t tuple_space_size(uint32_t v, uint32_t t) {
  const auto span = checked_pow(v, t);
  if (!span) throw ResourceCapError("tuple_space_size: v^t exceeds the encodable range");
  return *span;
}

uint64_t encode_tuple(const std::vector<uint32_t>& z, uint32_t v) {
  uint64_t key = 0;
  for (uint32_t s : z) {
    if (s >= v) throw ParameterError("encode_tuple: symbol out of range");
    key = key * v + s;
  }
  return key;
}

std::vector<uint32_t> decode_tuple(uint64_t key, uint32_t v, uint32_t t) {
  std::vector<uint32_t> z(t);
  for (uint32_t i = t; i-- > 0;) {
    z[i] = static_cast<uint32_t>(key % v);
    key /= v;
  }
  return z;
}

std::string tuple_to_string(const std::vector<uint32_t>& z, uint32_t v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (v > 10 && i) os << '.';
    os << z[i];
  }
  return os.str();
}

std::vector<uint32_t> tuple_from_string(const std::string& text, uint32_t v) {
  std::vector<uint32_t> z;
  if (v > 10 || text.find('.') != std::string::npos) {
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, '.')) z.push_back(static_cast<uint32_t>(std::stoul(part)));
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw ParameterError("tuple parse: expected digits");
      z.push_back(static_cast<uint32_t>(c - '0'));
    }
  }
  for (uint32_t s : z) {
    if (s >= v) throw ParameterError("tuple parse: symbol out of range for alphabet");
  }
  if (z.empty()) throw ParameterError("tuple parse: empty tuple");
  return z;
}

TupleStats tuple_counts(const SequenceZv& seq, uint32_t t) {
  const uint64_t n = seq.size();
  if (t < 1 || t > n) throw ParameterError("tuple_counts: t must satisfy 1 <= t <= n");
  const auto span = checked_pow(seq.v, t);
  if (!span) throw ResourceCapError("tuple_counts: v^t too large for integer tuple keys");

  TupleStats stats;
  stats.v = seq.v;
  stats.t = t;
  stats.n = n;
  const uint64_t msd = *span / seq.v;  // v^(t-1)
  uint64_t key = 0;
  for (uint32_t i = 0; i < t; ++i) key = key * seq.v + seq.symbols[i % n];
  for (uint64_t i = 0; i < n; ++i) {
    ++stats.counts[key];
    key = (key - seq.symbols[i] * msd) * seq.v + seq.at_wrapped(i + t);
  }
  return stats;
}

RunStats run_counts(const SequenceZv& seq) {
  const uint64_t n = seq.size();
  RunStats stats;
  uint64_t start = 0;
  bool boundary_found = false;
  for (uint64_t i = 0; i < n; ++i) {
    if (seq.symbols[i] != seq.symbols[(i + n - 1) % n]) {
      start = i;
      boundary_found = true;
      break;
    }
  }
  if (!boundary_found) {
    // Constant sequence: by convention a single run of length n.
    stats.per_symbol[{seq.symbols[0], n}] = 1;
    stats.totals[n] = 1;
    return stats;
  }
  uint64_t i = 0;
  while (i < n) {
    const uint32_t b = seq.at_wrapped(start + i);
    uint64_t len = 1;
    while (i + len < n && seq.at_wrapped(start + i + len) == b) ++len;
    ++stats.per_symbol[{b, len}];
    ++stats.totals[len];
    i += len;
  }
  return stats;
}

BalanceProfile balance_profile(const SequenceZv& seq) {
  BalanceProfile profile;
  profile.counts.assign(seq.v, 0);
  for (uint32_t s : seq.symbols) ++profile.counts[s];
  const auto [lo, hi] = std::minmax_element(profile.counts.begin(), profile.counts.end());
  profile.max_difference = *hi - *lo;
  return profile;
}

uint64_t tuple_balance_deviation(const TupleStats& stats, uint64_t enumeration_cap) {
  const auto span = checked_pow(stats.v, stats.t);
  if (!span || *span > enumeration_cap) {
    throw ResourceCapError("tuple_balance_deviation: v^t exceeds the enumeration cap");
  }
  uint64_t max_count = 0;
  uint64_t min_count = std::numeric_limits<uint64_t>::max();
  for (const auto& [key, count] : stats.counts) {
    max_count = std::max(max_count, count);
    min_count = std::min(min_count, count);
  }
  if (stats.counts.size() < *span) min_count = 0;  // some tuple never occurs
  if (stats.counts.empty()) return 0;
  return max_count - min_count;
}

uint64_t count_single_tuple(const SequenceZv& seq, const std::vector<uint32_t>& z) {
  const uint64_t n = seq.size();
  const uint32_t t = static_cast<uint32_t>(z.size());
  if (t < 1 || t > n) throw ParameterError("count_single_tuple: t must satisfy 1 <= t <= n");
  uint64_t count = 0;
  for (uint64_t i = 0; i < n; ++i) {
    bool match = true;
    for (uint32_t k = 0; k < t && match; ++k) match = seq.at_wrapped(i + k) == z[k];
    count += match;
  }
  return count;
}

void write_stats_csv(std::ostream& os, const TupleStats& tuples, const RunStats& runs) {
  os << "kind,key,count\n";
  std::vector<uint64_t> keys;
  keys.reserve(tuples.counts.size());
  for (const auto& [key, count] : tuples.counts) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (uint64_t key : keys) {
    os << "tuple," << tuple_to_string(decode_tuple(key, tuples.v, tuples.t), tuples.v) << ','
       << tuples.count_of(key) << "\n";
  }
  for (const auto& [bt, count] : runs.per_symbol) {
    os << "run_symbol," << bt.first << ':' << bt.second << ',' << count << "\n";
  }
  for (const auto& [t, count] : runs.totals) {
    os << "run_total," << t << ',' << count << "\n";
  }
}

}  // namespace elseq
