#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "elseq/seqgen.hpp"

namespace elseq {

/// Circular t-tuple occurrence counts lambda(z). Keys are tuples encoded
/// base v (first symbol most significant); absent keys mean count 0.
/// Sum of counts is always n: each of the n starting positions
/// contributes exactly one window.
struct TupleStats {
  uint32_t v = 0;
  uint32_t t = 0;
  uint64_t n = 0;
  std::unordered_map<uint64_t, uint64_t> counts;

  uint64_t count_of(uint64_t key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Circular run counts: per_symbol[(b, t)] is the number of maximal
/// blocks of symbol b of length exactly t; totals[t] sums over b.
struct RunStats {
  std::map<std::pair<uint32_t, uint64_t>, uint64_t> per_symbol;
  std::map<uint64_t, uint64_t> totals;

  uint64_t rho(uint32_t b, uint64_t t) const {
    auto it = per_symbol.find({b, t});
    return it == per_symbol.end() ? 0 : it->second;
  }
  uint64_t rho_total(uint64_t t) const {
    auto it = totals.find(t);
    return it == totals.end() ? 0 : it->second;
  }
};

struct BalanceProfile {
  std::vector<uint64_t> counts;  // indexed by symbol
  uint64_t max_difference = 0;   // max |count(a) - count(b)| over all pairs
};

/// v^t; throws ResourceCapError once past 2^62 (tuple keys must encode).
uint64_t tuple_space_size(uint32_t v, uint32_t t);

uint64_t encode_tuple(const std::vector<uint32_t>& z, uint32_t v);
std::vector<uint32_t> decode_tuple(uint64_t key, uint32_t v, uint32_t t);
/// Tuples rendered as digit strings ("0110"); dot-separated past base 10.
std::string tuple_to_string(const std::vector<uint32_t>& z, uint32_t v);
std::vector<uint32_t> tuple_from_string(const std::string& text, uint32_t v);

/// One O(n) rolling pass over circular windows. Requires 1 <= t <= n
/// and v^t encodable in 63 bits.
TupleStats tuple_counts(const SequenceZv& seq, uint32_t t);

/// One O(n) pass over circular maximal blocks; the wraparound block is
/// merged. A constant sequence counts as a single run of length n.
RunStats run_counts(const SequenceZv& seq);

BalanceProfile balance_profile(const SequenceZv& seq);

/// max |lambda(z1) - lambda(z2)| over all z1, z2 in Z_v^t, zero-count
/// tuples included. <= 1 means the t-tuple balance property holds.
/// Throws ResourceCapError when v^t exceeds enumeration_cap.
uint64_t tuple_balance_deviation(const TupleStats& stats, uint64_t enumeration_cap = 10'000'000);

/// lambda(z) for a single fixed tuple, without building the full map.
uint64_t count_single_tuple(const SequenceZv& seq, const std::vector<uint32_t>& z);

/// CSV rows (kind, key, count), kind in {tuple, run_symbol, run_total}.
void write_stats_csv(std::ostream& os, const TupleStats& tuples, const RunStats& runs);

}  // namespace elseq
