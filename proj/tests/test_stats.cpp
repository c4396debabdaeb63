#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "elseq/seqgen.hpp"
#include "elseq/stats.hpp"

using namespace elseq;

namespace {

// Reference counter: enumerate all v^t tuples and scan each window.
std::map<std::vector<uint32_t>, uint64_t> naive_tuple_counts(const SequenceZv& seq, uint32_t t) {
  std::map<std::vector<uint32_t>, uint64_t> out;
  const uint64_t n = seq.size();
  for (uint64_t i = 0; i < n; ++i) {
    std::vector<uint32_t> window(t);
    for (uint32_t k = 0; k < t; ++k) window[k] = seq.at_wrapped(i + k);
    ++out[window];
  }
  return out;
}

SequenceZv rotate(const SequenceZv& seq, uint64_t shift) {
  SequenceZv out;
  out.v = seq.v;
  out.symbols.resize(seq.size());
  for (uint64_t i = 0; i < seq.size(); ++i) out.symbols[i] = seq.at_wrapped(i + shift);
  return out;
}

}  // namespace

TEST_CASE("tuple_counts on the p = 13 ElGamal sequence") {
  const SequenceZv seq = elgamal_sequence({13, 2, 2});
  const TupleStats stats = tuple_counts(seq, 2);
  for (uint64_t key = 0; key < 4; ++key) CHECK(stats.count_of(key) == 3);
  CHECK(tuple_balance_deviation(stats) == 0);
}

TEST_CASE("tuple_counts small cases") {
  const TupleStats ones = tuple_counts(make_sequence(2, {0, 1, 0, 1}), 1);
  CHECK(ones.count_of(0) == 2);
  CHECK(ones.count_of(1) == 2);

  const TupleStats pairs = tuple_counts(make_sequence(2, {0, 0, 1, 1}), 2);
  CHECK(pairs.count_of(encode_tuple({0, 0}, 2)) == 1);
  CHECK(pairs.count_of(encode_tuple({0, 1}, 2)) == 1);
  CHECK(pairs.count_of(encode_tuple({1, 1}, 2)) == 1);
  CHECK(pairs.count_of(encode_tuple({1, 0}, 2)) == 1);

  CHECK_THROWS_AS(tuple_counts(make_sequence(2, {0, 1}), 3), ParameterError);
  CHECK_THROWS_AS(tuple_counts(make_sequence(2, {0, 1}), 0), ParameterError);
}

TEST_CASE("tuple_counts agrees with the naive reference on random inputs") {
  auto rng = derive_stream(31);
  for (int trial = 0; trial < 40; ++trial) {
    const uint32_t v = 2 + static_cast<uint32_t>(uniform_below(rng, 3));  // 2..4
    const uint64_t n = v * (1 + uniform_below(rng, 64 / v));
    const SequenceZv seq = random_balanced_sequence(v, n, rng);
    for (uint32_t t = 1; t <= 4 && t <= n; ++t) {
      const TupleStats fast = tuple_counts(seq, t);
      uint64_t total = 0;
      for (const auto& [window, count] : naive_tuple_counts(seq, t)) {
        CHECK(fast.count_of(encode_tuple(window, v)) == count);
        total += count;
      }
      CHECK(total == n);  // every starting position contributes once
      uint64_t fast_total = 0;
      for (const auto& [key, count] : fast.counts) fast_total += count;
      CHECK(fast_total == n);
    }
  }
}

TEST_CASE("run_counts handles wraparound and the constant convention") {
  const RunStats runs = run_counts(elgamal_sequence({13, 2, 2}));
  for (uint64_t t : {1, 2, 3}) {
    CHECK(runs.rho(0, t) == 1);
    CHECK(runs.rho(1, t) == 1);
    CHECK(runs.rho_total(t) == 2);
  }
  CHECK(runs.rho(0, 4) == 0);

  const RunStats alternating = run_counts(make_sequence(2, {0, 1, 0, 1}));
  CHECK(alternating.rho(0, 1) == 2);
  CHECK(alternating.rho(1, 1) == 2);

  const RunStats constant = run_counts(make_sequence(2, {0, 0, 0, 0}));
  CHECK(constant.rho(0, 4) == 1);
  CHECK(constant.totals.size() == 1);
}

TEST_CASE("run_counts invariants: occurrences partition into runs") {
  auto rng = derive_stream(77);
  for (int trial = 0; trial < 40; ++trial) {
    const uint32_t v = 2 + static_cast<uint32_t>(uniform_below(rng, 3));
    const uint64_t n = v * (1 + uniform_below(rng, 60 / v));
    const SequenceZv seq = random_balanced_sequence(v, n, rng);
    const RunStats runs = run_counts(seq);
    const BalanceProfile profile = balance_profile(seq);
    std::vector<uint64_t> from_runs(v, 0);
    for (const auto& [bt, count] : runs.per_symbol) {
      from_runs[bt.first] += bt.second * count;
    }
    for (uint32_t b = 0; b < v; ++b) CHECK(from_runs[b] == profile.counts[b]);
    for (const auto& [t, total] : runs.totals) {
      uint64_t sum = 0;
      for (uint32_t b = 0; b < v; ++b) sum += runs.rho(b, t);
      CHECK(sum == total);
    }
  }
}

TEST_CASE("tuple and run statistics are rotation invariant") {
  auto rng = derive_stream(99);
  for (int trial = 0; trial < 15; ++trial) {
    const SequenceZv seq = random_balanced_sequence(3, 18, rng);
    const uint64_t shift = uniform_below(rng, seq.size());
    const SequenceZv rotated = rotate(seq, shift);
    for (uint32_t t : {1u, 2u, 3u}) {
      CHECK(tuple_counts(seq, t).counts == tuple_counts(rotated, t).counts);
    }
    const RunStats a = run_counts(seq);
    const RunStats b = run_counts(rotated);
    CHECK(a.per_symbol == b.per_symbol);
    CHECK(a.totals == b.totals);
  }
}

TEST_CASE("marginalization: extending a window by one symbol") {
  auto rng = derive_stream(42);
  const SequenceZv seq = random_balanced_sequence(3, 12, rng);
  for (uint32_t t : {1u, 2u}) {
    const TupleStats shorter = tuple_counts(seq, t);
    const TupleStats longer = tuple_counts(seq, t + 1);
    for (uint64_t key = 0; key < tuple_space_size(seq.v, t); ++key) {
      uint64_t sum = 0;
      for (uint32_t c = 0; c < seq.v; ++c) sum += longer.count_of(key * seq.v + c);
      CHECK(sum == shorter.count_of(key));
    }
  }
}

TEST_CASE("balance_profile") {
  const BalanceProfile profile = balance_profile(make_sequence(2, {0, 0, 1}));
  CHECK(profile.counts == std::vector<uint64_t>{2, 1});
  CHECK(profile.max_difference == 1);
  const BalanceProfile absent = balance_profile(make_sequence(3, {0, 0, 1, 1}));
  CHECK(absent.counts == std::vector<uint64_t>{2, 2, 0});
  CHECK(absent.max_difference == 2);
}

TEST_CASE("tuple_balance_deviation") {
  CHECK(tuple_balance_deviation(tuple_counts(make_sequence(2, {0, 1, 0, 1}), 2)) == 2);
  TupleStats degenerate;
  degenerate.v = 2;
  degenerate.t = 0;  // v^t = 1: single empty tuple
  degenerate.n = 4;
  degenerate.counts[0] = 4;
  CHECK(tuple_balance_deviation(degenerate) == 0);
  TupleStats huge;
  huge.v = 10;
  huge.t = 9;
  CHECK_THROWS_AS(tuple_balance_deviation(huge), ResourceCapError);
}

TEST_CASE("stats CSV export") {
  const SequenceZv seq = make_sequence(2, {0, 0, 1, 1});
  std::ostringstream os;
  write_stats_csv(os, tuple_counts(seq, 2), run_counts(seq));
  CHECK(os.str() ==
        "kind,key,count\n"
        "tuple,00,1\n"
        "tuple,01,1\n"
        "tuple,10,1\n"
        "tuple,11,1\n"
        "run_symbol,0:2,1\n"
        "run_symbol,1:2,1\n"
        "run_total,2,2\n");
}

TEST_CASE("count_single_tuple matches the full map") {
  auto rng = derive_stream(1234);
  const SequenceZv seq = random_balanced_sequence(2, 20, rng);
  const TupleStats stats = tuple_counts(seq, 3);
  for (uint64_t key = 0; key < 8; ++key) {
    CHECK(count_single_tuple(seq, decode_tuple(key, 2, 3)) == stats.count_of(key));
  }
}
