#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "elseq/bounds.hpp"
#include "elseq/modarith.hpp"
#include "elseq/seqgen.hpp"
#include "elseq/stats.hpp"

using namespace elseq;

namespace {

// Direct mu(z) counter: match on the first t-1 symbols, mismatch at the last.
uint64_t naive_mu(const SequenceZv& seq, const std::vector<uint32_t>& z) {
  const uint64_t n = seq.size();
  const uint64_t t = z.size();
  uint64_t count = 0;
  for (uint64_t i = 0; i < n; ++i) {
    bool match = seq.at_wrapped(i + t - 1) != z[t - 1];
    for (uint64_t j = 0; j + 1 < t && match; ++j) match = seq.at_wrapped(i + j) == z[j];
    count += match;
  }
  return count;
}

}  // namespace

TEST_CASE("elgamal_tuple_bounds frozen cases") {
  const BoundInterval b13 = elgamal_tuple_bounds(13, 2, 2, 2);
  CHECK(b13.lower == 3);
  CHECK(b13.upper == 4);
  CHECK(b13.decompositions == std::vector<std::pair<uint64_t, uint64_t>>{{6, 1}});
  CHECK_FALSE(b13.vacuous);

  // t = 1 special case: exact balanced count.
  const BoundInterval exact = elgamal_tuple_bounds(13, 2, 2, 1);
  CHECK(exact.lower == 6);
  CHECK(exact.upper == 6);
  CHECK(exact.source == BoundSource::exact_balance);

  // 1759 = 48 * 6^2 + 31; floor(6/2) = ceil(6/2) = 3.
  const BoundInterval big = elgamal_tuple_bounds(1759, 6, 2, 3);
  CHECK(big.decompositions == std::vector<std::pair<uint64_t, uint64_t>>{{48, 31}});
  CHECK(big.lower == 9 * 24);
  CHECK(big.upper == 9 * 25);

  // Containment against a full scan of the actual sequence.
  const TupleStats stats = tuple_counts(elgamal_sequence({1759, 6, 2}), 3);
  uint64_t lo = UINT64_MAX, hi = 0, total = 0;
  for (const auto& [key, count] : stats.counts) {
    lo = std::min(lo, count);
    hi = std::max(hi, count);
    total += count;
  }
  if (stats.counts.size() < 8) lo = 0;
  CHECK(total == 1758);
  CHECK(BigInt(lo) >= big.lower);
  CHECK(BigInt(hi) <= big.upper);
}

TEST_CASE("vacuous lower bound when g^(t-1) exceeds p") {
  const BoundInterval interval = elgamal_tuple_bounds(13, 7, 2, 3);  // 7^2 = 49 > 13
  CHECK(interval.vacuous);
  CHECK(interval.lower == 0);
}

TEST_CASE("mu_bounds bracket direct prefix-mismatch counts") {
  const BoundInterval small = mu_bounds(13, 2, 2, 3);
  CHECK(small.lower == 1);
  CHECK(small.upper == 2);
  const SequenceZv seq13 = elgamal_sequence({13, 2, 2});
  for (uint64_t key = 0; key < 8; ++key) {
    const std::vector<uint32_t> z = decode_tuple(key, 2, 3);
    CHECK(small.contains(BigInt(naive_mu(seq13, z))));
  }

  // Degenerate t = 2: the g/v power is an empty product.
  const BoundInterval degenerate = mu_bounds(13, 2, 2, 2);
  CHECK(degenerate.lower == 1 * 3);  // floor((v-1)g/v) * floor(q/v), q = 6
  CHECK(degenerate.upper == 1 * 4);

  const SequenceZv seq1097 = elgamal_sequence({1097, 3, 2});
  const BoundInterval wide = mu_bounds(1097, 3, 2, 3);
  for (uint64_t key = 0; key < 8; ++key) {
    const std::vector<uint32_t> z = decode_tuple(key, 2, 3);
    CHECK(wide.contains(BigInt(naive_mu(seq1097, z))));
  }
}

TEST_CASE("mu_bounds containment sweep") {
  for (uint64_t p : primes_in_range(7, 300)) {
    for (uint64_t g : primitive_roots(p, 2)) {
      for (uint32_t v = 2; v <= 4 && v < p - 1; ++v) {
        const SequenceZv seq = elgamal_sequence({p, g, v});
        for (uint32_t t = 2; t <= 3; ++t) {
          const BoundInterval interval = mu_bounds(p, g, v, t);
          for (uint64_t key = 0; key < tuple_space_size(v, t); ++key) {
            const std::vector<uint32_t> z = decode_tuple(key, v, t);
            CHECK(interval.contains(BigInt(naive_mu(seq, z))));
          }
        }
      }
    }
  }
}

TEST_CASE("run_bounds_sum frozen case and containment") {
  const BoundInterval interval = run_bounds_sum(13, 2, 2, 1);
  CHECK(interval.lower == 1);
  CHECK(interval.upper == 2);
  const RunStats runs = run_counts(elgamal_sequence({13, 2, 2}));
  CHECK(interval.contains(BigInt(runs.rho(0, 1))));
  CHECK(interval.contains(BigInt(runs.rho(1, 1))));
}

TEST_CASE("run_bounds_difference clamps negative lower expressions") {
  // p = 13, g = 2, t = 3: q_3 = 1, q_4 = 0 makes the raw lower negative.
  const BoundInterval interval = run_bounds_difference(13, 2, 2, 3);
  CHECK(interval.raw_lower < 0);
  CHECK(interval.lower == 0);
  CHECK(interval.lower <= interval.upper);
}

TEST_CASE("run_bounds_invertible requires gcd(g, v) = 1 and brackets measurements") {
  CHECK_THROWS_AS(run_bounds_invertible(13, 2, 2, 1), ParameterError);  // gcd 2
  const BoundInterval vac = run_bounds_invertible(13, 7, 2, 1);         // 7^2 = 49 > 13
  CHECK(vac.vacuous);
  CHECK(vac.lower == 0);

  const RunStats runs = run_counts(elgamal_sequence({1097, 3, 2}));
  const BoundInterval interval = run_bounds_invertible(1097, 3, 2, 2);
  CHECK(interval.contains(BigInt(runs.rho(0, 2))));
  CHECK(interval.contains(BigInt(runs.rho(1, 2))));
}

TEST_CASE("invertible bounds are never wider than the sum bounds") {
  for (uint64_t p : primes_in_range(5, 500)) {
    for (uint64_t g : primitive_roots(p, 3)) {
      for (uint32_t v = 2; v <= 5 && v < p - 1; ++v) {
        if (std::gcd(g, static_cast<uint64_t>(v)) != 1) continue;
        for (uint64_t t = 1; t <= 3; ++t) {
          const BoundInterval inv = run_bounds_invertible(p, g, v, t);
          const BoundInterval sum = run_bounds_sum(p, g, v, t);
          CHECK(inv.lower >= sum.lower);
          CHECK(inv.upper <= sum.upper);
        }
      }
    }
  }
}

TEST_CASE("best_run_bounds provenance and monotone combination") {
  // p = 1759, g = 6: the difference route wins the lower side at t = 3.
  const BoundInterval best = best_run_bounds(1759, 6, 2, 3);
  CHECK(std::find(best.lower_sources.begin(), best.lower_sources.end(), BoundSource::runs_diff) !=
        best.lower_sources.end());
  CHECK(best.source == BoundSource::combined);

  // p = 1097, g = 6: the two upper bounds tie and both are recorded.
  const BoundInterval tie = best_run_bounds(1097, 6, 2, 3);
  CHECK(run_bounds_difference(1097, 6, 2, 3).upper == run_bounds_sum(1097, 6, 2, 3).upper);
  CHECK(tie.upper_sources.size() >= 2);

  for (uint64_t p : primes_in_range(5, 300)) {
    for (uint64_t g : primitive_roots(p, 2)) {
      for (uint32_t v = 2; v <= 4 && v < p - 1; ++v) {
        const RunStats runs = run_counts(elgamal_sequence({p, g, v}));
        for (uint64_t t = 1; t <= 3; ++t) {
          const BoundInterval combined = best_run_bounds(p, g, v, t);
          const BoundInterval diff = run_bounds_difference(p, g, v, t);
          const BoundInterval sum = run_bounds_sum(p, g, v, t);
          CHECK(combined.lower >= diff.lower);
          CHECK(combined.lower >= sum.lower);
          CHECK(combined.upper <= diff.upper);
          CHECK(combined.upper <= sum.upper);
          for (uint32_t b = 0; b < v; ++b) {
            CHECK(combined.contains(BigInt(runs.rho(b, t))));
          }
        }
      }
    }
  }
}

TEST_CASE("tuple_count_split solves the occupancy system") {
  const TupleCountSplit s13 = tuple_count_split(13, 2, 2);
  CHECK(s13.n_lower == 4);
  CHECK(s13.n_upper == 0);
  CHECK(s13.p_congruent_1_mod_vt);  // 13 = 1 mod 4
  CHECK_FALSE(s13.upper_attained);

  const TupleCountSplit s11 = tuple_count_split(11, 2, 2);
  CHECK(s11.n_lower == 2);
  CHECK(s11.n_upper == 2);
  CHECK(s11.floor_q_v == 2);

  // n_l > 0 across a sweep.
  for (uint64_t p : primes_in_range(5, 2000)) {
    for (uint32_t v = 2; v <= 5 && v <= p - 1; ++v) {
      if (!is_primitive_root(v, p)) continue;
      for (uint32_t t = 1; t <= 4; ++t) {
        CHECK(tuple_count_split(p, v, t).n_lower > 0);
      }
    }
  }

  CHECK_THROWS_AS(tuple_count_split(13, 3, 2), ParameterError);  // 3 not primitive mod 13
}

TEST_CASE("successor_set") {
  CHECK(successor_set(2, 5, 1) == std::set<uint32_t>{1, 2});
  CHECK(successor_set(2, 3, 0) == std::set<uint32_t>{0, 2});
  CHECK_THROWS_AS(successor_set(5, 3, 0), ParameterError);
  CHECK_THROWS_AS(successor_set(2, 5, 7), ParameterError);

  // Every adjacent pair of an ElGamal sequence with g < v obeys the relation.
  for (uint64_t p : primes_in_range(7, 200)) {
    for (uint64_t g : primitive_roots(p, 4)) {
      for (uint32_t v = static_cast<uint32_t>(g) + 1; v <= g + 3 && v < p - 1; ++v) {
        if ((p - 1) % v != 0) continue;  // the relation needs p = 1 mod v
        const SequenceZv seq = elgamal_sequence({p, g, v});
        for (uint64_t i = 0; i < seq.size(); ++i) {
          const auto allowed = successor_set(g, v, seq.symbols[i]);
          CHECK(allowed.count(seq.at_wrapped(i + 1)) == 1);
        }
      }
    }
  }
}

TEST_CASE("tuple_coverage_check") {
  const TupleCoverage c2 = tuple_coverage_check(13, 2, 2, 2);
  CHECK(c2.iff_applicable);
  CHECK(c2.covered);  // 13 >= 2^2 + 1, confirmed by the lambda scan elsewhere
  CHECK(c2.sufficient);

  const TupleCoverage c4 = tuple_coverage_check(13, 2, 2, 4);
  CHECK_FALSE(c4.covered);  // 13 < 2^4 + 1
  const TupleStats stats = tuple_counts(elgamal_sequence({13, 2, 2}), 4);
  CHECK(stats.counts.size() < 16);  // some 4-tuple is indeed missing

  const TupleCoverage small_g = tuple_coverage_check(11, 2, 3, 2);  // g = 2 < v = 3
  CHECK_FALSE(small_g.necessary);
  CHECK_FALSE(small_g.sufficient);
}

TEST_CASE("coverage verdict matches scans when g = v") {
  for (uint64_t p : primes_in_range(5, 500)) {
    for (uint32_t v = 2; v <= 4 && v < p - 1; ++v) {
      if (!is_primitive_root(v, p)) continue;
      const SequenceZv seq = elgamal_sequence({p, v, v});
      for (uint32_t t = 1; t <= 4 && t <= seq.size(); ++t) {
        const bool all_present = tuple_counts(seq, t).counts.size() == tuple_space_size(v, t);
        CHECK(all_present == tuple_coverage_check(p, v, v, t).covered);
      }
    }
  }
}

TEST_CASE("bound CSV emission") {
  std::ostringstream os;
  write_bound_csv_header(os);
  write_bound_csv_row(os, 13, 2, 2, 2, "tuple", elgamal_tuple_bounds(13, 2, 2, 2));
  CHECK(os.str() ==
        "p,g,v,t,kind,lower,upper,source_lower,source_upper,vacuous_flag\n"
        "13,2,2,2,tuple,3,4,tuple_thm,tuple_thm,0\n");
}
