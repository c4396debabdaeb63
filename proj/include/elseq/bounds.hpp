#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "elseq/theory.hpp"

namespace elseq {

enum class BoundSource {
  tuple_thm,
  runs_diff,
  runs_sum,
  g_invertible,
  combined,
  exact_balance,  // t = 1 tuple special case
};

std::string to_string(BoundSource source);

/// Integer interval guaranteed to contain the counted statistic.
/// decompositions records the (q, r) pairs p = q*g^e + r that fed the
/// formulas; raw_lower keeps the pre-clamp value when clamping applied.
struct BoundInterval {
  BigInt lower;
  BigInt upper;
  BoundSource source = BoundSource::tuple_thm;
  std::vector<BoundSource> lower_sources;  // provenance (ties listed together)
  std::vector<BoundSource> upper_sources;
  bool vacuous = false;  // some q = 0: the lower side degrades to 0
  BigInt raw_lower;      // equals lower unless clamped
  std::vector<std::pair<uint64_t, uint64_t>> decompositions;

  bool contains(const BigInt& x) const { return lower <= x && x <= upper; }
};

/// Tuple-count bounds: with p = q g^(t-1) + r,
/// floor(g/v)^(t-1) floor(q/v) <= lambda(z) <= ceil(g/v)^(t-1) (floor(q/v)+1)
/// for every z in Z_v^t. t = 1 returns the exact balanced-count interval.
BoundInterval elgamal_tuple_bounds(uint64_t p, uint64_t g, uint32_t v, uint32_t t);

/// Run-prefix counts mu(z) (match on the first t-1 symbols, mismatch at
/// the last): same decomposition, one g/v factor replaced by (v-1)g/v.
BoundInterval mu_bounds(uint64_t p, uint64_t g, uint32_t v, uint32_t t);

/// rho(b,t) = mu(b^(t+1)) - mu(b^(t+2)); lower clamped at 0.
BoundInterval run_bounds_difference(uint64_t p, uint64_t g, uint32_t v, uint64_t t);

/// rho(b,t) = sum over a != b of mu(a b^(t+1)).
BoundInterval run_bounds_sum(uint64_t p, uint64_t g, uint32_t v, uint64_t t);

/// Sharper run bounds available when gcd(g, v) = 1.
BoundInterval run_bounds_invertible(uint64_t p, uint64_t g, uint32_t v, uint64_t t);

/// Componentwise best of the applicable run bounds, with per-side
/// provenance (every source achieving the extreme is listed).
BoundInterval best_run_bounds(uint64_t p, uint64_t g, uint32_t v, uint64_t t);

/// In the g = v regime every lambda(z) is floor(q/v) or floor(q/v)+1;
/// the two occupancy numbers solve a 2x2 linear system exactly.
struct TupleCountSplit {
  BigInt n_lower;          // tuples with lambda = floor(q/v)
  BigInt n_upper;          // tuples with lambda = floor(q/v)+1
  uint64_t floor_q_v = 0;  // the lower of the two admissible values
  bool upper_attained = false;        // n_upper > 0
  bool p_congruent_1_mod_vt = false;  // holds iff n_upper = 0
};
TupleCountSplit tuple_count_split(uint64_t p, uint32_t v, uint32_t t);

/// Successors admissible after symbol a when g < v:
/// {(g*a - s) mod v : 0 <= s < g}.
std::set<uint32_t> successor_set(uint64_t g, uint32_t v, uint32_t a);

/// Coverage conditions for "every t-tuple occurs":
/// sufficient: p >= v g^(t-1) and g >= v; necessary: g >= v and p >= v^t+1.
/// When g = v the two coincide and `covered` is the exact verdict.
struct TupleCoverage {
  bool sufficient = false;
  bool necessary = false;
  bool iff_applicable = false;  // g == v
  bool covered = false;         // meaningful when iff_applicable
};
TupleCoverage tuple_coverage_check(uint64_t p, uint64_t g, uint32_t v, uint32_t t);

/// CSV row per interval: p,g,v,t,kind,lower,upper,source_lower,source_upper,vacuous_flag.
void write_bound_csv_header(std::ostream& os);
void write_bound_csv_row(std::ostream& os, uint64_t p, uint64_t g, uint32_t v, uint64_t t,
                         const std::string& kind, const BoundInterval& interval);

}  // namespace elseq
