#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "elseq/errors.hpp"

namespace elseq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A count that is exact (arbitrary precision) below a size threshold
/// and carried as log2 above it. log2_value is populated in both modes.
struct BigCount {
  bool exact = true;
  BigInt value;       // meaningful only when exact
  double log2_value;  // always meaningful

  static BigCount from_exact(BigInt v);
  static BigCount from_log2(double lg2);
};

/// Exact (mean, variance) over B(v, n), as rationals.
struct MomentPair {
  Rational mean;
  Rational variance;
};

constexpr uint64_t kDefaultExactnessThreshold = 20'000;

/// Descending product x(x-1)...(x-m+1); empty product is 1.
BigInt descending_product(const BigInt& x, uint64_t m);

BigInt factorial(uint64_t n);

/// rho! / ((rho/v)!)^v; cached internally.
BigInt multinomial_balanced(uint64_t rho, uint32_t v);

/// s(v, rho): balanced words of length rho, i.e. words whose circular
/// extension has period dividing rho. Requires v | rho.
BigCount count_period_dividing(uint32_t v, uint64_t rho,
                               uint64_t exactness_threshold = kDefaultExactnessThreshold);

/// t(v, rho): balanced words of length rho with least period exactly
/// rho, by Moebius inversion over the divisors of rho/v. Requires v | rho.
BigCount count_period_exact(uint32_t v, uint64_t rho,
                            uint64_t exactness_threshold = kDefaultExactnessThreshold);

/// T = t(v, p-1) * (((p-1)/v)!)^v: permutations of Z_p^* whose mod-v
/// reduction has maximal period p-1. Requires v | p-1.
BigCount count_max_period_permutations(uint64_t p, uint32_t v,
                                       uint64_t exactness_threshold = kDefaultExactnessThreshold);

/// The two sides of the Moebius-truncation bracket on T: keep d = 1 and
/// the prime divisors of k = (p-1)/v for the lower side, only the least
/// prime for the upper side. Guarantees lower <= T <= upper.
std::pair<BigCount, BigCount> max_period_count_bounds(
    uint64_t p, uint32_t v, uint64_t exactness_threshold = kDefaultExactnessThreshold);

struct Probability {
  double value;  // underflows to 0 below ~1e-308; log10_value stays finite
  double log10_value;
};

/// Chance that a random permutation of Z_p^* reduces to a sequence with
/// period below p-1. Closed form v!(q!)^v/(vq)! when p = vq + 1 with q
/// prime; with full_census, 1 - T/(p-1)! via the Moebius census.
Probability short_period_probability(uint64_t p, uint32_t v, bool full_census = false,
                                     uint64_t exactness_threshold = kDefaultExactnessThreshold);

/// Exact E and VAR of lambda(z) over B(v, n). Requires v | n and
/// n > 2t-2 (below that the window pair can wrap onto itself and the
/// formulas degenerate).
MomentPair tuple_moments_exact(uint32_t v, uint64_t n, const std::vector<uint32_t>& z);

/// Exact E and VAR of rho(b, t) over B(v, n); independent of b.
/// Requires v | n and n >= t+2. The variance pair-sum is evaluated
/// case by case so the result stays exact down to small n.
MomentPair run_moments_exact(uint32_t v, uint64_t n, uint64_t t);

/// O(1/n) polynomial approximations for the tuple moments. These are
/// approximations with unspecified error constants, not certified bounds.
struct TupleMomentApprox {
  double e_lower;
  double e_upper;
  double var_lower;
  double var_upper;
  double var_upper_nonoverlap;  // valid when z cannot overlap itself
};
TupleMomentApprox tuple_moment_approximations(uint32_t v, uint64_t n, uint32_t t);

/// Leading-term approximations for the run moments.
struct RunMomentApprox {
  double e_leading;
  double var_leading;
};
RunMomentApprox run_moment_approximations(uint32_t v, uint64_t n, uint64_t t);

/// True iff z(i+k) = z(i) for all 0 <= i < t-k: a copy of z shifted by k
/// can overlap itself.
bool self_overlap_possible(const std::vector<uint32_t>& z, uint64_t k);

double to_double(const Rational& r);

}  // namespace elseq
