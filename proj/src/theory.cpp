#include "elseq/theory.hpp"

#include <cmath>
#include <limits>
#include <mutex>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "elseq/modarith.hpp"

namespace elseq {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kLn10 = 2.302585092994045684;

// log2(n!) with >= 30 significant decimal digits, for counts past the
// exactness threshold.
double log2_factorial(uint64_t n) {
  const BigFloat lg = boost::math::lgamma(BigFloat(n) + 1);
  return static_cast<double>(lg / kLn2);
}

// log2 of the balanced multinomial rho! / ((rho/v)!)^v.
double log2_multinomial_balanced(uint64_t rho, uint32_t v) {
  return log2_factorial(rho) - static_cast<double>(v) * log2_factorial(rho / v);
}

double log2_bigint(const BigInt& x) {
  if (x <= 0) return std::numeric_limits<double>::quiet_NaN();
  const BigFloat f(x);
  return static_cast<double>(boost::multiprecision::log(f) / kLn2);
}

Probability probability_from_rational(const Rational& r) {
  if (r == 0) return {0.0, -std::numeric_limits<double>::infinity()};
  const BigFloat f = BigFloat(boost::multiprecision::numerator(r)) /
                     BigFloat(boost::multiprecision::denominator(r));
  return {f.convert_to<double>(),
          static_cast<double>(boost::multiprecision::log10(f))};
}

void require_divides(uint32_t v, uint64_t rho, const char* where) {
  if (v < 2) throw ParameterError(std::string(where) + ": v must be >= 2");
  if (rho == 0 || rho % v != 0) throw ParameterError(std::string(where) + ": v must divide rho");
}

}  // namespace

BigCount BigCount::from_exact(BigInt v) {
  BigCount out;
  out.exact = true;
  out.log2_value = log2_bigint(v);
  out.value = std::move(v);
  return out;
}

BigCount BigCount::from_log2(double lg2) {
  BigCount out;
  out.exact = false;
  out.value = 0;
  out.log2_value = lg2;
  return out;
}

BigInt descending_product(const BigInt& x, uint64_t m) {
  BigInt out = 1;
  for (uint64_t i = 0; i < m; ++i) out *= x - i;
  return out;
}

BigInt factorial(uint64_t n) {
  // Cached prefix keeps repeated small queries cheap without letting a
  // single huge query pin hundreds of megabytes of factorials.
  constexpr uint64_t kCacheLimit = 2000;
  static std::vector<BigInt> cache{1, 1};
  static std::mutex mutex;
  BigInt out;
  uint64_t next;
  {
    std::lock_guard<std::mutex> lock(mutex);
    while (cache.size() <= std::min(n, kCacheLimit)) cache.push_back(cache.back() * cache.size());
    if (n < cache.size()) return cache[n];
    out = cache.back();
    next = cache.size();
  }
  for (uint64_t i = next; i <= n; ++i) out *= i;
  return out;
}

BigInt multinomial_balanced(uint64_t rho, uint32_t v) {
  BigInt denom = 1;
  const BigInt part = factorial(rho / v);
  for (uint32_t i = 0; i < v; ++i) denom *= part;
  return factorial(rho) / denom;
}

BigCount count_period_dividing(uint32_t v, uint64_t rho, uint64_t exactness_threshold) {
  require_divides(v, rho, "count_period_dividing");
  if (rho <= exactness_threshold) return BigCount::from_exact(multinomial_balanced(rho, v));
  return BigCount::from_log2(log2_multinomial_balanced(rho, v));
}

BigCount count_period_exact(uint32_t v, uint64_t rho, uint64_t exactness_threshold) {
  require_divides(v, rho, "count_period_exact");
  const uint64_t k = rho / v;
  if (rho <= exactness_threshold) {
    BigInt total = 0;
    for (uint64_t d : divisors(k)) {
      const int mu = mobius(d);
      if (mu == 0) continue;
      total += mu * multinomial_balanced(rho / d, v);
    }
    return BigCount::from_exact(total);
  }
  // The d = 1 term dominates; fold the rest in as a relative correction.
  const double lead = log2_multinomial_balanced(rho, v);
  double correction = 0.0;
  for (uint64_t d : divisors(k)) {
    if (d == 1) continue;
    const int mu = mobius(d);
    if (mu == 0) continue;
    correction += mu * std::exp2(log2_multinomial_balanced(rho / d, v) - lead);
  }
  return BigCount::from_log2(lead + std::log1p(correction) / kLn2);
}

BigCount count_max_period_permutations(uint64_t p, uint32_t v, uint64_t exactness_threshold) {
  require_divides(v, p - 1, "count_max_period_permutations");
  const uint64_t k = (p - 1) / v;
  const BigCount census = count_period_exact(v, p - 1, exactness_threshold);
  if (census.exact) {
    BigInt lift = 1;
    const BigInt part = factorial(k);
    for (uint32_t i = 0; i < v; ++i) lift *= part;
    return BigCount::from_exact(census.value * lift);
  }
  return BigCount::from_log2(census.log2_value + static_cast<double>(v) * log2_factorial(k));
}

std::pair<BigCount, BigCount> max_period_count_bounds(uint64_t p, uint32_t v,
                                                      uint64_t exactness_threshold) {
  require_divides(v, p - 1, "max_period_count_bounds");
  const uint64_t k = (p - 1) / v;
  const std::vector<uint64_t> qs = factorize(k).primes();
  if (p - 1 <= exactness_threshold) {
    BigInt kfact_pow = 1;
    const BigInt kfact = factorial(k);
    for (uint32_t i = 0; i < v; ++i) kfact_pow *= kfact;
    const BigInt full = factorial(p - 1);
    BigInt lower = full;
    BigInt upper = full;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const BigInt term = multinomial_balanced((p - 1) / qs[i], v) * kfact_pow;
      lower -= term;
      if (i == 0) upper -= term;  // qs is sorted, so qs[0] is the least prime
    }
    return {BigCount::from_exact(lower), BigCount::from_exact(upper)};
  }
  const double lg_full = log2_factorial(p - 1);
  const double lg_lift = static_cast<double>(v) * log2_factorial(k);
  double sum_ratio = 0.0;
  double least_ratio = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double ratio =
        std::exp2(log2_multinomial_balanced((p - 1) / qs[i], v) + lg_lift - lg_full);
    sum_ratio += ratio;
    if (i == 0) least_ratio = ratio;
  }
  return {BigCount::from_log2(lg_full + std::log1p(-sum_ratio) / kLn2),
          BigCount::from_log2(lg_full + std::log1p(-least_ratio) / kLn2)};
}

Probability short_period_probability(uint64_t p, uint32_t v, bool full_census,
                                     uint64_t exactness_threshold) {
  require_divides(v, p - 1, "short_period_probability");
  const uint64_t k = (p - 1) / v;
  if (!full_census) {
    if (!is_prime(k)) {
      throw ParameterError(
          "short_period_probability: closed form needs p = vq + 1 with q prime");
    }
    if (p - 1 <= exactness_threshold) {
      BigInt numer = factorial(v);
      const BigInt qfact = factorial(k);
      for (uint32_t i = 0; i < v; ++i) numer *= qfact;
      return probability_from_rational(Rational(numer, factorial(p - 1)));
    }
    const double lg2 = log2_factorial(v) + static_cast<double>(v) * log2_factorial(k) -
                       log2_factorial(p - 1);
    return {std::exp2(lg2), lg2 * kLn2 / kLn10};
  }
  // 1 - T/(p-1)! equals (s - t)(k!)^v / (p-1)!; s - t keeps only the
  // divisors d > 1 of the Moebius sum, so no catastrophic cancellation.
  if (k == 1) return {0.0, -std::numeric_limits<double>::infinity()};
  if (p - 1 <= exactness_threshold) {
    BigInt short_words = 0;
    for (uint64_t d : divisors(k)) {
      if (d == 1) continue;
      const int mu = mobius(d);
      if (mu == 0) continue;
      short_words -= mu * multinomial_balanced((p - 1) / d, v);
    }
    BigInt lift = 1;
    const BigInt kfact = factorial(k);
    for (uint32_t i = 0; i < v; ++i) lift *= kfact;
    return probability_from_rational(Rational(short_words * lift, factorial(p - 1)));
  }
  double lead = -std::numeric_limits<double>::infinity();
  for (uint64_t d : divisors(k)) {
    if (d == 1 || mobius(d) == 0) continue;
    lead = std::max(lead, log2_multinomial_balanced((p - 1) / d, v));
  }
  double sum = 0.0;
  for (uint64_t d : divisors(k)) {
    if (d == 1) continue;
    const int mu = mobius(d);
    if (mu == 0) continue;
    sum -= mu * std::exp2(log2_multinomial_balanced((p - 1) / d, v) - lead);
  }
  const double lg2 = lead + std::log2(sum) + static_cast<double>(v) * log2_factorial(k) -
                     log2_factorial(p - 1);
  return {std::exp2(lg2), lg2 * kLn2 / kLn10};
}

bool self_overlap_possible(const std::vector<uint32_t>& z, uint64_t k) {
  const uint64_t t = z.size();
  for (uint64_t i = 0; i + k < t; ++i) {
    if (z[i + k] != z[i]) return false;
  }
  return true;
}

MomentPair tuple_moments_exact(uint32_t v, uint64_t n, const std::vector<uint32_t>& z) {
  if (v < 2) throw ParameterError("tuple_moments_exact: v must be >= 2");
  if (n == 0 || n % v != 0) throw ParameterError("tuple_moments_exact: v must divide n");
  const uint64_t t = z.size();
  if (t == 0) throw ParameterError("tuple_moments_exact: tuple must be nonempty");
  for (uint32_t s : z) {
    if (s >= v) throw ParameterError("tuple_moments_exact: symbol out of range");
  }
  if (n <= 2 * t - 2) {
    throw UnsupportedRegimeError("tuple_moments_exact: requires n > 2t-2");
  }
  const BigInt l = n / v;
  std::vector<uint64_t> count(v, 0);
  for (uint32_t s : z) ++count[s];

  auto symbol_product = [&](const std::vector<uint64_t>& extra) {
    BigInt prod = 1;
    for (uint32_t a = 0; a < v; ++a) prod *= descending_product(l, count[a] + extra[a]);
    return prod;
  };

  const std::vector<uint64_t> none(v, 0);
  const Rational mean(symbol_product(none), descending_product(n - 1, t - 1));

  // Non-overlapping pair term.
  Rational var = mean - mean * mean;
  {
    BigInt prod = 1;
    for (uint32_t a = 0; a < v; ++a) prod *= descending_product(l, 2 * count[a]);
    var += Rational(prod, descending_product(n - 1, 2 * t - 2));
  }
  // Overlapping pairs at shift k, when z agrees with its own k-shift.
  for (uint64_t k = 1; k < t; ++k) {
    if (!self_overlap_possible(z, k)) continue;
    std::vector<uint64_t> prefix(v, 0);
    for (uint64_t i = 0; i < k; ++i) ++prefix[z[i]];
    var += 2 * Rational(symbol_product(prefix), descending_product(n - 1, t + k - 1));
  }
  return {mean, var};
}

MomentPair run_moments_exact(uint32_t v, uint64_t n, uint64_t t) {
  if (v < 2) throw ParameterError("run_moments_exact: v must be >= 2");
  if (n == 0 || n % v != 0) throw ParameterError("run_moments_exact: v must divide n");
  if (t == 0) throw ParameterError("run_moments_exact: t must be >= 1");
  if (n < t + 2) {
    throw UnsupportedRegimeError("run_moments_exact: requires n >= t+2 (run plus flanks)");
  }
  const BigInt l = n / v;
  const BigInt big_l = l * (v - 1);  // occurrences of non-b symbols
  const BigInt vm1 = v - 1;
  const BigInt vm2 = BigInt(v) - 2;
  const BigInt vm3 = BigInt(v) - 3;
  const BigInt vm4 = BigInt(v) - 4;

  const Rational mean(
      (big_l - 1) * vm1 * l * descending_product(l, t),
      descending_product(n - 1, t + 1));

  Rational pair_sum = 0;
  if (n == 2 * t + 2) {
    // The two runs share both flanking positions; the word is fully
    // forced, which is only balanced in the v = 2, l = 2t case.
    if (v == 2 && l == BigInt(2 * t)) {
      pair_sum = Rational(BigInt(n), multinomial_balanced(n, v));
    }
  } else if (n >= 2 * t + 3) {
    // Adjacent pairs sharing one flank: window of 2t+3 positions.
    const BigInt k3 = vm1 * (descending_product(l, 3) + 3 * vm2 * l * descending_product(l, 2) +
                             vm2 * vm3 * l * l * l);
    pair_sum += Rational(2 * n * descending_product(l, 2 * t) * k3,
                         descending_product(n, 2 * t + 3));
    if (n >= 2 * t + 4) {
      // Fully separated pairs: window of 2t+4 positions, four free flanks.
      const BigInt dp2 = descending_product(l, 2);
      const BigInt k4 = vm1 * (descending_product(l, 4) + 4 * vm2 * l * descending_product(l, 3) +
                               3 * vm2 * dp2 * dp2 + 6 * vm2 * vm3 * l * l * dp2 +
                               vm2 * vm3 * vm4 * l * l * l * l);
      pair_sum += Rational(BigInt(n) * (n - 2 * t - 3) * descending_product(l, 2 * t) * k4,
                           descending_product(n, 2 * t + 4));
    }
  }
  const Rational variance = mean + pair_sum - mean * mean;
  return {mean, variance};
}

namespace {

double a1_poly(double t, double v) { return -(t * t - 2 * t * v + v * v - t) * (v - 1); }

double b1_poly(double t, double v) {
  return (3 * (v - 1) * std::pow(t, 4) - 2 * (6 * v * v - v - 1) * std::pow(t, 3) +
          3 * (6 * std::pow(v, 3) + 2 * v * v - v + 1) * t * t -
          2 * (6 * std::pow(v, 4) + 3 * std::pow(v, 3) - 3 * v * v + v + 1) * t +
          3 * std::pow(v, 5) + std::pow(v, 4) - 2 * std::pow(v, 3)) *
         (v - 1);
}

double a3_poly(double t, double v, double vt) {
  return 2 * vt - 3 * (v - 1) * t * t + 2 * (v * v - v - 2) * t + 2;
}

double a4_poly(double t, double v, double vt) {
  return (2 * (v + 1) * vt + (v - 1) * (v - 1) * t * t - 2 * (v - 1) * (v * v - v + 2) * t +
          std::pow(v, 4) - 2 * std::pow(v, 3) + v * v - 2 * v - 2) /
         (v - 1);
}

double b3_poly(double t, double v, double vt) {
  return -12 * (t * t - 2 * v * t - t + v * v) * (v - 1) * vt +
         45 * (v - 1) * (v - 1) * std::pow(t, 4) -
         4 * (21 * v - 26) * (v + 1) * (v - 1) * std::pow(t, 3) +
         6 * (9 * std::pow(v, 3) + v * v - 17 * v - 14) * (v - 1) * t * t -
         12 * (std::pow(v, 4) - 2 * v * v - 4 * v - 2) * (v - 1) * t -
         (3 * v - 1) * (v + 6) * (v - 1) * v;
}

double b4_poly(double t, double v, double vt) {
  return (12 * (v * v * t - t + 2 * v) * vt - 3 * std::pow(v - 1, 3) * std::pow(t, 4) +
          4 * (v - 1) * (v - 1) * (v + 1) * (3 * v - 2) * std::pow(t, 3) -
          18 * (v * v - v + 1) * (v + 2) * (v - 1) * (v - 1) * t * t +
          12 * (std::pow(v, 3) + v * v + 2) * (v * v - v - 1) * (v - 1) * t -
          (3 * std::pow(v, 6) - 5 * std::pow(v, 5) - std::pow(v, 4) + 5 * std::pow(v, 3) -
           2 * v * v + 24) *
              v) /
         (v - 1);
}

double a5_poly(double t, double v, double vt) {
  return 2 * vt + (v - 1) * t * t - 2 * (v * v - v + 2) * t + (v * v - 2 * v + 2) * (v + 1);
}

double b5_poly(double t, double v, double vt) {
  return 12 * (v - 1) * t * vt - 3 * (v - 1) * (v - 1) * std::pow(t, 4) +
         4 * (v - 1) * (v + 1) * (3 * v - 2) * std::pow(t, 3) -
         18 * (v * v - v + 1) * (v + 2) * (v - 1) * t * t +
         12 * (std::pow(v, 4) + std::pow(v, 3) - v * v + 2) * (v - 1) * t -
         (3 * v - 2) * (v + 1) * (v - 1) * std::pow(v, 3);
}

double a6_poly(double t, double v, double vt2) {
  return (v - 1) * (vt2 - std::pow(v - 1, 3) * t * t + 2 * (v - 1) * (v - 1) * t -
                    (v - 1) * (v + 1));
}

double b6_poly(double t, double v, double vt2) {
  return vt2 * (-(v - 1) * (v - 1) * t * t + (v - 1) * (v + 3) * t - 2) +
         3 * std::pow(v - 1, 5) * std::pow(t, 4) - 4 * std::pow(v - 1, 4) * (v + 4) * std::pow(t, 3) +
         std::pow(v - 1, 3) * (v * v + 8 * v + 31) * t * t -
         2 * (v - 1) * (v - 1) * (v * v + 2 * v + 13) + 8 * (v - 1);
}

}  // namespace

TupleMomentApprox tuple_moment_approximations(uint32_t v, uint64_t n, uint32_t t) {
  if (v < 2 || t < 1 || n < 1) throw ParameterError("tuple_moment_approximations: bad parameters");
  const double vd = v;
  const double td = t;
  const double nd = static_cast<double>(n);
  const double vt = std::pow(vd, td);
  TupleMomentApprox out;
  out.e_lower = nd / vt * (1 + a1_poly(td, vd) / (2 * nd) + b1_poly(td, vd) / (24 * nd * nd));
  out.e_upper = nd / vt *
                (1 + td * (vd - 1) / (2 * nd) +
                 (3 * (vd + 1) * td * td - 2 * (vd + 1) * td + (3 * vd * vd + 5 * vd - 6) * vd) *
                     (vd - 1) / (24 * nd * nd));
  const double v2t = vt * vt;
  out.var_lower = nd / v2t * (a3_poly(td, vd, vt) / 2 + b3_poly(td, vd, vt) / (24 * nd));
  out.var_upper = nd / v2t * (a4_poly(td, vd, vt) / 2 + b4_poly(td, vd, vt) / (24 * nd));
  out.var_upper_nonoverlap =
      nd / v2t * (a5_poly(td, vd, vt) / 2 + b5_poly(td, vd, vt) / (24 * nd));
  return out;
}

RunMomentApprox run_moment_approximations(uint32_t v, uint64_t n, uint64_t t) {
  if (v < 2 || t < 1 || n < 1) throw ParameterError("run_moment_approximations: bad parameters");
  const double vd = v;
  const double td = static_cast<double>(t);
  const double nd = static_cast<double>(n);
  const double vt2 = std::pow(vd, td + 2);
  RunMomentApprox out;
  out.e_leading =
      nd * (vd - 1) / vt2 *
      ((vd - 1) - ((vd - 1) * (vd - 1) * td * td - (vd + 3) * (vd - 1) * td + 2) / (2 * nd));
  out.var_leading =
      nd * (vd - 1) / (vt2 * vt2) * (a6_poly(td, vd, vt2) + b6_poly(td, vd, vt2) / (2 * nd));
  return out;
}

double to_double(const Rational& r) {
  const BigFloat f = BigFloat(boost::multiprecision::numerator(r)) /
                     BigFloat(boost::multiprecision::denominator(r));
  return f.convert_to<double>();
}

}  // namespace elseq
