#include "elseq/bounds.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "elseq/modarith.hpp"

namespace elseq {

namespace {

void validate_params(uint64_t p, uint64_t g, uint32_t v, const char* where) {
  if (p < 3 || !is_prime(p)) throw ParameterError(std::string(where) + ": p must be an odd prime");
  if (v < 2 || v > p - 1) throw ParameterError(std::string(where) + ": v must satisfy 2 <= v <= p-1");
  if (!is_primitive_root(g, p)) throw ParameterError(std::string(where) + ": g must be primitive mod p");
}

BigInt pow_int(BigInt base, uint64_t e) {
  BigInt out = 1;
  while (e) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// p = q * g^e + r with 0 <= r < g^e. q fits u64 because q <= p.
std::pair<uint64_t, uint64_t> decompose(uint64_t p, uint64_t g, uint64_t e) {
  const BigInt power = pow_int(g, e);
  const BigInt q = BigInt(p) / power;
  const BigInt r = BigInt(p) - q * power;
  return {q.convert_to<uint64_t>(), r.convert_to<uint64_t>()};
}

struct MuFactors {
  uint64_t fl;  // floor(g/v)
  uint64_t cl;  // ceil(g/v)
  uint64_t fw;  // floor((v-1)g/v)
  uint64_t cw;  // ceil((v-1)g/v)
};

MuFactors mu_factors(uint64_t g, uint32_t v) {
  MuFactors f;
  f.fl = g / v;
  f.cl = (g + v - 1) / v;
  const uint64_t wide = (static_cast<uint64_t>(v) - 1) * g;
  f.fw = wide / v;
  f.cw = (wide + v - 1) / v;
  return f;
}

BoundInterval finish(BoundInterval interval, BoundSource source) {
  interval.source = source;
  interval.lower_sources = {source};
  interval.upper_sources = {source};
  if (interval.raw_lower == 0 && interval.lower == 0) interval.raw_lower = interval.lower;
  return interval;
}

}  // namespace

std::string to_string(BoundSource source) {
  switch (source) {
    case BoundSource::tuple_thm: return "tuple_thm";
    case BoundSource::runs_diff: return "runs_diff";
    case BoundSource::runs_sum: return "runs_sum";
    case BoundSource::g_invertible: return "g_invertible";
    case BoundSource::combined: return "combined";
    case BoundSource::exact_balance: return "exact_balance";
  }
  return "?";
}

BoundInterval elgamal_tuple_bounds(uint64_t p, uint64_t g, uint32_t v, uint32_t t) {
  validate_params(p, g, v, "elgamal_tuple_bounds");
  if (t < 1) throw ParameterError("elgamal_tuple_bounds: t must be >= 1");
  BoundInterval interval;
  if (t == 1) {
    // Exact near-balance beats the theorem: counts are floor or ceil of (p-1)/v.
    const uint64_t n = p - 1;
    interval.lower = n / v;
    interval.upper = (n % v == 0) ? n / v : n / v + 1;
    interval.raw_lower = interval.lower;
    return finish(std::move(interval), BoundSource::exact_balance);
  }
  const auto [q, r] = decompose(p, g, t - 1);
  const MuFactors f = mu_factors(g, v);
  interval.lower = pow_int(f.fl, t - 1) * (q / v);
  interval.upper = pow_int(f.cl, t - 1) * (q / v + 1);
  interval.raw_lower = interval.lower;
  interval.vacuous = (q == 0);
  interval.decompositions = {{q, r}};
  return finish(std::move(interval), BoundSource::tuple_thm);
}

BoundInterval mu_bounds(uint64_t p, uint64_t g, uint32_t v, uint32_t t) {
  validate_params(p, g, v, "mu_bounds");
  if (t < 2) throw ParameterError("mu_bounds: t must be >= 2");
  const auto [q, r] = decompose(p, g, t - 1);
  const MuFactors f = mu_factors(g, v);
  BoundInterval interval;
  interval.lower = pow_int(f.fl, t - 2) * f.fw * (q / v);
  interval.upper = pow_int(f.cl, t - 2) * f.cw * (q / v + 1);
  interval.raw_lower = interval.lower;
  interval.vacuous = (q == 0);
  interval.decompositions = {{q, r}};
  return finish(std::move(interval), BoundSource::tuple_thm);
}

BoundInterval run_bounds_difference(uint64_t p, uint64_t g, uint32_t v, uint64_t t) {
  validate_params(p, g, v, "run_bounds_difference");
  if (t < 1) throw ParameterError("run_bounds_difference: t must be >= 1");
  const auto [qt, rt] = decompose(p, g, t);
  const auto [qt1, rt1] = decompose(p, g, t + 1);
  const MuFactors f = mu_factors(g, v);
  // mu(b^(t+1)) in [lo1, up1], mu(b^(t+2)) in [lo2, up2].
  const BigInt lo1 = pow_int(f.fl, t - 1) * f.fw * (qt / v);
  const BigInt up1 = pow_int(f.cl, t - 1) * f.cw * (qt / v + 1);
  const BigInt lo2 = pow_int(f.fl, t) * f.fw * (qt1 / v);
  const BigInt up2 = pow_int(f.cl, t) * f.cw * (qt1 / v + 1);
  BoundInterval interval;
  interval.raw_lower = lo1 - up2;
  interval.lower = interval.raw_lower < 0 ? BigInt(0) : interval.raw_lower;
  interval.upper = up1 - lo2;
  interval.vacuous = (qt == 0);
  interval.decompositions = {{qt, rt}, {qt1, rt1}};
  return finish(std::move(interval), BoundSource::runs_diff);
}

BoundInterval run_bounds_sum(uint64_t p, uint64_t g, uint32_t v, uint64_t t) {
  validate_params(p, g, v, "run_bounds_sum");
  if (t < 1) throw ParameterError("run_bounds_sum: t must be >= 1");
  const auto [q, r] = decompose(p, g, t + 1);
  const MuFactors f = mu_factors(g, v);
  BoundInterval interval;
  interval.lower = BigInt(v - 1) * pow_int(f.fl, t) * f.fw * (q / v);
  interval.upper = BigInt(v - 1) * pow_int(f.cl, t) * f.cw * (q / v + 1);
  interval.raw_lower = interval.lower;
  interval.vacuous = (q == 0);
  interval.decompositions = {{q, r}};
  return finish(std::move(interval), BoundSource::runs_sum);
}

BoundInterval run_bounds_invertible(uint64_t p, uint64_t g, uint32_t v, uint64_t t) {
  validate_params(p, g, v, "run_bounds_invertible");
  if (t < 1) throw ParameterError("run_bounds_invertible: t must be >= 1");
  if (std::gcd(g, static_cast<uint64_t>(v)) != 1) {
    throw ParameterError("run_bounds_invertible: g must be invertible in Z_v");
  }
  const auto [q, r] = decompose(p, g, t + 1);
  const MuFactors f = mu_factors(g, v);
  BoundInterval interval;
  interval.lower = pow_int(f.fl, t - 1) * f.fw * f.fw * (q / v);
  interval.upper = pow_int(f.cl, t - 1) * f.cw * f.cw * (q / v + 1);
  interval.raw_lower = interval.lower;
  interval.vacuous = (q == 0);
  interval.decompositions = {{q, r}};
  return finish(std::move(interval), BoundSource::g_invertible);
}

BoundInterval best_run_bounds(uint64_t p, uint64_t g, uint32_t v, uint64_t t) {
  std::vector<BoundInterval> candidates;
  candidates.push_back(run_bounds_difference(p, g, v, t));
  candidates.push_back(run_bounds_sum(p, g, v, t));
  if (std::gcd(g, static_cast<uint64_t>(v)) == 1) {
    candidates.push_back(run_bounds_invertible(p, g, v, t));
  }
  BoundInterval best;
  best.source = BoundSource::combined;
  best.lower = candidates.front().lower;
  best.upper = candidates.front().upper;
  for (const auto& c : candidates) {
    best.lower = std::max(best.lower, c.lower);
    best.upper = std::min(best.upper, c.upper);
    for (const auto& qr : c.decompositions) best.decompositions.push_back(qr);
  }
  best.vacuous = true;
  for (const auto& c : candidates) {
    if (c.lower == best.lower) {
      best.lower_sources.push_back(c.source);
      best.vacuous = best.vacuous && c.vacuous;  // vacuous only if every winner is
    }
    if (c.upper == best.upper) best.upper_sources.push_back(c.source);
  }
  best.raw_lower = best.lower;
  return best;
}

TupleCountSplit tuple_count_split(uint64_t p, uint32_t v, uint32_t t) {
  if (t < 1) throw ParameterError("tuple_count_split: t must be >= 1");
  validate_params(p, v, v, "tuple_count_split");  // requires g = v primitive
  const auto [q, r] = decompose(p, v, t - 1);
  const uint64_t fqv = q / v;
  const BigInt vt = pow_int(v, t);
  TupleCountSplit split;
  split.floor_q_v = fqv;
  split.n_upper = BigInt(p - 1) - vt * fqv;
  split.n_lower = vt - split.n_upper;
  if (split.n_upper < 0 || split.n_lower <= 0) {
    throw InvariantViolationError("tuple_count_split: system has no admissible solution");
  }
  split.upper_attained = split.n_upper > 0;
  split.p_congruent_1_mod_vt = (BigInt(p) % vt == 1);
  if (split.p_congruent_1_mod_vt == split.upper_attained) {
    throw InvariantViolationError("tuple_count_split: n_u = 0 iff p = 1 mod v^t failed");
  }
  return split;
}

std::set<uint32_t> successor_set(uint64_t g, uint32_t v, uint32_t a) {
  if (g >= v) throw ParameterError("successor_set: requires g < v");
  if (a >= v) throw ParameterError("successor_set: symbol out of range");
  std::set<uint32_t> out;
  for (uint64_t s = 0; s < g; ++s) {
    const int64_t value = static_cast<int64_t>(g) * a - static_cast<int64_t>(s);
    out.insert(static_cast<uint32_t>(((value % v) + v) % v));
  }
  return out;
}

TupleCoverage tuple_coverage_check(uint64_t p, uint64_t g, uint32_t v, uint32_t t) {
  validate_params(p, g, v, "tuple_coverage_check");
  if (t < 1) throw ParameterError("tuple_coverage_check: t must be >= 1");
  TupleCoverage coverage;
  coverage.sufficient = (g >= v) && (BigInt(p) >= BigInt(v) * pow_int(g, t - 1));
  coverage.necessary = (g >= v) && (BigInt(p) >= pow_int(v, t) + 1);
  coverage.iff_applicable = (g == v);
  if (coverage.iff_applicable) coverage.covered = coverage.necessary;
  return coverage;
}

void write_bound_csv_header(std::ostream& os) {
  os << "p,g,v,t,kind,lower,upper,source_lower,source_upper,vacuous_flag\n";
}

void write_bound_csv_row(std::ostream& os, uint64_t p, uint64_t g, uint32_t v, uint64_t t,
                         const std::string& kind, const BoundInterval& interval) {
  auto join = [](const std::vector<BoundSource>& sources) {
    std::string out;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (i) out += '|';
      out += to_string(sources[i]);
    }
    return out;
  };
  os << p << ',' << g << ',' << v << ',' << t << ',' << kind << ',' << interval.lower << ','
     << interval.upper << ',' << join(interval.lower_sources) << ','
     << join(interval.upper_sources) << ',' << (interval.vacuous ? 1 : 0) << "\n";
}

}  // namespace elseq
