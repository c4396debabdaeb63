#include "elseq/seqgen.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "elseq/modarith.hpp"

namespace elseq {

SequenceZv make_sequence(uint32_t v, std::vector<uint32_t> symbols) {
  if (v < 2) throw ParameterError("SequenceZv: alphabet size must be >= 2");
  if (symbols.empty()) throw ParameterError("SequenceZv: sequence must be nonempty");
  for (uint32_t s : symbols) {
    if (s >= v) throw ParameterError("SequenceZv: symbol out of range for alphabet");
  }
  return SequenceZv{v, std::move(symbols)};
}

void validate(const ElGamalParams& params) {
  if (params.p < 3 || !is_prime(params.p)) {
    throw ParameterError("ElGamalParams: p must be an odd prime");
  }
  if (params.v < 2 || params.v > params.p - 1) {
    throw ParameterError("ElGamalParams: v must satisfy 2 <= v <= p-1");
  }
  if (!is_primitive_root(params.g, params.p)) {
    throw ParameterError("ElGamalParams: g is not a primitive root mod p");
  }
}

SequenceZv elgamal_sequence(const ElGamalParams& params) {
  validate(params);
  const uint64_t p = params.p;
  std::vector<uint32_t> symbols;
  symbols.reserve(p - 1);
  uint64_t x = 1;  // g^0
  for (uint64_t i = 0; i + 1 < p; ++i) {
    symbols.push_back(static_cast<uint32_t>(x % params.v));
    x = mul_mod(x, params.g, p);
  }
  return SequenceZv{params.v, std::move(symbols)};
}

SequenceZv reduce_permutation(const std::vector<uint64_t>& perm, uint32_t v) {
  const uint64_t m = perm.size();
  if (m == 0) throw ParameterError("reduce_permutation: empty input");
  std::vector<bool> seen(m + 1, false);
  for (uint64_t x : perm) {
    if (x < 1 || x > m || seen[x]) {
      throw ParameterError("reduce_permutation: input is not a permutation of {1..m}");
    }
    seen[x] = true;
  }
  if (v < 2 || v > m) throw ParameterError("reduce_permutation: v must satisfy 2 <= v <= m");
  std::vector<uint32_t> symbols(m);
  for (uint64_t i = 0; i < m; ++i) symbols[i] = static_cast<uint32_t>(perm[i] % v);
  return SequenceZv{v, std::move(symbols)};
}

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform_below: bound must be positive");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

std::mt19937_64 derive_stream(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  // splitmix64 over the combined words; avalanching keeps streams disjoint.
  auto mix = [](uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  uint64_t s = mix(seed);
  s = mix(s ^ a);
  s = mix(s ^ b);
  s = mix(s ^ c);
  return std::mt19937_64(s);
}

SequenceZv random_balanced_sequence(uint32_t v, uint64_t n, std::mt19937_64& rng) {
  if (v < 2) throw ParameterError("random_balanced_sequence: v must be >= 2");
  if (n == 0 || n % v != 0) {
    throw ParameterError("random_balanced_sequence: v must divide n");
  }
  const uint64_t l = n / v;
  std::vector<uint32_t> symbols(n);
  for (uint32_t a = 0; a < v; ++a) {
    std::fill(symbols.begin() + a * l, symbols.begin() + (a + 1) * l, a);
  }
  // Fisher-Yates with explicit rejection sampling: unbiased for every seed.
  for (uint64_t i = n - 1; i > 0; --i) {
    const uint64_t j = uniform_below(rng, i + 1);
    std::swap(symbols[i], symbols[j]);
  }
  return SequenceZv{v, std::move(symbols)};
}

uint64_t least_period(const SequenceZv& seq) {
  const uint64_t n = seq.size();
  for (uint64_t rho : divisors(n)) {
    bool ok = true;
    for (uint64_t i = rho; i < n && ok; ++i) {
      ok = seq.symbols[i] == seq.symbols[i % rho];
    }
    if (ok) return rho;
  }
  return n;  // unreachable: rho = n always qualifies
}

BigInt lift_count(uint64_t p, uint32_t v) {
  if (v == 0 || (p - 1) % v != 0) throw ParameterError("lift_count: v must divide p-1");
  const uint64_t l = (p - 1) / v;
  BigInt f = 1;
  for (uint64_t i = 2; i <= l; ++i) f *= i;
  BigInt out = 1;
  for (uint32_t i = 0; i < v; ++i) out *= f;
  return out;
}

void write_sequence(std::ostream& os, const SequenceZv& seq) {
  os << "v=" << seq.v << " n=" << seq.size() << "\n";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) os << ' ';
    os << seq.symbols[i];
  }
  os << "\n";
}

SequenceZv read_sequence(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParameterError("sequence parse: missing header line");
  uint32_t v = 0;
  unsigned long long n_parsed = 0;
  if (std::sscanf(header.c_str(), "v=%u n=%llu", &v, &n_parsed) != 2) {
    throw ParameterError("sequence parse: header must be 'v=<v> n=<n>'");
  }
  const uint64_t n = n_parsed;
  std::vector<uint32_t> symbols;
  symbols.reserve(n);
  uint64_t s;
  while (symbols.size() < n && is >> s) {
    if (s >= v) throw ParameterError("sequence parse: symbol out of range");
    symbols.push_back(static_cast<uint32_t>(s));
  }
  if (symbols.size() != n) throw ParameterError("sequence parse: fewer symbols than header declares");
  return make_sequence(v, std::move(symbols));
}

std::string to_text(const SequenceZv& seq) {
  std::ostringstream os;
  write_sequence(os, seq);
  return os.str();
}

SequenceZv from_text(const std::string& text) {
  std::istringstream is(text);
  return read_sequence(is);
}

}  // namespace elseq
