#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "elseq/errors.hpp"

namespace elseq {

using BigInt = boost::multiprecision::cpp_int;

/// One ElGamal sequence instance: symbols[i] = (g^i % p) % v for 0 <= i < p-1.
struct ElGamalParams {
  uint64_t p = 0;  // odd prime
  uint64_t g = 0;  // primitive root mod p
  uint32_t v = 0;  // alphabet size, 2 <= v <= p-1
};

/// A circular sequence over Z_v. Symbols satisfy 0 <= s < v.
struct SequenceZv {
  uint32_t v = 0;
  std::vector<uint32_t> symbols;

  std::size_t size() const { return symbols.size(); }
  uint32_t operator[](std::size_t i) const { return symbols[i]; }
  /// Circular access; i may be any index, reduced mod n.
  uint32_t at_wrapped(uint64_t i) const { return symbols[i % symbols.size()]; }
};

/// Validating constructor: every symbol below v, v >= 2, nonempty.
SequenceZv make_sequence(uint32_t v, std::vector<uint32_t> symbols);

/// Validates the params (p odd prime, g primitive, 2 <= v <= p-1).
void validate(const ElGamalParams& params);

/// Length p-1 sequence built by iterated multiplication, never
/// per-element exponentiation. Representatives of Z_p^* are taken
/// in {1, ..., p-1} before the second remainder.
SequenceZv elgamal_sequence(const ElGamalParams& params);

/// symbols[i] = perm[i] % v. perm must be a permutation of {1, ..., m}.
SequenceZv reduce_permutation(const std::vector<uint64_t>& perm, uint32_t v);

/// Uniform member of B(v, n): every symbol exactly n/v times, every
/// balanced word equally likely. Requires v | n. The shuffle consumes
/// the engine with a fixed, implementation-independent protocol so runs
/// are reproducible from the seed alone.
SequenceZv random_balanced_sequence(uint32_t v, uint64_t n, std::mt19937_64& rng);

/// Smallest rho with symbols[(i+rho) % n] == symbols[i] for all i.
/// Only divisors of n need testing for a circular sequence.
uint64_t least_period(const SequenceZv& seq);

/// (((p-1)/v)!)^v: the number of permutations of Z_p^* reducing to one
/// fixed exactly balanced sequence. Requires v | p-1.
BigInt lift_count(uint64_t p, uint32_t v);

/// Bounded uniform draw in [0, bound) by rejection; unbiased and portable.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

/// Independent engine for a trial, derived from (seed, a, b, c).
std::mt19937_64 derive_stream(uint64_t seed, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0);

/// Serialization: header line "v=<v> n=<n>", then one line of
/// space-separated decimal symbols.
void write_sequence(std::ostream& os, const SequenceZv& seq);
SequenceZv read_sequence(std::istream& is);
std::string to_text(const SequenceZv& seq);
SequenceZv from_text(const std::string& text);

}  // namespace elseq
