#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "elseq/errors.hpp"

namespace elseq {

/// Complete prime-power factorization of n, primes strictly increasing.
/// Product of prime^exponent equals n; n = 1 has an empty list.
struct Factorization {
  uint64_t n = 1;
  std::vector<std::pair<uint64_t, int>> prime_powers;

  std::vector<uint64_t> primes() const {
    std::vector<uint64_t> out;
    out.reserve(prime_powers.size());
    for (const auto& [p, e] : prime_powers) out.push_back(p);
    return out;
  }
};

/// (a * b) % m without overflow for 64-bit operands.
uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);

/// base^exp mod modulus by repeated squaring. Requires modulus >= 2.
uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t modulus);

/// Deterministic for all 64-bit inputs (fixed Miller-Rabin witness set).
bool is_prime(uint64_t n);

Factorization factorize(uint64_t n);

/// 0 if a square divides n, else (-1)^(number of prime factors).
int mobius(uint64_t n);

/// True iff g generates Z_p^*. Requires p prime and 1 <= g <= p-1.
bool is_primitive_root(uint64_t g, uint64_t p);

/// The `count` smallest primitive roots of p in ascending order
/// (fewer if p has fewer). Requires p an odd prime.
std::vector<uint64_t> primitive_roots(uint64_t p, std::size_t count);

/// Sorted divisors of n.
std::vector<uint64_t> divisors(uint64_t n);

/// Primes in [lo, hi], ascending. Sieve-backed; hi is capped at 10^8.
std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi);

}  // namespace elseq
