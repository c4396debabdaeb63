#include "elseq/modarith.hpp"

#include <algorithm>
#include <numeric>

namespace elseq {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t modulus) {
  if (modulus < 2) throw ParameterError("mod_pow: modulus must be >= 2");
  uint64_t result = 1 % modulus;
  base %= modulus;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exp >>= 1;
  }
  return result;
}

namespace {

bool miller_rabin_witness(uint64_t n, uint64_t a, uint64_t d, int r) {
  uint64_t x = mod_pow(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Brent's cycle variant of Pollard rho; n must be odd composite, not a prime power of 2.
uint64_t pollard_brent(uint64_t n) {
  if (n % 2 == 0) return 2;
  uint64_t c = 1;
  while (true) {
    uint64_t x = 2, y = 2, d = 1, q = 1, ys = 0;
    const uint64_t m = 128;
    uint64_t r = 1;
    auto f = [&](uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = f(y);
      for (uint64_t k = 0; k < r && d == 1; k += m) {
        ys = y;
        const uint64_t lim = std::min(m, r - k);
        for (uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        d = std::gcd(q, n);
      }
      r *= 2;
    }
    if (d == n) {
      // Backtrack one step at a time.
      do {
        ys = f(ys);
        d = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (d == 1);
    }
    if (d != n) return d;
    ++c;  // rare: retry with a different polynomial
  }
}

void factor_into(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  // This witness set is a correct deterministic test for every n < 3.3 * 10^24.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

Factorization factorize(uint64_t n) {
  if (n == 0) throw ParameterError("factorize: n must be >= 1");
  Factorization fact;
  fact.n = n;
  std::vector<uint64_t> primes;
  for (uint64_t p : {2ull, 3ull, 5ull}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  // Wheel over residues coprime to 30 up to 10^6, then rho for what remains.
  static constexpr int kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  uint64_t p = 7;
  int w = 0;
  while (p <= 1'000'000 && p * p <= n) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
    p += kWheel[w];
    w = (w + 1) % 8;
  }
  if (n > 1) {
    if (p * p > n) {
      primes.push_back(n);
    } else {
      factor_into(n, primes);
    }
  }
  std::sort(primes.begin(), primes.end());
  for (uint64_t q : primes) {
    if (!fact.prime_powers.empty() && fact.prime_powers.back().first == q) {
      ++fact.prime_powers.back().second;
    } else {
      fact.prime_powers.emplace_back(q, 1);
    }
  }
  return fact;
}

int mobius(uint64_t n) {
  if (n == 0) throw ParameterError("mobius: n must be >= 1");
  const Factorization fact = factorize(n);
  for (const auto& [p, e] : fact.prime_powers) {
    if (e > 1) return 0;
  }
  return fact.prime_powers.size() % 2 == 0 ? 1 : -1;
}

bool is_primitive_root(uint64_t g, uint64_t p) {
  if (!is_prime(p)) throw ParameterError("is_primitive_root: p must be prime");
  if (g < 1 || g >= p) throw ParameterError("is_primitive_root: g must be in [1, p-1]");
  if (p == 2) return g == 1;
  if (g == 1) return false;
  const uint64_t order = p - 1;
  for (uint64_t q : factorize(order).primes()) {
    if (mod_pow(g, order / q, p) == 1) return false;
  }
  return true;
}

std::vector<uint64_t> primitive_roots(uint64_t p, std::size_t count) {
  if (!is_prime(p) || p == 2) throw ParameterError("primitive_roots: p must be an odd prime");
  const uint64_t order = p - 1;
  const std::vector<uint64_t> qs = factorize(order).primes();
  std::vector<uint64_t> roots;
  for (uint64_t g = 2; g <= p - 1 && roots.size() < count; ++g) {
    bool primitive = true;
    for (uint64_t q : qs) {
      if (mod_pow(g, order / q, p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) roots.push_back(g);
  }
  return roots;
}

std::vector<uint64_t> divisors(uint64_t n) {
  const Factorization fact = factorize(n);
  std::vector<uint64_t> divs{1};
  for (const auto& [p, e] : fact.prime_powers) {
    const std::size_t base = divs.size();
    uint64_t pk = 1;
    for (int i = 0; i < e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi) {
  if (hi > 100'000'000) throw ResourceCapError("primes_in_range: upper bound capped at 10^8");
  if (hi < lo || hi < 2) return {};
  std::vector<bool> composite(hi + 1, false);
  std::vector<uint64_t> out;
  for (uint64_t i = 2; i <= hi; ++i) {
    if (composite[i]) continue;
    if (i >= lo) out.push_back(i);
    for (uint64_t j = i * i; j <= hi; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace elseq
