#pragma once

#include <cstdint>
#include <stdexcept>

namespace mlines {

// Arithmetic in the prime field Z/p.  Values are always kept in [0, p).
// p is restricted to odd primes below 2^25 so that sums of up to 2^14
// products fit in an unsigned 64-bit accumulator without intermediate
// reduction.
class Fp {
public:
  explicit Fp(uint32_t p = 32003);

  uint32_t p() const { return p_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return uint32_t(uint64_t(a) * b % p_);
  }
  uint32_t reduce64(uint64_t x) const { return uint32_t(x % p_); }
  uint32_t reduce_int(long long x) const {
    long long r = x % (long long)p_;
    return uint32_t(r < 0 ? r + p_ : r);
  }
  uint32_t inv(uint32_t a) const;
  uint32_t pow(uint32_t a, uint64_t e) const;

  static bool is_prime(uint32_t n);

private:
  uint32_t p_;
};

// Deterministic pseudo-random stream (splitmix64).  Used everywhere a seed
// is consumed so that runs are reproducible across platforms.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, n); n > 0
  uint64_t below(uint64_t n) { return next() % n; }
  uint32_t field_elt(const Fp& F) { return uint32_t(next() % F.p()); }
  uint32_t nonzero_field_elt(const Fp& F) {
    return uint32_t(1 + next() % (F.p() - 1));
  }
  // independent substream for a labelled subtask
  Rng fork(uint64_t label) {
    Rng r(state ^ (0xa0761d6478bd642fULL * (label + 1)));
    r.next();
    return r;
  }
};

} // namespace mlines
