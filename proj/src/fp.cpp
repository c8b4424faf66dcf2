#include "mlines/fp.hpp"

namespace mlines {

Fp::Fp(uint32_t p) : p_(p) {
  if (p < 3 || p >= (1u << 25) || !is_prime(p))
    throw std::invalid_argument("field characteristic must be an odd prime below 2^25");
}

uint32_t Fp::inv(uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  // extended Euclid on (a, p)
  int64_t t = 0, newt = 1;
  int64_t r = p_, newr = a;
  while (newr != 0) {
    int64_t q = r / newr;
    int64_t tmp = t - q * newt;
    t = newt; newt = tmp;
    tmp = r - q * newr;
    r = newr; newr = tmp;
  }
  if (t < 0) t += p_;
  return uint32_t(t);
}

uint32_t Fp::pow(uint32_t a, uint64_t e) const {
  uint64_t base = a % p_, acc = 1;
  while (e) {
    if (e & 1) acc = acc * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return uint32_t(acc);
}

bool Fp::is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

} // namespace mlines
