#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace f1z {

// Arithmetic helpers for prime fields F_q with small q.  Elements are
// represented as int values in [0, q).  Callers are responsible for
// passing a prime modulus; `require_prime` is available for validation.

inline bool is_prime(std::int64_t q) {
    if (q < 2) return false;
    for (std::int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

inline void require_prime(std::int64_t q) {
    if (!is_prime(q))
        throw std::invalid_argument("field order must be prime, got " + std::to_string(q));
}

inline int fp_add(int a, int b, int q) { return (a + b) % q; }

inline int fp_sub(int a, int b, int q) { return (a - b % q + q) % q; }

inline int fp_mul(int a, int b, int q) {
    return static_cast<int>((static_cast<std::int64_t>(a) * b) % q);
}

inline int fp_pow(int a, std::int64_t e, int q) {
    int r = 1 % q;
    int base = (a % q + q) % q;
    while (e > 0) {
        if (e & 1) r = fp_mul(r, base, q);
        base = fp_mul(base, base, q);
        e >>= 1;
    }
    return r;
}

// Multiplicative inverse; q prime, a != 0 mod q.
inline int fp_inv(int a, int q) {
    a = (a % q + q) % q;
    if (a == 0) throw std::invalid_argument("no inverse of 0");
    return fp_pow(a, q - 2, q);
}

// The n smallest primes, ascending.
inline std::vector<std::int64_t> smallest_primes(int n) {
    std::vector<std::int64_t> out;
    for (std::int64_t c = 2; static_cast<int>(out.size()) < n; ++c)
        if (is_prime(c)) out.push_back(c);
    return out;
}

}  // namespace f1z
