#pragma once

// Exact arithmetic in GF(p) for an odd prime p < 2^31. Elements are u32
// values in [0, p). Reduction of 64-bit products goes through a precomputed
// reciprocal (floor(2^64 / p)) so the elimination hot loop never divides.

#include <optional>

#include "hpl/common.hpp"

namespace hpl {

class PrimeField {
 public:
  static constexpr u64 max_modulus = (u64{1} << 31) - 1;

  explicit PrimeField(u64 p) : p_(p), magic_(~u64{0} / p) {
    if (p < 3 || p > max_modulus)
      throw Error("modulus out of range (need odd prime, 3 <= p < 2^31): " +
                  std::to_string(p));
    if (!is_prime(p))
      throw Error("modulus is not prime: " + std::to_string(p));
  }

  u64 p() const { return p_; }

  // Reduces any x < 2^64. magic = floor(2^64/p) gives q in
  // {floor(x/p)-1, floor(x/p)}, so one conditional subtraction suffices.
  u32 reduce(u64 x) const {
    u64 q = static_cast<u64>(
        (static_cast<unsigned __int128>(x) * magic_) >> 64);
    u64 r = x - q * p_;
    if (r >= p_) r -= p_;
    return static_cast<u32>(r);
  }

  u32 from_int(i64 v) const {
    i64 r = v % static_cast<i64>(p_);
    if (r < 0) r += static_cast<i64>(p_);
    return static_cast<u32>(r);
  }

  u32 add(u32 a, u32 b) const {
    u64 s = u64{a} + b;
    if (s >= p_) s -= p_;
    return static_cast<u32>(s);
  }

  u32 sub(u32 a, u32 b) const {
    return a >= b ? a - b : static_cast<u32>(u64{a} + p_ - b);
  }

  u32 neg(u32 a) const { return a == 0 ? 0 : static_cast<u32>(p_ - a); }

  u32 mul(u32 a, u32 b) const { return reduce(u64{a} * b); }

  u32 pow(u32 a, u64 e) const {
    u32 r = 1;
    u32 base = a;
    while (e != 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  u32 inv(u32 a) const {
    if (a == 0) throw Error("division by zero in GF(p)");
    return pow(a, p_ - 2);
  }

  u32 half() const { return static_cast<u32>((p_ + 1) / 2); }

  // Tonelli-Shanks. Returns the root in [0, p/2] so callers get a
  // deterministic choice between r and p-r; empty for non-residues.
  std::optional<u32> sqrt(u32 a) const {
    if (a == 0) return u32{0};
    if (pow(a, (p_ - 1) / 2) != 1) return std::nullopt;
    u32 r;
    if (p_ % 4 == 3) {
      r = pow(a, (p_ + 1) / 4);
    } else {
      u64 q = p_ - 1;
      int s = 0;
      while ((q & 1) == 0) {
        q >>= 1;
        ++s;
      }
      u32 z = 2;
      while (pow(z, (p_ - 1) / 2) == 1) ++z;
      u32 c = pow(z, q);
      u32 t = pow(a, q);
      r = pow(a, (q + 1) / 2);
      int m = s;
      while (t != 1) {
        int i = 0;
        u32 t2 = t;
        while (t2 != 1) {
          t2 = mul(t2, t2);
          ++i;
        }
        u32 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mul(b, b);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
      }
    }
    u32 other = neg(r);
    return r <= other ? r : other;
  }

  static bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 q = 3; q * q <= n; q += 2)
      if (n % q == 0) return false;
    return true;
  }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  u64 p_;
  u64 magic_;
};

}  // namespace hpl
