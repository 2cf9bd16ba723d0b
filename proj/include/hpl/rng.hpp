#pragma once

// Deterministic 64-bit generator (splitmix64). The standard <random> engines
// are portable but the distributions are not; bounded draws here are spelled
// out so identical seeds reproduce identical streams on every platform.

#include "hpl/common.hpp"

namespace hpl {

class Rng {
 public:
  explicit Rng(u64 seed) : seed_(seed), state_(seed) {}

  u64 seed() const { return seed_; }

  u64 next() {
    u64 z = (state_ += u64{0x9E3779B97F4A7C15});
    z = (z ^ (z >> 30)) * u64{0xBF58476D1CE4E5B9};
    z = (z ^ (z >> 27)) * u64{0x94D049BB133111EB};
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, n). Rejection keeps it exact.
  u64 below(u64 n) {
    if (n == 0) throw Error("Rng::below(0)");
    u64 rem = (~u64{0} % n + 1) % n;   // 2^64 mod n
    u64 lim = ~u64{0} - rem;           // last acceptable value (inclusive)
    for (;;) {
      u64 x = next();
      if (x <= lim) return x % n;
    }
  }

  // Child stream for task `index`, derived from the original seed only, so
  // concurrent cells are order-independent.
  Rng child(u64 index) const {
    u64 z = seed_ + (index + 1) * u64{0x9E3779B97F4A7C15};
    z = (z ^ (z >> 30)) * u64{0xBF58476D1CE4E5B9};
    z = (z ^ (z >> 27)) * u64{0x94D049BB133111EB};
    return Rng(z ^ (z >> 31));
  }

 private:
  u64 seed_;
  u64 state_;
};

}  // namespace hpl
