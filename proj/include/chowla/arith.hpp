#pragma once

// Bulk multiplicative-function machinery: a smallest-prime-factor table
// built once by a linear sieve backs every pointwise query (Liouville,
// Moebius, Omega/omega, smooth/rough splits) and the bulk value tables
// used by the correlation drivers.

#include <cstdint>
#include <span>
#include <vector>

#include "chowla/errors.hpp"
#include "chowla/int128.hpp"

namespace chowla {

// n = smooth * rough, every prime of `smooth` is <= r, every prime of
// `rough` is > r, and the two parts are coprime.
struct SmoothSplit {
    std::uint64_t n = 0;
    std::uint64_t r = 0;
    std::uint64_t smooth = 1;
    std::uint64_t rough = 1;
};

// Immutable table of smallest prime factors for 2..limit. Costs 4 bytes per
// entry plus the prime list (one uint32 per prime <= limit). Safe for
// concurrent reads; all queries are pure.
class SieveTable {
  public:
    // Default capacity cap, overridable with CHOWLA_LAB_TABLE_LIMIT.
    static std::uint64_t default_limit_cap();

    static SieveTable build(std::uint64_t limit);
    static SieveTable build(std::uint64_t limit, std::uint64_t cap);

    std::uint64_t limit() const { return limit_; }

    std::uint32_t smallest_prime_factor(std::uint64_t n) const;
    bool is_prime(std::uint64_t n) const;
    const std::vector<std::uint32_t>& primes() const { return primes_; }

    // (-1)^Omega(n); total on [1, limit], never 0.
    int liouville(std::uint64_t n) const;
    // 0 on non-squarefree n, else (-1)^omega(n).
    int mobius(std::uint64_t n) const;
    unsigned big_omega(std::uint64_t n) const;
    unsigned small_omega(std::uint64_t n) const;

    SmoothSplit smooth_split(std::uint64_t n, std::uint64_t r) const;

    // #{n <= x : r-smooth part of n > r^A}. The threshold is compared in
    // exact integer arithmetic whenever r^A is an integer within range;
    // otherwise by logarithms with a 1e-12 relative guard band (equality
    // of an integer smooth part with r^A can then only happen when r^A is
    // itself an integer, which the integer path covers).
    std::uint64_t count_large_smooth(std::uint64_t x, std::uint64_t r, double A) const;

    // Number of ordered kappa-tuples of positive integers with product n.
    std::uint64_t tau_kappa(std::uint64_t n, unsigned kappa) const;

  private:
    SieveTable() = default;

    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

// Least common multiple with checked 128-bit arithmetic.
u128 lcm_many(std::span<const std::uint64_t> values);

} // namespace chowla
