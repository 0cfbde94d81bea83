#pragma once

// Real primitive Dirichlet characters realized as Kronecker symbols of
// fundamental discriminants, plus complete-residue-system character sums
// over products of linear factors and their square-root cancellation
// bounds.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/errors.hpp"
#include "chowla/int128.hpp"

namespace chowla {

// Kronecker symbol (a|n), fully general in both arguments.
int kronecker_symbol(std::int64_t a, std::int64_t n);

bool is_fundamental_discriminant(std::int64_t d);

// One linear factor b + a*x of a polynomial that splits into linear
// factors over the integers.
struct LinearFactor {
    std::int64_t b = 0;
    std::int64_t a = 0;
};

struct LinearFactorPoly {
    std::vector<LinearFactor> factors;

    unsigned degree() const { return static_cast<unsigned>(factors.size()); }
    void validate() const;
};

// chi_d = (d|.) for a fundamental discriminant d: the real primitive
// character of conductor |d|. Immutable and cheap to copy; a value table
// keyed by n mod q is built lazily (and shared between copies) once the
// character is evaluated, provided q is below the cache threshold.
class RealCharacter {
  public:
    static constexpr std::uint64_t kDefaultCacheThreshold = 1'000'000;

    static RealCharacter from_discriminant(std::int64_t d,
                                           std::uint64_t cache_threshold = kDefaultCacheThreshold);
    // The quadratic character mod an odd prime p (Legendre symbol).
    static RealCharacter legendre(std::uint64_t p);

    int operator()(std::int64_t n) const;

    std::int64_t discriminant() const { return d_; }
    std::uint64_t modulus() const { return q_; }
    bool is_even() const { return d_ > 0; }
    unsigned two_exponent() const { return two_exponent_; }
    std::uint64_t odd_part() const { return odd_part_; }
    const std::vector<std::uint64_t>& prime_factors() const { return prime_factors_; }

    // Factorization d = prod d_i over prime discriminants (-4, +-8, p*),
    // one factor per prime dividing the conductor.
    std::vector<std::int64_t> prime_discriminants() const;

  private:
    RealCharacter() = default;

    struct Cache;

    std::int64_t d_ = 1;
    std::uint64_t q_ = 1;
    unsigned two_exponent_ = 0;
    std::uint64_t odd_part_ = 1;
    std::vector<std::uint64_t> prime_factors_;
    std::uint64_t cache_threshold_ = 0;
    std::shared_ptr<Cache> cache_;
};

// Exact value of sum over n mod q of chi(f(n)).
std::int64_t char_sum_poly(const RealCharacter& chi, const LinearFactorPoly& f);

enum class PolySquareClass {
    non_square,
    square,           // f == c * g(x)^2 mod p identically
    identically_zero, // f == 0 mod p
};

PolySquareClass classify_square_mod_p(const LinearFactorPoly& f, std::uint64_t p);
bool is_square_mod_p(const LinearFactorPoly& f, std::uint64_t p);
unsigned distinct_roots_mod_p(const LinearFactorPoly& f, std::uint64_t p);

struct WeilReport {
    std::int64_t sum = 0;
    unsigned distinct_roots = 0;
    double bound = 0.0; // (m - 1) * sqrt(p)
    bool holds = false;
};

// Square-root cancellation check for a quadratic character mod a prime:
// |sum chi(f(n))| <= (m - 1) sqrt(p) with m the number of distinct roots
// of f mod p. Requires f non-square mod p.
WeilReport weil_bound_check(const RealCharacter& chi, const LinearFactorPoly& f);

struct CrtComponent {
    std::int64_t discriminant = 0;
    std::uint64_t modulus = 0;
    std::int64_t sum = 0;
};

struct CrtCharSumReport {
    std::int64_t direct_sum = 0;
    i128 factored_product = 0;
    std::vector<CrtComponent> components;
    double bound = 0.0; // (deg f - 1)^s * sqrt(q), s = number of prime factors of q
    bool agree = false;
};

// Character sum both directly and as the product of per-component sums
// through the CRT factorization of chi; the two computations must agree
// exactly.
CrtCharSumReport crt_char_sum(const RealCharacter& chi, const LinearFactorPoly& f);

enum class PrimeClass { chi_one, chi_zero };

// Compensated sum of log(p)/p over primes p <= x with chi(p) equal to the
// selected value, accumulated in ascending p.
double prime_log_sum(const RealCharacter& chi, std::uint64_t x, const SieveTable& table,
                     PrimeClass which);

} // namespace chowla
