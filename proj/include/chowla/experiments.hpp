#pragma once

// Top-level experiment drivers: k-point correlation sums of completely
// multiplicative +-1 functions, the hybrid function that follows the
// Liouville function on small primes and a real character on large ones,
// and the moment-method tail counts with their even-multiplicity tuple
// combinatorics.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/characters.hpp"

namespace chowla {

enum class CorrelationFn { liouville, lambda_r, mobius };

// Completely multiplicative hybrid: lambda on primes <= r, chi on primes
// above; zero exactly when a prime factor > r divides the conductor.
int lambda_r_eval(const SieveTable& table, const RealCharacter& chi, std::uint64_t r,
                  std::uint64_t n);

// Bulk value table on [0, n_max]; index 0 unused. One pass over the
// smallest-prime-factor recurrence.
std::vector<std::int8_t> bulk_values(const SieveTable& table, CorrelationFn fn,
                                     std::uint64_t n_max, const RealCharacter* chi = nullptr,
                                     std::uint64_t r = 0);

struct CorrelationReport {
    std::uint64_t x = 0;
    std::vector<std::int64_t> shifts;
    std::int64_t raw_sum = 0; // exact integer sum of the +-1/0 products
    double value = 0.0;       // raw_sum / x
    double elapsed_ms = 0.0;
};

// Sum over n <= x of prod_i f(n + h_i), with terms containing any
// n + h_i <= 0 contributing 0. Requires x + max(shifts) <= table limit.
// Partitioned across `threads` workers; the integer sum is partition
// invariant.
CorrelationReport chowla_correlation(const SieveTable& table, CorrelationFn fn, std::uint64_t x,
                                     std::span<const std::int64_t> shifts,
                                     const RealCharacter* chi = nullptr, std::uint64_t r = 0,
                                     unsigned threads = 1);

struct DifferenceReport {
    std::uint64_t lhs_abs = 0;      // |sum (prod lambda - prod hybrid)|
    std::uint64_t sum_abs_diff = 0; // sum |lambda - hybrid| over [1, x]
    std::uint64_t majorant = 0;     // k * sum_abs_diff + k * max(shifts)
    bool holds = false;
};

// Both sides of the termwise replacement chain: replacing lambda by the
// hybrid one shift at a time bounds the correlation gap by k shifted
// copies of the pointwise gap plus a boundary term.
DifferenceReport correlation_difference(const SieveTable& table, const RealCharacter& chi,
                                        std::uint64_t r, std::uint64_t x,
                                        std::span<const std::int64_t> shifts);

struct TupleCountReport {
    std::optional<std::uint64_t> exact_count; // set when enumeration is feasible
    long double bound = 0.0;                  // 2^k * m^(k/2) * k^(k/2)
};

// #{(i_1..i_k) in [1,m]^k : every value occurs an even number of times},
// by exact enumeration when m^k <= 10^8, with the fresh/repeat bound.
TupleCountReport even_multiplicity_tuple_count(std::uint64_t m, unsigned k);

// Number of ordered k-tuples over [1, m] whose odd-multiplicity value set
// has size t (independent of which t values). Exact integer.
u128 odd_support_tuple_count(unsigned m, unsigned k, unsigned t);

struct MomentReport {
    std::uint64_t x = 0;
    unsigned m = 0;
    double eps = 0.0;
    unsigned k = 0;
    std::uint64_t threshold_count = 0;    // #{n <= x : |(1/m) sum c_i lambda(n+i)| >= eps}
    u128 tuple_abs_sum = 0;               // sum over tuples of |sum_n prod lambda(n+i_j)|
    long double chebyshev_majorant = 0.0; // tuple_abs_sum / (eps*m)^k
    double analytic_bound = 0.0;          // exp(-eps^2 m / (8e))
    bool chain_holds = false;             // threshold_count <= chebyshev_majorant
};

// The moment-method chain at desk scale: the k-th moment expansion gives
// threshold_count * (eps*m)^k <= tuple_abs_sum as a statement of exact
// arithmetic. k defaults to the even integer closest to eps^2 m / (4e),
// clamped to [2, m].
MomentReport moment_tail_experiment(const SieveTable& table, std::uint64_t x, unsigned m,
                                    double eps, std::span<const double> coeffs,
                                    std::optional<unsigned> k_override = std::nullopt,
                                    unsigned threads = 1);

// Parameter bundle tying a correlation experiment to the proxy-eta
// formulas: r = x^(1/alpha) with alpha = sqrt(loglog eta) * (log eta)^(1/12),
// u = C*alpha, A = u/(k+1), and the validity window
// x in [q^10, q^(loglog eta / 3)].
struct ExperimentConfig {
    std::uint64_t x = 0;
    std::vector<std::int64_t> shifts;
    std::optional<std::int64_t> discriminant;
    std::optional<double> eta_proxy;
    std::optional<std::uint64_t> r_override;
    std::optional<double> u_override;
    std::optional<double> a_override;
    double level_constant = 0.1; // the C in u = C*alpha

    void validate() const;
    bool has_alpha() const { return eta_proxy.has_value(); }
    double alpha() const;              // requires eta_proxy
    std::uint64_t derived_r() const;   // r_override or round(x^(1/alpha))
    std::optional<double> derived_u() const;
    std::optional<double> derived_a() const;
    std::optional<double> reference_bound() const; // 1/alpha, unit constant
    std::optional<bool> x_in_window() const;       // needs discriminant + eta
};

} // namespace chowla
