#pragma once

// Sieve-theory layer: local densities nu(p) and N(p) for products of
// linear forms, their multiplicative extension to squarefree moduli,
// exact Legendre-style inclusion-exclusion oracles, and the fundamental
// lemma estimate with its axioms.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/errors.hpp"

namespace chowla {

// Linear form c + s*m.
struct LinearForm {
    std::int64_t c = 0;
    std::int64_t s = 0;
};

// The product prod_i (c_i + s_i * m) whose zero set mod p is sieved.
struct CongruenceFamily {
    std::vector<LinearForm> forms;

    void validate() const;
};

enum class LocalCountCase {
    prime_divides_q,  // p | q: no roots once every constant is coprime to q
    all_invertible,   // every coefficient invertible: one root per form
    single_degenerate,// exactly one form keeps an invertible coefficient
    constant_forms,   // every form constant mod p
    identically_zero, // some form is 0 mod p: every residue is a root
    small_prime_direct, // p <= h_max: answered by direct counting
};

struct LocalCount {
    std::uint64_t count = 0;
    LocalCountCase tag = LocalCountCase::all_invertible;
};

// #{m mod p : prod_i (c_i + s_i m) == 0 (mod p)} via the coefficient case
// analysis; for p <= h_max falls back to scanning all residues.
LocalCount nu_p(const CongruenceFamily& family, std::uint64_t p, std::uint64_t q,
                std::int64_t h_max);

// Multiplicative extension to squarefree d via CRT on the prime counts.
std::uint64_t nu_d(const CongruenceFamily& family, std::uint64_t d, const SieveTable& table,
                   std::uint64_t q, std::int64_t h_max);

// Same counting problem without the extra modulus q.
LocalCount root_count_mod_p(std::span<const LinearForm> forms, std::uint64_t p,
                            std::int64_t h_max);

// Direct reference count, O(p * #forms); the oracle the case analysis is
// checked against.
std::uint64_t count_roots_direct(std::span<const LinearForm> forms, std::uint64_t modulus);

struct CoprimeCountReport {
    std::uint64_t by_formula = 0; // q * prod_{p | q} (1 - N(p)/p), exact integer form
    std::optional<std::uint64_t> by_enumeration;
    bool agree = false;
};

// #{n in [0, q) : gcd(prod_i (c_i + s_i n), q) = 1}; enumeration is run
// (and compared) whenever q <= 10^6.
CoprimeCountReport coprime_residue_count(std::span<const LinearForm> forms, std::uint64_t q);

// n == residue (mod modulus) intersected with [lo, hi].
struct IntervalSpec {
    std::int64_t lo = 1;
    std::int64_t hi = 0;
    std::int64_t residue = 0;
    std::int64_t modulus = 1;
};

// The multiset { prod_i (c_i + s_i m) : m in [m_lo, m_hi] }.
struct FormsFamilySpec {
    std::vector<LinearForm> forms;
    std::int64_t m_lo = 0;
    std::int64_t m_hi = -1;
};

using SetSpec = std::variant<IntervalSpec, FormsFamilySpec>;

// A sifted set with its scale X, prime set, and local densities. nu runs
// parallel to primes. The set spec is rich enough to enumerate members
// and count divisibility exactly, which defines the remainders
// r_d = A_d - nu(d)/d * X.
struct SieveProblem {
    double x_scale = 0.0;
    std::vector<std::uint64_t> primes;
    std::vector<std::uint64_t> nu;
    SetSpec set;

    void validate() const;
    std::uint64_t nu_of_prime(std::uint64_t p) const;
};

// Exact #{members divisible by d} for squarefree d supported on the
// problem's primes.
std::uint64_t count_divisible(const SieveProblem& problem, std::uint64_t d);

struct SExactReport {
    std::uint64_t by_scan = 0;
    std::int64_t by_inclusion_exclusion = 0;
    bool agree = false;
};

// #{members coprime to every problem prime}, by direct scan and by
// Moebius inclusion-exclusion over all squarefree supported d.
SExactReport s_exact(const SieveProblem& problem);

struct FlstEstimate {
    double main = 0.0;             // X * prod (1 - nu(p)/p)
    double u = 0.0;                // level parameter, D = y^u
    double relative_budget = 0.0;  // u^(-u/2)
    double remainder_budget = 0.0; // sum over supported d <= y^u of |r_d|
};

FlstEstimate flst_estimate(const SieveProblem& problem, double u);

struct Axiom2Report {
    double kappa = 0.0;
    double sup_deviation = 0.0; // sup over the grid of |M(w) - kappa log w|
    bool cap_holds = false;     // nu(p) <= min(k_cap, (1 - eps) p) for all p
    std::vector<std::uint64_t> cap_failures;
};

Axiom2Report axiom2_check(const SieveProblem& problem, double kappa, double k_cap, double eps);

struct DivisorSumReport {
    u128 exact_sum = 0; // sum_{d <= r^u} tau_kappa(d)
    double bound = 0.0; // r^u * (u log r)^kappa
};

DivisorSumReport divisor_sum_bound(std::uint64_t r, double u, unsigned kappa,
                                   std::uint64_t cap = 0 /* 0 = default table cap */);

} // namespace chowla
