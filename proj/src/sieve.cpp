// Local densities for products of linear forms. For a prime p and forms
// c_i + s_i*m the zero set mod p is the union of the per-form solution
// sets: empty when the coefficient and constant both survive reduction
// with s_i == 0 mod p, a single residue when s_i is invertible, and all
// of Z/p when a form vanishes identically. The case tag records which
// coefficient pattern produced the count.

#include "chowla/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace chowla {

namespace {

std::uint64_t mod_u(std::int64_t v, std::uint64_t m) {
    std::int64_t r = v % static_cast<std::int64_t>(m);
    if (r < 0) r += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r);
}

std::uint64_t inv_mod_prime(std::uint64_t a, std::uint64_t p) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

// Solve the per-form congruences analytically and classify the
// coefficient pattern. q = 0 means "no ambient modulus" (the N(p) case).
LocalCount analytic_roots(std::span<const LinearForm> forms, std::uint64_t p, std::uint64_t q,
                          std::int64_t h_max) {
    LocalCount out;
    if (q != 0 && q % p == 0) out.tag = LocalCountCase::prime_divides_q;

    std::vector<std::uint64_t> roots;
    std::size_t invertible = 0;
    bool zero_form = false;
    for (const LinearForm& f : forms) {
        const std::uint64_t s = mod_u(f.s, p);
        const std::uint64_t c = mod_u(f.c, p);
        if (s == 0) {
            if (c == 0) zero_form = true;
            continue;
        }
        ++invertible;
        const std::uint64_t root =
            static_cast<std::uint64_t>((static_cast<u128>(p - c) * inv_mod_prime(s, p)) % p);
        if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
    }
    if (zero_form) {
        out.count = p;
        out.tag = LocalCountCase::identically_zero;
        return out;
    }
    out.count = roots.size();
    if (out.tag == LocalCountCase::prime_divides_q) return out;
    if (invertible == forms.size())
        out.tag = LocalCountCase::all_invertible;
    else if (invertible == 1)
        out.tag = LocalCountCase::single_degenerate;
    else if (invertible == 0)
        out.tag = LocalCountCase::constant_forms;
    else
        out.tag = LocalCountCase::all_invertible; // mixed pattern, count still exact
    (void)h_max;
    return out;
}

// #{t in [lo, hi] : t == r (mod m)} for m >= 1.
std::uint64_t count_progression(std::int64_t lo, std::int64_t hi, std::uint64_t r,
                                std::uint64_t m) {
    if (hi < lo) return 0;
    // first t >= lo with t == r mod m
    const std::int64_t sm = static_cast<std::int64_t>(m);
    std::int64_t first = lo + static_cast<std::int64_t>((r + m - mod_u(lo, m)) % m);
    if (first > hi) return 0;
    return static_cast<std::uint64_t>((hi - first) / sm) + 1;
}

} // namespace

void CongruenceFamily::validate() const {
    if (forms.empty()) throw DomainError("congruence family needs at least one form");
}

LocalCount nu_p(const CongruenceFamily& family, std::uint64_t p, std::uint64_t q,
                std::int64_t h_max) {
    family.validate();
    if (p < 2) throw DomainError("nu_p: p must be prime");
    if (h_max >= 0 && p <= static_cast<std::uint64_t>(h_max)) {
        // The case analysis gives no formula for small primes.
        return {count_roots_direct(family.forms, p), LocalCountCase::small_prime_direct};
    }
    return analytic_roots(family.forms, p, q, h_max);
}

std::uint64_t nu_d(const CongruenceFamily& family, std::uint64_t d, const SieveTable& table,
                   std::uint64_t q, std::int64_t h_max) {
    family.validate();
    if (d == 0) throw DomainError("nu_d: d must be positive");
    if (d == 1) return 1;
    if (d > table.limit()) throw RangeError("nu_d: d exceeds factoring capacity");
    std::uint64_t result = 1;
    std::uint64_t rest = d;
    while (rest > 1) {
        const std::uint64_t p = table.smallest_prime_factor(rest);
        rest /= p;
        if (rest % p == 0) throw DomainError("nu_d: d must be squarefree");
        result = static_cast<std::uint64_t>(
            checked_mul(u128{result}, u128{nu_p(family, p, q, h_max).count}));
    }
    return result;
}

LocalCount root_count_mod_p(std::span<const LinearForm> forms, std::uint64_t p,
                            std::int64_t h_max) {
    if (forms.empty()) throw DomainError("root_count_mod_p: no forms");
    if (p < 2) throw DomainError("root_count_mod_p: p must be prime");
    if (h_max >= 0 && p <= static_cast<std::uint64_t>(h_max))
        return {count_roots_direct(forms, p), LocalCountCase::small_prime_direct};
    return analytic_roots(forms, p, 0, h_max);
}

std::uint64_t count_roots_direct(std::span<const LinearForm> forms, std::uint64_t modulus) {
    std::uint64_t count = 0;
    for (std::uint64_t m = 0; m < modulus; ++m) {
        u128 prod = 1;
        for (const LinearForm& f : forms) {
            const std::uint64_t val =
                (mod_u(f.c, modulus) + static_cast<u128>(mod_u(f.s, modulus)) * m) % modulus;
            prod = (prod * val) % modulus;
            if (prod == 0) break;
        }
        if (prod == 0) ++count;
    }
    return count;
}

CoprimeCountReport coprime_residue_count(std::span<const LinearForm> forms, std::uint64_t q) {
    if (forms.empty()) throw DomainError("coprime_residue_count: no forms");
    if (q == 0) throw DomainError("coprime_residue_count: q must be positive");
    CoprimeCountReport report;

    // q * prod_{p|q} (1 - N(p)/p) = (q / rad(q)) * prod_{p|q} (p - N(p)),
    // computed in exact integers.
    std::uint64_t rest = q;
    u128 formula = 1;
    std::uint64_t radical = 1;
    for (std::uint64_t p = 2; static_cast<u128>(p) * p <= rest; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        radical *= p;
        formula = checked_mul(formula, u128{p - analytic_roots(forms, p, 0, -1).count});
    }
    if (rest > 1) {
        radical *= rest;
        formula = checked_mul(formula, u128{rest - analytic_roots(forms, rest, 0, -1).count});
    }
    formula = checked_mul(formula, u128{q / radical});
    if (formula > u128{UINT64_MAX}) throw OverflowError("coprime_residue_count overflow");
    report.by_formula = static_cast<std::uint64_t>(formula);

    if (q <= 1'000'000) {
        std::uint64_t count = 0;
        for (std::uint64_t n = 0; n < q; ++n) {
            bool coprime = true;
            for (const LinearForm& f : forms) {
                const std::uint64_t val =
                    (mod_u(f.c, q) + static_cast<u128>(mod_u(f.s, q)) * n) % q;
                if (std::gcd(val, q) != 1) {
                    coprime = false;
                    break;
                }
            }
            if (coprime) ++count;
        }
        report.by_enumeration = count;
        report.agree = (count == report.by_formula);
    } else {
        report.agree = true; // nothing to compare
    }
    return report;
}

void SieveProblem::validate() const {
    if (primes.size() != nu.size())
        throw DomainError("sieve problem: nu table must parallel the prime list");
    for (std::size_t i = 0; i + 1 < primes.size(); ++i)
        if (primes[i] >= primes[i + 1]) throw DomainError("sieve problem: primes must ascend");
    if (x_scale < 0) throw DomainError("sieve problem: negative scale");
}

std::uint64_t SieveProblem::nu_of_prime(std::uint64_t p) const {
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (primes[i] == p) return nu[i];
    throw DomainError("sieve problem: prime not in problem");
}

std::uint64_t count_divisible(const SieveProblem& problem, std::uint64_t d) {
    problem.validate();
    if (d == 0) throw DomainError("count_divisible: d must be positive");
    if (const auto* iv = std::get_if<IntervalSpec>(&problem.set)) {
        if (iv->modulus < 1) throw DomainError("interval spec: modulus must be >= 1");
        if (iv->hi < iv->lo) return 0;
        // n == 0 (mod d) and n == residue (mod modulus), merged by CRT.
        const std::uint64_t m = static_cast<std::uint64_t>(iv->modulus);
        const std::uint64_t g = std::gcd(d, m);
        const std::uint64_t r = mod_u(iv->residue, m);
        if (r % g != 0) return 0;
        // residue class mod lcm(d, m) hitting both congruences
        const std::uint64_t l = d / g * m;
        std::uint64_t merged = 0;
        for (std::uint64_t t = r % l; ; t += m) {
            if (t % d == 0) {
                merged = t;
                break;
            }
            if (t >= l) throw Error("count_divisible: CRT merge failed");
        }
        return count_progression(iv->lo, iv->hi, merged % l, l);
    }
    const auto& fam = std::get<FormsFamilySpec>(problem.set);
    if (fam.m_hi < fam.m_lo) return 0;
    // Residues m mod d with d | prod(c_i + s_i m), then a progression
    // count per residue. d is squarefree and supported on the problem
    // primes, so divisibility by d is divisibility by each prime of d.
    std::vector<std::uint64_t> prime_divisors;
    {
        std::uint64_t rest = d;
        for (std::uint64_t p = 2; static_cast<u128>(p) * p <= rest; ++p)
            if (rest % p == 0) {
                prime_divisors.push_back(p);
                while (rest % p == 0) rest /= p;
            }
        if (rest > 1) prime_divisors.push_back(rest);
    }
    std::uint64_t count = 0;
    for (std::uint64_t m0 = 0; m0 < d; ++m0) {
        bool divisible = true;
        for (std::uint64_t p : prime_divisors) {
            u128 prod = 1;
            for (const LinearForm& f : fam.forms)
                prod = (prod * ((mod_u(f.c, p) + static_cast<u128>(mod_u(f.s, p)) * (m0 % p)) % p)) % p;
            if (prod != 0) {
                divisible = false;
                break;
            }
        }
        if (divisible) count += count_progression(fam.m_lo, fam.m_hi, m0, d);
    }
    return count;
}

SExactReport s_exact(const SieveProblem& problem) {
    problem.validate();
    if (problem.primes.size() > 24)
        throw CapacityError("s_exact: inclusion-exclusion over >2^24 divisors");
    SExactReport report;

    // Direct scan.
    if (const auto* iv = std::get_if<IntervalSpec>(&problem.set)) {
        for (std::int64_t n = iv->lo; n <= iv->hi; ++n) {
            if (mod_u(n - iv->residue, static_cast<std::uint64_t>(iv->modulus)) != 0) continue;
            bool coprime = true;
            for (std::uint64_t p : problem.primes)
                if (mod_u(n, p) == 0) {
                    coprime = false;
                    break;
                }
            if (coprime) ++report.by_scan;
        }
    } else {
        const auto& fam = std::get<FormsFamilySpec>(problem.set);
        for (std::int64_t m = fam.m_lo; m <= fam.m_hi; ++m) {
            bool coprime = true;
            for (std::uint64_t p : problem.primes) {
                u128 prod = 1;
                for (const LinearForm& f : fam.forms)
                    prod = (prod *
                            ((mod_u(f.c, p) + static_cast<u128>(mod_u(f.s, p)) * mod_u(m, p)) %
                             p)) %
                           p;
                if (prod == 0) {
                    coprime = false;
                    break;
                }
            }
            if (coprime) ++report.by_scan;
        }
    }

    // Moebius inclusion-exclusion over squarefree supported divisors.
    std::int64_t total = 0;
    const std::size_t np = problem.primes.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << np); ++mask) {
        u128 d = 1;
        int mu = 1;
        for (std::size_t i = 0; i < np; ++i)
            if (mask & (std::uint64_t{1} << i)) {
                d = checked_mul(d, u128{problem.primes[i]});
                mu = -mu;
            }
        if (d > u128{UINT64_MAX}) throw OverflowError("s_exact: divisor overflow");
        total += mu * static_cast<std::int64_t>(
                          count_divisible(problem, static_cast<std::uint64_t>(d)));
    }
    report.by_inclusion_exclusion = total;
    report.agree = (total >= 0) && (report.by_scan == static_cast<std::uint64_t>(total));
    return report;
}

FlstEstimate flst_estimate(const SieveProblem& problem, double u) {
    problem.validate();
    if (u < 1.0) throw DomainError("flst_estimate: u must be >= 1");
    for (std::size_t i = 0; i < problem.primes.size(); ++i) {
        if (problem.nu[i] == problem.primes[i])
            throw DegenerateSieveError("flst_estimate: nu(p) = p at p = " +
                                       std::to_string(problem.primes[i]) +
                                       " removes every residue class");
        if (problem.nu[i] > problem.primes[i])
            throw AxiomError("flst_estimate: nu(p) > p at p = " +
                             std::to_string(problem.primes[i]));
    }

    FlstEstimate est;
    est.u = u;
    est.main = problem.x_scale;
    for (std::size_t i = 0; i < problem.primes.size(); ++i)
        est.main *= 1.0 - static_cast<double>(problem.nu[i]) / static_cast<double>(problem.primes[i]);
    est.relative_budget = std::pow(u, -u / 2.0);

    const double y = problem.primes.empty() ? 1.0 : static_cast<double>(problem.primes.back());
    const double level = std::pow(y, u);

    // Enumerate squarefree supported d <= y^u and accumulate |r_d| with
    // r_d = A_d - nu(d)/d * X.
    double remainder = 0.0;
    const std::size_t np = problem.primes.size();
    struct Item {
        std::uint64_t d;
        std::uint64_t nud;
        std::size_t next;
    };
    std::vector<Item> work{{1, 1, 0}};
    while (!work.empty()) {
        const Item it = work.back();
        work.pop_back();
        const double a_d = static_cast<double>(count_divisible(problem, it.d));
        const double expected =
            static_cast<double>(it.nud) / static_cast<double>(it.d) * problem.x_scale;
        remainder += std::abs(a_d - expected);
        for (std::size_t i = it.next; i < np; ++i) {
            const u128 nd = checked_mul(u128{it.d}, u128{problem.primes[i]});
            if (static_cast<double>(nd) > level + 1e-9) continue;
            work.push_back({static_cast<std::uint64_t>(nd),
                            static_cast<std::uint64_t>(
                                checked_mul(u128{it.nud}, u128{problem.nu[i]})),
                            i + 1});
        }
    }
    est.remainder_budget = remainder;
    return est;
}

Axiom2Report axiom2_check(const SieveProblem& problem, double kappa, double k_cap, double eps) {
    problem.validate();
    Axiom2Report report;
    report.kappa = kappa;
    report.cap_holds = true;

    double m = 0.0;
    for (std::size_t i = 0; i < problem.primes.size(); ++i) {
        const double p = static_cast<double>(problem.primes[i]);
        const double nu = static_cast<double>(problem.nu[i]);
        if (nu > std::min(k_cap, (1.0 - eps) * p)) {
            report.cap_holds = false;
            report.cap_failures.push_back(problem.primes[i]);
        }
        m += nu * std::log(p) / p;
        // Evaluate just after including p and just before the next prime:
        // M is a step function, so the supremum over a continuous window
        // is attained at these grid points.
        report.sup_deviation =
            std::max(report.sup_deviation, std::abs(m - kappa * std::log(p)));
        const double next = (i + 1 < problem.primes.size())
                                ? static_cast<double>(problem.primes[i + 1])
                                : p;
        report.sup_deviation =
            std::max(report.sup_deviation, std::abs(m - kappa * std::log(next)));
    }
    return report;
}

DivisorSumReport divisor_sum_bound(std::uint64_t r, double u, unsigned kappa, std::uint64_t cap) {
    if (r < 2) throw DomainError("divisor_sum_bound: r must be >= 2");
    if (u < 0) throw DomainError("divisor_sum_bound: u must be non-negative");
    if (kappa < 1) throw DomainError("divisor_sum_bound: kappa must be >= 1");
    if (cap == 0) cap = SieveTable::default_limit_cap();
    const double level = std::pow(static_cast<double>(r), u);
    if (level > static_cast<double>(cap))
        throw CapacityError("divisor_sum_bound: r^u exceeds sieve capacity");
    const std::uint64_t limit = static_cast<std::uint64_t>(level + 1e-9);

    DivisorSumReport report;
    report.bound = level * std::pow(u * std::log(static_cast<double>(r)),
                                    static_cast<double>(kappa));
    if (limit < 1) return report;
    const SieveTable table = SieveTable::build(std::max<std::uint64_t>(limit, 2), cap);
    u128 sum = 0;
    for (std::uint64_t d = 1; d <= limit; ++d) sum += table.tau_kappa(d, kappa);
    report.exact_sum = sum;
    return report;
}

} // namespace chowla
