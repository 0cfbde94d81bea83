// Kronecker symbols via quadratic reciprocity, with the usual supplements
// for the prime 2 and for signs:
//   (a|2)  = 0 if a even, +1 if a = +-1 (mod 8), -1 if a = +-3 (mod 8)
//   (a|-1) = sign(a)
// For a fundamental discriminant d, n -> (d|n) is the real primitive
// character of conductor |d|, periodic mod |d|, and factors over the prime
// discriminants dividing d.

#include "chowla/characters.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <utility>

namespace chowla {

namespace {

// (2|a) as a function of a mod 8.
constexpr int kTwoTable[8] = {0, 1, 0, -1, 0, -1, 0, 1};

// Jacobi symbol (a|n) for odd n > 0.
int jacobi(std::int64_t a, std::int64_t n) {
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const std::int64_t n8 = n & 7;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool is_squarefree_small(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

std::int64_t mod_positive(std::int64_t n, std::uint64_t q) {
    const std::int64_t m = static_cast<std::int64_t>(q);
    std::int64_t r = n % m;
    if (r < 0) r += m;
    return r;
}

std::uint64_t mulmod_small(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

// Inverse of a mod p for prime p, gcd(a, p) = 1.
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

} // namespace

int kronecker_symbol(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    int k = (v & 1) ? kTwoTable[a & 7] : 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    if (n == 1) return k;
    return k * jacobi(a, n);
}

bool is_fundamental_discriminant(std::int64_t d) {
    if (d == 0) return false;
    const std::int64_t m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) return is_squarefree_small(static_cast<std::uint64_t>(d < 0 ? -d : d));
    if (m4 != 0) return false;
    const std::int64_t q = d / 4;
    const std::int64_t q4 = ((q % 4) + 4) % 4;
    if (q4 != 2 && q4 != 3) return false;
    return is_squarefree_small(static_cast<std::uint64_t>(q < 0 ? -q : q));
}

void LinearFactorPoly::validate() const {
    if (factors.empty()) throw DomainError("polynomial needs at least one linear factor");
    if (std::all_of(factors.begin(), factors.end(),
                    [](const LinearFactor& f) { return f.a == 0; }))
        throw DomainError("polynomial must have at least one non-constant factor");
}

struct RealCharacter::Cache {
    std::once_flag once;
    std::vector<std::int8_t> values;
};

RealCharacter RealCharacter::from_discriminant(std::int64_t d, std::uint64_t cache_threshold) {
    if (!is_fundamental_discriminant(d)) {
        const std::int64_t m4 = ((d % 4) + 4) % 4;
        std::string reason;
        if (d == 0)
            reason = "zero";
        else if (m4 == 1)
            reason = "1 mod 4 but not squarefree";
        else if (m4 != 0)
            reason = std::to_string(m4) + " mod 4 (must be 0 or 1 mod 4)";
        else {
            const std::int64_t q4 = (((d / 4) % 4) + 4) % 4;
            if (q4 != 2 && q4 != 3)
                reason = "4m with m = " + std::to_string(q4) + " mod 4 (must be 2 or 3 mod 4)";
            else
                reason = "4m with m not squarefree";
        }
        throw DomainError("not a fundamental discriminant: " + std::to_string(d) + " is " + reason);
    }
    RealCharacter chi;
    chi.d_ = d;
    chi.q_ = static_cast<std::uint64_t>(d < 0 ? -d : d);
    chi.cache_threshold_ = cache_threshold;
    chi.cache_ = std::make_shared<Cache>();

    std::uint64_t q = chi.q_;
    while ((q & 1) == 0) {
        q >>= 1;
        ++chi.two_exponent_;
    }
    chi.odd_part_ = q;
    if (chi.two_exponent_ > 3 || chi.two_exponent_ == 1)
        throw DomainError("conductor is not of the form 2^j * m with j in {0,2,3}");
    if (chi.two_exponent_ > 0) chi.prime_factors_.push_back(2);
    for (std::uint64_t p = 3; p * p <= q; p += 2) {
        if (q % p == 0) {
            chi.prime_factors_.push_back(p);
            q /= p;
        }
    }
    if (q > 1) chi.prime_factors_.push_back(q);
    return chi;
}

RealCharacter RealCharacter::legendre(std::uint64_t p) {
    if (p < 3 || (p & 1) == 0) throw DomainError("legendre: modulus must be an odd prime");
    const std::int64_t sp = static_cast<std::int64_t>(p);
    return from_discriminant(p % 4 == 1 ? sp : -sp);
}

int RealCharacter::operator()(std::int64_t n) const {
    if (q_ == 1) return 1;
    const std::int64_t r = mod_positive(n, q_);
    if (q_ <= cache_threshold_) {
        std::call_once(cache_->once, [this] {
            cache_->values.resize(q_);
            for (std::uint64_t i = 0; i < q_; ++i)
                cache_->values[i] =
                    static_cast<std::int8_t>(kronecker_symbol(d_, static_cast<std::int64_t>(i)));
        });
        return cache_->values[static_cast<std::uint64_t>(r)];
    }
    return kronecker_symbol(d_, r);
}

std::vector<std::int64_t> RealCharacter::prime_discriminants() const {
    std::vector<std::int64_t> parts;
    std::int64_t odd_product = 1;
    for (std::uint64_t p : prime_factors_) {
        if (p == 2) continue;
        const std::int64_t sp = static_cast<std::int64_t>(p);
        const std::int64_t star = (p % 4 == 1) ? sp : -sp;
        parts.push_back(star);
        odd_product *= star;
    }
    const std::int64_t two_part = d_ / odd_product;
    if (two_part != 1) parts.insert(parts.begin(), two_part);
    return parts;
}

std::int64_t char_sum_poly(const RealCharacter& chi, const LinearFactorPoly& f) {
    f.validate();
    const std::uint64_t q = chi.modulus();
    const std::int64_t m = static_cast<std::int64_t>(q);
    std::int64_t sum = 0;
    for (std::int64_t n = 0; n < m; ++n) {
        int term = 1;
        for (const LinearFactor& fac : f.factors) {
            // chi is completely multiplicative, so chi(f(n)) splits over
            // the factors; each factor is reduced mod q before evaluation.
            const std::int64_t arg =
                mod_positive(fac.b % m + ((fac.a % m) * n) % m, q);
            term *= chi(arg);
            if (term == 0) break;
        }
        sum += term;
    }
    return sum;
}

PolySquareClass classify_square_mod_p(const LinearFactorPoly& f, std::uint64_t p) {
    f.validate();
    if (p < 2) throw DomainError("classify_square_mod_p: p must be prime");
    // Collect roots of the non-degenerate factors; a factor with both
    // coefficients divisible by p kills the whole polynomial.
    std::vector<std::pair<std::uint64_t, unsigned>> roots;
    for (const LinearFactor& fac : f.factors) {
        const std::uint64_t a = static_cast<std::uint64_t>(mod_positive(fac.a, p));
        const std::uint64_t b = static_cast<std::uint64_t>(mod_positive(fac.b, p));
        if (a == 0) {
            if (b == 0) return PolySquareClass::identically_zero;
            continue; // unit constant factor, absorbed into c
        }
        const std::uint64_t root = mulmod_small(p - b % p, inv_mod_prime(a, p), p) % p;
        bool found = false;
        for (auto& [r, mult] : roots) {
            if (r == root) {
                ++mult;
                found = true;
                break;
            }
        }
        if (!found) roots.emplace_back(root, 1u);
    }
    for (const auto& [r, mult] : roots)
        if (mult & 1u) return PolySquareClass::non_square;
    return PolySquareClass::square;
}

bool is_square_mod_p(const LinearFactorPoly& f, std::uint64_t p) {
    return classify_square_mod_p(f, p) == PolySquareClass::square;
}

unsigned distinct_roots_mod_p(const LinearFactorPoly& f, std::uint64_t p) {
    std::vector<std::uint64_t> roots;
    for (const LinearFactor& fac : f.factors) {
        const std::uint64_t a = static_cast<std::uint64_t>(mod_positive(fac.a, p));
        const std::uint64_t b = static_cast<std::uint64_t>(mod_positive(fac.b, p));
        if (a == 0) continue;
        const std::uint64_t root = mulmod_small(p - b % p, inv_mod_prime(a, p), p) % p;
        if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
    }
    return static_cast<unsigned>(roots.size());
}

WeilReport weil_bound_check(const RealCharacter& chi, const LinearFactorPoly& f) {
    const std::uint64_t p = chi.modulus();
    if (chi.prime_factors().size() != 1 || chi.two_exponent() != 0)
        throw DomainError("weil_bound_check: character modulus must be an odd prime");
    switch (classify_square_mod_p(f, p)) {
        case PolySquareClass::square:
            throw DomainError("weil_bound_check: f is a square mod p, bound inapplicable");
        case PolySquareClass::identically_zero:
            throw DomainError("weil_bound_check: f vanishes identically mod p");
        case PolySquareClass::non_square:
            break;
    }
    WeilReport report;
    report.sum = char_sum_poly(chi, f);
    report.distinct_roots = distinct_roots_mod_p(f, p);
    report.bound = (report.distinct_roots - 1.0) * std::sqrt(static_cast<double>(p));
    report.holds = std::llabs(report.sum) <= report.bound;
    return report;
}

CrtCharSumReport crt_char_sum(const RealCharacter& chi, const LinearFactorPoly& f) {
    f.validate();
    CrtCharSumReport report;
    report.direct_sum = char_sum_poly(chi, f);

    const std::uint64_t q = chi.modulus();
    i128 product = 1;
    std::int64_t check = 1;
    for (std::int64_t di : chi.prime_discriminants()) {
        check *= di;
        const RealCharacter comp = RealCharacter::from_discriminant(di);
        const std::uint64_t qi = comp.modulus();
        const std::uint64_t multiplier = q / qi; // weight of this component in the CRT basis
        const std::int64_t mi = static_cast<std::int64_t>(qi);
        std::int64_t sum = 0;
        for (std::int64_t a = 0; a < mi; ++a) {
            const std::int64_t x = static_cast<std::int64_t>(
                mulmod_small(static_cast<std::uint64_t>(a), multiplier % qi, qi));
            int term = 1;
            for (const LinearFactor& fac : f.factors) {
                const std::int64_t arg =
                    mod_positive(fac.b % mi + ((fac.a % mi) * x) % mi, qi);
                term *= comp(arg);
                if (term == 0) break;
            }
            sum += term;
        }
        report.components.push_back({di, qi, sum});
        product = checked_mul(product, i128{sum});
    }
    if (check != chi.discriminant())
        throw DomainError("conductor factorization failed to reproduce the discriminant");
    report.factored_product = product;
    const unsigned s = static_cast<unsigned>(chi.prime_factors().size());
    report.bound =
        std::pow(static_cast<double>(f.degree()) - 1.0, static_cast<double>(s)) *
        std::sqrt(static_cast<double>(q));
    report.agree = (product == i128{report.direct_sum});
    return report;
}

double prime_log_sum(const RealCharacter& chi, std::uint64_t x, const SieveTable& table,
                     PrimeClass which) {
    if (x > table.limit()) throw RangeError("prime_log_sum: x out of table range");
    const int target = (which == PrimeClass::chi_one) ? 1 : 0;
    double sum = 0.0;
    double comp = 0.0; // Kahan compensation
    for (std::uint32_t p : table.primes()) {
        if (p > x) break;
        if (chi(static_cast<std::int64_t>(p)) != target) continue;
        const double term = std::log(static_cast<double>(p)) / static_cast<double>(p);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace chowla
