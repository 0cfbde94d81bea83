#include "chowla/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace chowla {

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
    return to_string(static_cast<u128>(v));
}

std::uint64_t SieveTable::default_limit_cap() {
    static const std::uint64_t cap = [] {
        if (const char* env = std::getenv("CHOWLA_LAB_TABLE_LIMIT")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v >= 2) return static_cast<std::uint64_t>(v);
        }
        return std::uint64_t{100'000'000};
    }();
    return cap;
}

SieveTable SieveTable::build(std::uint64_t limit) { return build(limit, default_limit_cap()); }

SieveTable SieveTable::build(std::uint64_t limit, std::uint64_t cap) {
    if (limit < 2) throw DomainError("sieve table limit must be at least 2");
    if (limit > cap)
        throw CapacityError("sieve table limit " + std::to_string(limit) +
                            " exceeds capacity " + std::to_string(cap) +
                            " (4 bytes per entry; raise CHOWLA_LAB_TABLE_LIMIT to allow)");
    if (limit > 0xFFFFFFFFull) throw CapacityError("sieve table limit exceeds 32-bit entry width");

    SieveTable t;
    t.limit_ = limit;
    t.spf_.assign(limit + 1, 0);
    // Linear sieve: each composite is crossed off exactly once, by its
    // smallest prime factor.
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf_[i] == 0) {
            t.spf_[i] = static_cast<std::uint32_t>(i);
            t.primes_.push_back(static_cast<std::uint32_t>(i));
        }
        const std::uint32_t spf_i = t.spf_[i];
        for (std::uint32_t p : t.primes_) {
            if (p > spf_i) break;
            const std::uint64_t m = i * p;
            if (m > limit) break;
            t.spf_[m] = p;
        }
    }
    return t;
}

std::uint32_t SieveTable::smallest_prime_factor(std::uint64_t n) const {
    if (n < 2 || n > limit_) throw RangeError("smallest_prime_factor: n out of table range");
    return spf_[n];
}

bool SieveTable::is_prime(std::uint64_t n) const {
    if (n < 2) return false;
    if (n > limit_) throw RangeError("is_prime: n out of table range");
    return spf_[n] == n;
}

int SieveTable::liouville(std::uint64_t n) const { return (big_omega(n) & 1u) ? -1 : +1; }

int SieveTable::mobius(std::uint64_t n) const {
    if (n < 1 || n > limit_) throw RangeError("mobius: n out of table range");
    int sign = 1;
    while (n > 1) {
        const std::uint32_t p = spf_[n];
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    return sign;
}

unsigned SieveTable::big_omega(std::uint64_t n) const {
    if (n < 1 || n > limit_) throw RangeError("big_omega: n out of table range");
    unsigned count = 0;
    while (n > 1) {
        n /= spf_[n];
        ++count;
    }
    return count;
}

unsigned SieveTable::small_omega(std::uint64_t n) const {
    if (n < 1 || n > limit_) throw RangeError("small_omega: n out of table range");
    unsigned count = 0;
    while (n > 1) {
        const std::uint32_t p = spf_[n];
        ++count;
        while (n % p == 0) n /= p;
    }
    return count;
}

SmoothSplit SieveTable::smooth_split(std::uint64_t n, std::uint64_t r) const {
    if (n < 1 || n > limit_) throw RangeError("smooth_split: n out of table range");
    if (r < 2) throw DomainError("smooth_split: smoothness bound must be >= 2");
    SmoothSplit out;
    out.n = n;
    out.r = r;
    while (n > 1) {
        const std::uint32_t p = spf_[n];
        std::uint64_t pk = 1;
        while (n % p == 0) {
            n /= p;
            pk *= p;
        }
        if (p <= r)
            out.smooth *= pk;
        else
            out.rough *= pk;
    }
    return out;
}

std::uint64_t SieveTable::count_large_smooth(std::uint64_t x, std::uint64_t r, double A) const {
    if (x > limit_) throw RangeError("count_large_smooth: x out of table range");
    if (r < 2) throw DomainError("count_large_smooth: smoothness bound must be >= 2");
    if (A < 1.0) throw DomainError("count_large_smooth: exponent must be >= 1");

    // Integer threshold path: r^A exact when A is integral. Saturates at
    // limit_+1 since no smooth part can exceed the table limit.
    bool integral = (A == std::floor(A)) && A < 64.0;
    std::uint64_t threshold = 0;
    if (integral) {
        u128 t = 1;
        for (unsigned i = 0; i < static_cast<unsigned>(A); ++i) {
            t *= r;
            if (t > limit_) break;
        }
        threshold = (t > limit_) ? limit_ : static_cast<std::uint64_t>(t);
        if (t > limit_) return 0;
    }
    const double log_threshold = A * std::log(static_cast<double>(r));
    const double guard = 1e-12 * std::max(1.0, log_threshold);

    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const std::uint64_t s = smooth_split(n, r).smooth;
        if (integral) {
            if (s > threshold) ++count;
        } else {
            if (std::log(static_cast<double>(s)) > log_threshold + guard) ++count;
        }
    }
    return count;
}

std::uint64_t SieveTable::tau_kappa(std::uint64_t n, unsigned kappa) const {
    if (n < 1 || n > limit_) throw RangeError("tau_kappa: n out of table range");
    if (kappa < 1) throw DomainError("tau_kappa: kappa must be >= 1");
    // Multiplicative: a prime power p^a contributes C(a + kappa - 1, a)
    // ways to spread the exponent over kappa ordered slots.
    u128 result = 1;
    while (n > 1) {
        const std::uint32_t p = spf_[n];
        unsigned a = 0;
        while (n % p == 0) {
            n /= p;
            ++a;
        }
        u128 binom = 1;
        for (unsigned j = 1; j <= a; ++j) {
            binom = checked_mul(binom, u128{kappa - 1 + j});
            binom /= j;
        }
        result = checked_mul(result, binom);
    }
    if (result > u128{UINT64_MAX}) throw OverflowError("tau_kappa overflowed 64 bits");
    return static_cast<std::uint64_t>(result);
}

u128 lcm_many(std::span<const std::uint64_t> values) {
    if (values.empty()) throw DomainError("lcm_many: empty input");
    u128 acc = 1;
    for (std::uint64_t v : values) {
        if (v == 0) throw DomainError("lcm_many: values must be positive");
        const u128 g = static_cast<u128>(gcd128(static_cast<i128>(acc), static_cast<i128>(v)));
        acc = checked_mul(acc / g, u128{v});
    }
    return acc;
}

} // namespace chowla
