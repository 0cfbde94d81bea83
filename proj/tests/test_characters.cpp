#include "doctest.h"

#include <cmath>
#include <random>

#include "chowla/characters.hpp"

using namespace chowla;

namespace {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t result = 1;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) result = static_cast<std::uint64_t>((static_cast<u128>(result) * base) % mod);
        base = static_cast<std::uint64_t>((static_cast<u128>(base) * base) % mod);
        exp >>= 1;
    }
    return result;
}

// Euler-criterion oracle for the Legendre symbol, p an odd prime.
int legendre_oracle(std::int64_t a, std::uint64_t p) {
    std::int64_t r = a % static_cast<std::int64_t>(p);
    if (r < 0) r += static_cast<std::int64_t>(p);
    if (r == 0) return 0;
    const std::uint64_t e = powmod(static_cast<std::uint64_t>(r), (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

// Jacobi oracle built from the Legendre oracle over the factorization.
int jacobi_oracle(std::int64_t a, std::uint64_t n) {
    int result = 1;
    for (std::uint64_t p = 3; n > 1; p += 2) {
        if (p * p > n) p = n;
        while (n % p == 0) {
            n /= p;
            result *= legendre_oracle(a, p);
        }
    }
    return result;
}

std::vector<std::int64_t> some_fundamental_discriminants(std::size_t want, std::uint64_t max_abs,
                                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(-static_cast<std::int64_t>(max_abs),
                                                     static_cast<std::int64_t>(max_abs));
    std::vector<std::int64_t> out;
    while (out.size() < want) {
        const std::int64_t d = dist(rng);
        if (d != 0 && d != 1 && is_fundamental_discriminant(d)) out.push_back(d);
    }
    return out;
}

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<std::uint32_t> out;
        for (std::uint32_t n = 2; n <= 10'000; ++n) {
            bool prime = true;
            for (std::uint32_t d = 2; d * d <= n; ++d)
                if (n % d == 0) {
                    prime = false;
                    break;
                }
            if (prime) out.push_back(n);
        }
        return out;
    }();
    return primes;
}

} // namespace

TEST_CASE("kronecker symbol against the Euler criterion") {
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 97ull, 199ull})
        for (std::int64_t a = -50; a <= 50; ++a)
            CHECK(kronecker_symbol(a, static_cast<std::int64_t>(p)) == legendre_oracle(a, p));

    // odd composite second argument: Jacobi symbol
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> adist(-10'000, 10'000);
    std::uniform_int_distribution<std::uint64_t> ndist(1, 2000);
    for (int i = 0; i < 3000; ++i) {
        const std::int64_t a = adist(rng);
        const std::uint64_t n = 2 * ndist(rng) + 1;
        CHECK(kronecker_symbol(a, static_cast<std::int64_t>(n)) == jacobi_oracle(a, n));
    }

    // the supplement at 2
    CHECK(kronecker_symbol(7, 2) == 1);
    CHECK(kronecker_symbol(-7, 2) == 1);
    CHECK(kronecker_symbol(3, 2) == -1);
    CHECK(kronecker_symbol(-3, 2) == -1);
    CHECK(kronecker_symbol(6, 2) == 0);
    CHECK(kronecker_symbol(5, 0) == 0);
    CHECK(kronecker_symbol(1, 0) == 1);
    CHECK(kronecker_symbol(-1, 0) == 1);
}

TEST_CASE("fundamental discriminant validation") {
    for (std::int64_t d : {1, 5, -3, -4, 8, -8, 12, -15, 21, 13, -20})
        CHECK(is_fundamental_discriminant(d));
    for (std::int64_t d : {0, 3, -5, -12, 45, 72, 100, 2, -2})
        CHECK_FALSE(is_fundamental_discriminant(d));

    CHECK_THROWS_AS(RealCharacter::from_discriminant(0), DomainError);
    CHECK_THROWS_AS(RealCharacter::from_discriminant(3), DomainError);
    CHECK_THROWS_AS(RealCharacter::from_discriminant(-12), DomainError);
    CHECK_THROWS_AS(RealCharacter::from_discriminant(72), DomainError);
}

TEST_CASE("character values at small discriminants") {
    const RealCharacter chi4 = RealCharacter::from_discriminant(-4);
    CHECK(chi4(1) == 1);
    CHECK(chi4(3) == -1);
    CHECK(chi4(2) == 0);
    CHECK(chi4(7) == -1);
    CHECK(chi4(0) == 0);
    CHECK_FALSE(chi4.is_even());

    const RealCharacter chi5 = RealCharacter::from_discriminant(5);
    CHECK(chi5(2) == -1);
    CHECK(chi5(6) == 1); // periodicity: chi(6) = chi(1)
    CHECK(chi5.is_even());

    const RealCharacter chi3 = RealCharacter::from_discriminant(-3);
    CHECK(chi3(2) == -1);

    const RealCharacter chi8 = RealCharacter::from_discriminant(8);
    CHECK(chi8(1) == 1);
    CHECK(chi8(3) == -1);
    CHECK(chi8(5) == -1);
    CHECK(chi8(7) == 1);
}

TEST_CASE("multiplicativity, periodicity, orthogonality") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> ab(-1'000'000, 1'000'000);
    for (std::int64_t d : some_fundamental_discriminants(20, 10'000, 42)) {
        const RealCharacter chi = RealCharacter::from_discriminant(d);
        const std::int64_t q = static_cast<std::int64_t>(chi.modulus());
        for (int i = 0; i < 500; ++i) {
            const std::int64_t a = ab(rng), b = ab(rng);
            CHECK(chi(a * b) == chi(a) * chi(b));
            CHECK(chi(a + q) == chi(a));
            const std::int64_t g = std::gcd(a < 0 ? -a : a, q);
            CHECK((chi(a) == 0) == (g > 1));
        }
        std::int64_t sum = 0;
        for (std::int64_t n = 0; n < q; ++n) sum += chi(n);
        CHECK(sum == 0); // non-principal
    }
}

TEST_CASE("conductor structure and prime-discriminant factorization") {
    for (std::int64_t d : some_fundamental_discriminants(25, 30'000, 7)) {
        const RealCharacter chi = RealCharacter::from_discriminant(d);
        CHECK((chi.two_exponent() == 0 || chi.two_exponent() == 2 || chi.two_exponent() == 3));
        CHECK(chi.odd_part() % 2 == 1);
        CHECK(chi.modulus() == (std::uint64_t{1} << chi.two_exponent()) * chi.odd_part());

        std::int64_t product = 1;
        for (std::int64_t di : chi.prime_discriminants()) {
            CHECK(is_fundamental_discriminant(di));
            product *= di;
        }
        CHECK(product == d);

        // chi is the product of its component characters
        std::vector<RealCharacter> parts;
        for (std::int64_t di : chi.prime_discriminants())
            parts.push_back(RealCharacter::from_discriminant(di));
        for (std::int64_t n = -20; n <= 20; ++n) {
            int prod = 1;
            for (const auto& part : parts) prod *= part(n);
            CHECK(chi(n) == prod);
        }
    }
}

TEST_CASE("character sums over polynomials with linear factors") {
    // x(x+1) for the quadratic character mod 7
    const LinearFactorPoly f_x_x1{{{0, 1}, {1, 1}}};
    CHECK(char_sum_poly(RealCharacter::legendre(7), f_x_x1) == -1);

    // single linear factor: full cancellation
    const LinearFactorPoly f_single{{{3, 1}}};
    CHECK(char_sum_poly(RealCharacter::legendre(13), f_single) == 0);

    // x(x+1)(x+2) mod 11, frozen from the Euler-criterion oracle
    const LinearFactorPoly f_cube{{{0, 1}, {1, 1}, {2, 1}}};
    {
        std::int64_t oracle = 0;
        for (std::int64_t n = 0; n < 11; ++n)
            oracle += legendre_oracle(n * (n + 1) * (n + 2), 11);
        CHECK(oracle == 0);
        CHECK(char_sum_poly(RealCharacter::legendre(11), f_cube) == oracle);
    }

    // x(x+1) identity: exactly -1 for every odd prime (desk check to 500)
    for (std::uint32_t p : small_primes()) {
        if (p == 2) continue;
        if (p > 500) break;
        CHECK(char_sum_poly(RealCharacter::legendre(p), f_x_x1) == -1);
    }
}

TEST_CASE("square classification mod p") {
    const LinearFactorPoly sq{{{0, 1}, {0, 1}}};      // x * x
    const LinearFactorPoly dist{{{0, 1}, {1, 1}}};    // x(x+1)
    const LinearFactorPoly collide{{{0, 1}, {5, 1}}}; // x(x+5): collides mod 5
    const LinearFactorPoly zero{{{5, 5}, {1, 1}}};    // (5+5x) vanishes mod 5
    const LinearFactorPoly constants{{{3, 0}, {1, 1}}};

    CHECK(classify_square_mod_p(sq, 5) == PolySquareClass::square);
    CHECK(is_square_mod_p(sq, 5));
    CHECK(classify_square_mod_p(dist, 5) == PolySquareClass::non_square);
    CHECK(classify_square_mod_p(collide, 5) == PolySquareClass::square);
    CHECK(classify_square_mod_p(zero, 5) == PolySquareClass::identically_zero);
    CHECK(classify_square_mod_p(collide, 7) == PolySquareClass::non_square);
    CHECK(classify_square_mod_p(constants, 5) == PolySquareClass::non_square);
    CHECK(distinct_roots_mod_p(dist, 5) == 2);
    CHECK(distinct_roots_mod_p(collide, 5) == 1);
    CHECK(distinct_roots_mod_p(constants, 7) == 1);
}

TEST_CASE("weil bound") {
    const LinearFactorPoly f_x_x1{{{0, 1}, {1, 1}}};
    const WeilReport r7 = weil_bound_check(RealCharacter::legendre(7), f_x_x1);
    CHECK(r7.sum == -1);
    CHECK(r7.distinct_roots == 2);
    CHECK(r7.holds);

    const LinearFactorPoly f13{{{0, 1}, {1, 1}, {3, 1}}};
    const WeilReport r13 = weil_bound_check(RealCharacter::legendre(13), f13);
    CHECK(r13.sum == 2); // frozen from the direct Euler-criterion loop
    CHECK(r13.distinct_roots == 3);
    CHECK(r13.bound == doctest::Approx(2.0 * std::sqrt(13.0)));
    CHECK(r13.holds);

    // p = 3: x(x+1)(x+2) covers every residue, sum of chi(0) terms
    const LinearFactorPoly f3{{{0, 1}, {1, 1}, {2, 1}}};
    const WeilReport r3 = weil_bound_check(RealCharacter::legendre(3), f3);
    CHECK(r3.sum == 0);
    CHECK(r3.holds);

    const LinearFactorPoly square{{{0, 1}, {0, 1}}};
    CHECK_THROWS_AS(weil_bound_check(RealCharacter::legendre(7), square), DomainError);

    // property: never violated over random non-square instances
    std::mt19937_64 rng(321);
    std::uniform_int_distribution<std::size_t> pidx(1, small_primes().size() - 1);
    std::uniform_int_distribution<std::size_t> nfac(1, 5);
    std::uniform_int_distribution<std::int64_t> coef(-30, 30);
    int tested = 0;
    while (tested < 500) {
        const std::uint32_t p = small_primes()[pidx(rng)];
        LinearFactorPoly f;
        const std::size_t nf = nfac(rng);
        for (std::size_t i = 0; i < nf; ++i) f.factors.push_back({coef(rng), coef(rng)});
        bool valid = true;
        for (const auto& fac : f.factors)
            if (fac.a == 0 && fac.b == 0) valid = false;
        if (!valid || std::all_of(f.factors.begin(), f.factors.end(),
                                  [](const LinearFactor& l) { return l.a == 0; }))
            continue;
        if (classify_square_mod_p(f, p) != PolySquareClass::non_square) continue;
        const WeilReport rep = weil_bound_check(RealCharacter::legendre(p), f);
        CHECK(rep.holds);
        ++tested;
    }
}

TEST_CASE("character sum factors through the CRT") {
    const LinearFactorPoly f_x_x1{{{0, 1}, {1, 1}}};
    const LinearFactorPoly f_x_x2{{{0, 1}, {2, 1}}};

    const CrtCharSumReport r15 = crt_char_sum(RealCharacter::from_discriminant(-15), f_x_x1);
    CHECK(r15.agree);
    CHECK(r15.components.size() == 2);
    CHECK(r15.factored_product == i128{r15.direct_sum});

    const CrtCharSumReport r21 = crt_char_sum(RealCharacter::from_discriminant(21), f_x_x2);
    CHECK(r21.agree);

    // prime modulus degenerates to the plain sum
    const CrtCharSumReport r7 = crt_char_sum(RealCharacter::legendre(7), f_x_x1);
    CHECK(r7.agree);
    CHECK(r7.components.size() == 1);
    CHECK(r7.direct_sum == -1);

    for (std::int64_t d : some_fundamental_discriminants(15, 3000, 11)) {
        const CrtCharSumReport rep = crt_char_sum(RealCharacter::from_discriminant(d), f_x_x1);
        CHECK(rep.agree);
        CHECK(std::abs(static_cast<double>(rep.direct_sum)) <= rep.bound + 1e-9);
    }
}

TEST_CASE("prime log sums") {
    const SieveTable table = SieveTable::build(1'000'000);
    const RealCharacter chi4 = RealCharacter::from_discriminant(-4);

    // primes p <= 10 with p == 1 mod 4: just 5
    CHECK(prime_log_sum(chi4, 10, table, PrimeClass::chi_one) ==
          doctest::Approx(std::log(5.0) / 5.0).epsilon(1e-12));

    // selector chi = 0 picks out primes dividing the conductor
    CHECK(prime_log_sum(chi4, 10, table, PrimeClass::chi_zero) ==
          doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    CHECK(prime_log_sum(RealCharacter::from_discriminant(5), 2, table, PrimeClass::chi_zero) ==
          0.0);

    // x = 2 with an odd conductor: the single prime 2 contributes iff chi(2) = 1
    CHECK(prime_log_sum(RealCharacter::from_discriminant(-7), 2, table, PrimeClass::chi_one) ==
          doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    CHECK(prime_log_sum(RealCharacter::from_discriminant(5), 2, table, PrimeClass::chi_one) ==
          0.0);

    // Mertens-type split: primes with chi(p) = 1 carry about half the mass
    double total = 0.0;
    for (std::uint32_t p : table.primes()) total += std::log(static_cast<double>(p)) / p;
    const double half = prime_log_sum(chi4, 1'000'000, table, PrimeClass::chi_one);
    CHECK(std::abs(half - 0.5 * total) < 2.0);

    CHECK_THROWS_AS(prime_log_sum(chi4, 2'000'000, table, PrimeClass::chi_one), RangeError);
}
