#include "doctest.h"

#include <random>

#include "chowla/sieve.hpp"

using namespace chowla;

namespace {

const std::vector<std::uint64_t>& primes_to_200() {
    static const std::vector<std::uint64_t> out = [] {
        std::vector<std::uint64_t> v;
        for (std::uint64_t n = 2; n <= 200; ++n) {
            bool prime = true;
            for (std::uint64_t d = 2; d * d <= n; ++d)
                if (n % d == 0) prime = false;
            if (prime) v.push_back(n);
        }
        return v;
    }();
    return out;
}

CongruenceFamily random_family(std::mt19937_64& rng, std::size_t max_forms = 5) {
    std::uniform_int_distribution<std::size_t> nf(1, max_forms);
    std::uniform_int_distribution<std::int64_t> coef(-50, 50);
    CongruenceFamily fam;
    const std::size_t n = nf(rng);
    for (std::size_t i = 0; i < n; ++i) fam.forms.push_back({coef(rng), coef(rng)});
    return fam;
}

} // namespace

TEST_CASE("local root counts nu_p") {
    // forms m and m+1: two residues knocked out mod 5
    const CongruenceFamily consecutive{{{0, 1}, {1, 1}}};
    const LocalCount c5 = nu_p(consecutive, 5, 7, 1);
    CHECK(c5.count == 2);
    CHECK(c5.tag == LocalCountCase::all_invertible);

    // identically vanishing form removes every class
    const CongruenceFamily degenerate{{{5, 5}, {1, 1}}};
    const LocalCount cdeg = nu_p(degenerate, 5, 7, 1);
    CHECK(cdeg.count == 5);
    CHECK(cdeg.tag == LocalCountCase::identically_zero);

    // m and m+3 collapse to a single class mod 3
    const CongruenceFamily collapsing{{{0, 1}, {3, 1}}};
    CHECK(nu_p(collapsing, 3, 7, 0).count == 1);

    // p dividing the ambient modulus: constants coprime to q leave nothing
    const CongruenceFamily coprime_consts{{{1, 10}, {3, 20}}};
    const LocalCount cq = nu_p(coprime_consts, 5, 10, 0);
    CHECK(cq.count == 0);
    CHECK(cq.tag == LocalCountCase::prime_divides_q);

    // small primes are answered by direct scanning
    CHECK(nu_p(consecutive, 2, 7, 5).tag == LocalCountCase::small_prime_direct);
    CHECK(nu_p(consecutive, 2, 7, 5).count == 2);
}

TEST_CASE("nu_p and root_count_mod_p match direct counting") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::uint64_t> qdist(1, 100);
    for (int trial = 0; trial < 200; ++trial) {
        const CongruenceFamily fam = random_family(rng);
        const std::uint64_t q = qdist(rng);
        for (std::uint64_t p : primes_to_200()) {
            const std::uint64_t direct = count_roots_direct(fam.forms, p);
            CHECK(nu_p(fam, p, q, 10).count == direct);
            CHECK(root_count_mod_p(fam.forms, p, 10).count == direct);
            CHECK(root_count_mod_p(fam.forms, p, -1).count == direct);
        }
    }
}

TEST_CASE("root_count_mod_p worked examples") {
    const std::vector<LinearForm> two{{0, 1}, {1, 1}};
    CHECK(root_count_mod_p(two, 7, 0).count == 2);

    const std::vector<LinearForm> zero{{0, 0}, {1, 1}};
    const LocalCount z = root_count_mod_p(zero, 7, 0);
    CHECK(z.count == 7);
    CHECK(z.tag == LocalCountCase::identically_zero);

    const std::vector<LinearForm> pair{{1, 3}, {2, 5}};
    CHECK(root_count_mod_p(pair, 11, 0).count == count_roots_direct(pair, 11));
}

TEST_CASE("nu_d is the CRT product") {
    const SieveTable table = SieveTable::build(100'000);
    const CongruenceFamily consecutive{{{0, 1}, {1, 1}}};
    CHECK(nu_d(consecutive, 1, table, 7, 1) == 1);
    CHECK(nu_d(consecutive, 15, table, 7, 1) == 4);
    CHECK(nu_d(consecutive, 15, table, 7, 1) == count_roots_direct(consecutive.forms, 15));
    CHECK(nu_d(consecutive, 13, table, 7, 1) == nu_p(consecutive, 13, 7, 1).count);
    CHECK_THROWS_AS(nu_d(consecutive, 12, table, 7, 1), DomainError); // not squarefree

    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        const CongruenceFamily fam = random_family(rng, 3);
        for (std::uint64_t d = 1; d <= 1000; ++d) {
            if (table.mobius(d) == 0) continue;
            CHECK(nu_d(fam, d, table, 7, 10) == count_roots_direct(fam.forms, d));
        }
    }

    // nu(d) <= tau_{k+1}(d) for families of k+1 forms with nu(p) <= k+1
    for (int trial = 0; trial < 20; ++trial) {
        const CongruenceFamily fam = random_family(rng, 4);
        bool degenerate = false;
        for (const LinearForm& f : fam.forms)
            if (f.s == 0) degenerate = true;
        if (degenerate) continue;
        const unsigned kappa = static_cast<unsigned>(fam.forms.size());
        for (std::uint64_t d = 2; d <= 2000; ++d) {
            if (table.mobius(d) == 0) continue;
            bool zero_form = false;
            std::uint64_t rest = d;
            while (rest > 1) {
                const std::uint64_t p = table.smallest_prime_factor(rest);
                rest /= p;
                for (const LinearForm& f : fam.forms)
                    if (f.s % static_cast<std::int64_t>(p) == 0 &&
                        f.c % static_cast<std::int64_t>(p) == 0)
                        zero_form = true;
            }
            if (zero_form) continue;
            CHECK(nu_d(fam, d, table, 1, -1) <= table.tau_kappa(d, kappa));
        }
    }
}

TEST_CASE("coprime residue counts") {
    const std::vector<LinearForm> consecutive{{0, 1}, {1, 1}};
    const CoprimeCountReport r6 = coprime_residue_count(consecutive, 6);
    CHECK(r6.by_formula == 0);
    CHECK(r6.by_enumeration == 0);
    CHECK(r6.agree);

    const std::vector<LinearForm> constant{{1, 0}};
    CHECK(coprime_residue_count(constant, 5).by_formula == 5);

    const std::vector<LinearForm> identity{{0, 1}};
    CHECK(coprime_residue_count(identity, 15).by_formula == 8); // totient

    std::mt19937_64 rng(66);
    std::uniform_int_distribution<std::uint64_t> qdist(1, 5000);
    for (int trial = 0; trial < 150; ++trial) {
        const CongruenceFamily fam = random_family(rng, 4);
        const CoprimeCountReport rep = coprime_residue_count(fam.forms, qdist(rng));
        CHECK(rep.agree);
    }
}

TEST_CASE("exact sifted counts by scan and inclusion-exclusion") {
    SieveProblem p;
    p.x_scale = 30.0;
    p.primes = {2, 3, 5};
    p.nu = {1, 1, 1};
    p.set = IntervalSpec{1, 30, 0, 1};
    const SExactReport r = s_exact(p);
    CHECK(r.by_scan == 8);
    CHECK(r.by_inclusion_exclusion == 8);
    CHECK(r.agree);

    SieveProblem empty;
    empty.x_scale = 0.0;
    empty.set = IntervalSpec{1, 0, 0, 1};
    CHECK(s_exact(empty).by_scan == 0);
    CHECK(s_exact(empty).agree);

    // no primes: everything counts
    SieveProblem free_problem;
    free_problem.x_scale = 10.0;
    free_problem.set = IntervalSpec{1, 10, 0, 1};
    CHECK(s_exact(free_problem).by_scan == 10);

    // arithmetic progression shape
    SieveProblem ap;
    ap.x_scale = 100.0;
    ap.primes = {3, 7};
    ap.nu = {1, 1};
    ap.set = IntervalSpec{1, 400, 1, 4}; // n == 1 mod 4
    CHECK(s_exact(ap).agree);

    // product-family shape
    SieveProblem forms;
    forms.primes = {2, 3, 5};
    forms.set = FormsFamilySpec{{{0, 1}, {1, 1}}, 1, 2000};
    forms.x_scale = 2000.0;
    forms.nu = {count_roots_direct({{0, 1}, {1, 1}}, 2), count_roots_direct({{0, 1}, {1, 1}}, 3),
                count_roots_direct({{0, 1}, {1, 1}}, 5)};
    CHECK(s_exact(forms).agree);
}

TEST_CASE("fundamental-lemma estimate brackets the exact count") {
    SieveProblem p;
    p.x_scale = 30.0;
    p.primes = {2, 3, 5};
    p.nu = {1, 1, 1};
    p.set = IntervalSpec{1, 30, 0, 1};
    const FlstEstimate est = flst_estimate(p, 1.0);
    CHECK(est.main == doctest::Approx(8.0));

    SieveProblem big;
    big.x_scale = 10'000.0;
    big.primes = {2, 3, 5, 7, 11, 13, 17, 19};
    big.nu.assign(8, 1);
    big.set = IntervalSpec{1, 10'000, 0, 1};
    const std::uint64_t s = s_exact(big).by_scan;
    for (double u : {1.0, 2.0, 3.0}) {
        const FlstEstimate e = flst_estimate(big, u);
        const double budget = 10.0 * (e.relative_budget * e.main + e.remainder_budget);
        CHECK(std::abs(static_cast<double>(s) - e.main) <= budget);
    }

    // degenerate density and axiom violation are loud and distinct
    SieveProblem deg = p;
    deg.nu = {2, 1, 1};
    CHECK_THROWS_AS(flst_estimate(deg, 1.0), DegenerateSieveError);
    SieveProblem bad = p;
    bad.nu = {3, 1, 1};
    CHECK_THROWS_AS(flst_estimate(bad, 1.0), AxiomError);
    CHECK_THROWS_AS(flst_estimate(p, 0.5), DomainError);
}

TEST_CASE("second axiom report") {
    SieveProblem p;
    p.x_scale = 1000.0;
    p.set = IntervalSpec{1, 1000, 0, 1};
    for (std::uint64_t q = 2; q <= 997; ++q) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) prime = false;
        if (prime) {
            p.primes.push_back(q);
            p.nu.push_back(1);
        }
    }
    const Axiom2Report rep = axiom2_check(p, 1.0, 1.0, 0.5);
    CHECK(rep.cap_holds);
    CHECK(rep.sup_deviation < 3.0); // Mertens-type: M(w) - log w stays bounded

    SieveProblem empty;
    empty.set = IntervalSpec{1, 0, 0, 1};
    CHECK(axiom2_check(empty, 1.0, 1.0, 0.5).sup_deviation == 0.0);

    SieveProblem capfail;
    capfail.x_scale = 10.0;
    capfail.primes = {2, 3};
    capfail.nu = {1, 3};
    capfail.set = IntervalSpec{1, 10, 0, 1};
    const Axiom2Report r2 = axiom2_check(capfail, 1.0, 2.0, 0.1);
    CHECK_FALSE(r2.cap_holds);
    CHECK(r2.cap_failures == std::vector<std::uint64_t>{3});
}

TEST_CASE("divisor sum bound") {
    const DivisorSumReport r1 = divisor_sum_bound(10, 1.0, 2);
    CHECK(r1.exact_sum == u128{27});

    const DivisorSumReport r2 = divisor_sum_bound(50, 1.0, 1);
    CHECK(r2.exact_sum == u128{50}); // tau_1 == 1

    const DivisorSumReport r3 = divisor_sum_bound(10, 2.0, 3);
    CHECK(r3.exact_sum > 0);
    CHECK(r3.bound == doctest::Approx(100.0 * std::pow(2.0 * std::log(10.0), 3.0)));

    CHECK_THROWS_AS(divisor_sum_bound(10, 30.0, 2), CapacityError);
}
