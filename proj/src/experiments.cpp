// Correlation sums accumulate in exact integer arithmetic (each summand
// is -1, 0, or +1); division by x happens once at the end. The moment
// experiment expands the k-th moment over ordered index tuples; since
// lambda^2 = 1 pointwise, a tuple's correlation depends only on the set
// of indices with odd multiplicity, which collapses m^k tuples onto
// subsets of [1, m] weighted by an exact tuple count.

#include "chowla/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace chowla {

namespace {

constexpr std::uint64_t kThreadingThreshold = 4096;

// Sum block_fn over [1, x] split into contiguous chunks, one per worker.
// Integer partial sums combine associatively, so the result is identical
// for every thread count.
template <typename Fn>
std::int64_t threaded_range_sum(std::uint64_t x, unsigned threads, Fn&& block_fn) {
    if (threads <= 1 || x < kThreadingThreshold) return block_fn(1, x);
    const unsigned workers = std::min<unsigned>(threads, 64);
    const std::uint64_t chunk = (x + workers - 1) / workers;
    std::vector<std::int64_t> partial(workers, 0);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = 1 + static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t hi = std::min(x, lo + chunk - 1);
        if (lo > hi) break;
        pool.emplace_back([&, w, lo, hi] { partial[w] = block_fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
    std::int64_t total = 0;
    for (std::int64_t p : partial) total += p;
    return total;
}

u128 binomial_u128(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 result = 1;
    for (unsigned j = 1; j <= k; ++j) {
        result = checked_mul(result, u128{n - k + j});
        result /= j;
    }
    return result;
}

i128 ipow_i128(i128 base, unsigned exp) {
    i128 result = 1;
    for (unsigned i = 0; i < exp; ++i) result = checked_mul(result, base);
    return result;
}

} // namespace

int lambda_r_eval(const SieveTable& table, const RealCharacter& chi, std::uint64_t r,
                  std::uint64_t n) {
    if (n < 1 || n > table.limit()) throw RangeError("lambda_r_eval: n out of table range");
    if (r < 2) throw DomainError("lambda_r_eval: r must be >= 2");
    int value = 1;
    while (n > 1) {
        const std::uint32_t p = table.smallest_prime_factor(n);
        const int vp = (p <= r) ? -1 : chi(static_cast<std::int64_t>(p));
        while (n % p == 0) {
            n /= p;
            value *= vp;
        }
        if (value == 0) return 0;
    }
    return value;
}

std::vector<std::int8_t> bulk_values(const SieveTable& table, CorrelationFn fn,
                                     std::uint64_t n_max, const RealCharacter* chi,
                                     std::uint64_t r) {
    if (n_max > table.limit()) throw RangeError("bulk_values: n_max out of table range");
    if (fn == CorrelationFn::lambda_r && (chi == nullptr || r < 2))
        throw DomainError("bulk_values: hybrid function needs a character and r >= 2");
    std::vector<std::int8_t> vals(n_max + 1, 0);
    if (n_max >= 1) vals[1] = 1;
    switch (fn) {
        case CorrelationFn::liouville:
            for (std::uint64_t n = 2; n <= n_max; ++n)
                vals[n] = static_cast<std::int8_t>(-vals[n / table.smallest_prime_factor(n)]);
            break;
        case CorrelationFn::mobius:
            for (std::uint64_t n = 2; n <= n_max; ++n) {
                const std::uint32_t p = table.smallest_prime_factor(n);
                const std::uint64_t rest = n / p;
                vals[n] = (rest % p == 0) ? std::int8_t{0}
                                          : static_cast<std::int8_t>(-vals[rest]);
            }
            break;
        case CorrelationFn::lambda_r:
            for (std::uint64_t n = 2; n <= n_max; ++n) {
                const std::uint32_t p = table.smallest_prime_factor(n);
                const int vp = (p <= r) ? -1 : (*chi)(static_cast<std::int64_t>(p));
                vals[n] = static_cast<std::int8_t>(vp * vals[n / p]);
            }
            break;
    }
    return vals;
}

CorrelationReport chowla_correlation(const SieveTable& table, CorrelationFn fn, std::uint64_t x,
                                     std::span<const std::int64_t> shifts,
                                     const RealCharacter* chi, std::uint64_t r,
                                     unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    if (x < 1) throw DomainError("chowla_correlation: x must be positive");
    if (shifts.empty()) throw DomainError("chowla_correlation: need at least one shift");
    const std::int64_t max_shift = *std::max_element(shifts.begin(), shifts.end());
    if (max_shift > 0 && x + static_cast<std::uint64_t>(max_shift) > table.limit())
        throw RangeError("chowla_correlation: x + max(shift) exceeds table limit");
    if (x > table.limit()) throw RangeError("chowla_correlation: x exceeds table limit");

    const std::uint64_t n_max = x + static_cast<std::uint64_t>(std::max<std::int64_t>(max_shift, 0));
    const std::vector<std::int8_t> vals = bulk_values(table, fn, n_max, chi, r);

    const bool all_nonnegative =
        std::all_of(shifts.begin(), shifts.end(), [](std::int64_t h) { return h >= 0; });
    const std::int64_t raw = threaded_range_sum(x, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        std::int64_t sum = 0;
        if (all_nonnegative) {
            for (std::uint64_t n = lo; n <= hi; ++n) {
                int term = 1;
                for (std::int64_t h : shifts) {
                    term *= vals[n + static_cast<std::uint64_t>(h)];
                    if (term == 0) break;
                }
                sum += term;
            }
        } else {
            // Terms with any n + h <= 0 contribute zero.
            for (std::uint64_t n = lo; n <= hi; ++n) {
                int term = 1;
                for (std::int64_t h : shifts) {
                    const std::int64_t arg = static_cast<std::int64_t>(n) + h;
                    if (arg <= 0) {
                        term = 0;
                        break;
                    }
                    term *= vals[static_cast<std::uint64_t>(arg)];
                    if (term == 0) break;
                }
                sum += term;
            }
        }
        return sum;
    });

    CorrelationReport report;
    report.x = x;
    report.shifts.assign(shifts.begin(), shifts.end());
    report.raw_sum = raw;
    report.value = static_cast<double>(raw) / static_cast<double>(x);
    report.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return report;
}

DifferenceReport correlation_difference(const SieveTable& table, const RealCharacter& chi,
                                        std::uint64_t r, std::uint64_t x,
                                        std::span<const std::int64_t> shifts) {
    if (shifts.empty()) throw DomainError("correlation_difference: need at least one shift");
    for (std::int64_t h : shifts)
        if (h < 0) throw DomainError("correlation_difference: shifts must be non-negative");
    const std::uint64_t k = shifts.size();
    const std::uint64_t max_shift =
        static_cast<std::uint64_t>(*std::max_element(shifts.begin(), shifts.end()));
    if (x + max_shift > table.limit())
        throw RangeError("correlation_difference: x + max(shift) exceeds table limit");

    const std::uint64_t n_max = x + max_shift;
    const std::vector<std::int8_t> lam = bulk_values(table, CorrelationFn::liouville, n_max);
    const std::vector<std::int8_t> hyb =
        bulk_values(table, CorrelationFn::lambda_r, n_max, &chi, r);

    std::int64_t gap = 0;
    std::uint64_t abs_diff = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        int t1 = 1, t2 = 1;
        for (std::int64_t h : shifts) {
            t1 *= lam[n + static_cast<std::uint64_t>(h)];
            t2 *= hyb[n + static_cast<std::uint64_t>(h)];
        }
        gap += t1 - t2;
        abs_diff += static_cast<std::uint64_t>(std::abs(int{lam[n]} - int{hyb[n]}));
    }

    DifferenceReport report;
    report.lhs_abs = static_cast<std::uint64_t>(std::llabs(gap));
    report.sum_abs_diff = abs_diff;
    report.majorant = k * abs_diff + k * max_shift;
    report.holds = report.lhs_abs <= report.majorant;
    return report;
}

TupleCountReport even_multiplicity_tuple_count(std::uint64_t m, unsigned k) {
    if (m < 1) throw DomainError("even_multiplicity_tuple_count: m must be positive");
    if (k == 0 || (k & 1u)) throw DomainError("even_multiplicity_tuple_count: k must be even and positive");
    TupleCountReport report;
    report.bound = std::pow(2.0L, static_cast<long double>(k)) *
                   std::pow(static_cast<long double>(m), k / 2.0L) *
                   std::pow(static_cast<long double>(k), k / 2.0L);

    if (std::pow(static_cast<double>(m), static_cast<double>(k)) > 1e8) return report;

    // Depth-first enumeration with a parity vector; prune when the
    // remaining slots cannot repair the current odd values.
    std::vector<std::uint8_t> odd(m + 1, 0);
    std::uint64_t count = 0;
    unsigned odd_count = 0;
    auto recurse = [&](auto&& self, unsigned pos) -> void {
        if (k - pos < odd_count) return;
        if (pos == k) {
            if (odd_count == 0) ++count;
            return;
        }
        for (std::uint64_t v = 1; v <= m; ++v) {
            odd[v] ^= 1u;
            if (odd[v])
                ++odd_count;
            else
                --odd_count;
            self(self, pos + 1);
            odd[v] ^= 1u;
            if (odd[v])
                ++odd_count;
            else
                --odd_count;
        }
    };
    recurse(recurse, 0);
    report.exact_count = count;
    return report;
}

u128 odd_support_tuple_count(unsigned m, unsigned k, unsigned t) {
    if (t > m || t > k || ((k - t) & 1u))
        return 0;
    // k! [z^k] sinh(z)^t cosh(z)^(m-t)
    //   = 2^-m * sum_{a<=t} sum_{b<=m-t} (-1)^(t-a) C(t,a) C(m-t,b) (2(a+b)-m)^k
    i128 acc = 0;
    for (unsigned a = 0; a <= t; ++a) {
        for (unsigned b = 0; b <= m - t; ++b) {
            const i128 base = 2 * static_cast<i128>(a + b) - static_cast<i128>(m);
            i128 term = checked_mul(static_cast<i128>(binomial_u128(t, a)),
                                    static_cast<i128>(binomial_u128(m - t, b)));
            term = checked_mul(term, ipow_i128(base, k));
            if ((t - a) & 1u)
                acc = checked_sub(acc, term);
            else
                acc = checked_add(acc, term);
        }
    }
    const i128 denom = ipow_i128(2, m);
    if (acc % denom != 0 || acc < 0)
        throw Error("odd_support_tuple_count: non-integral result");
    return static_cast<u128>(acc / denom);
}

MomentReport moment_tail_experiment(const SieveTable& table, std::uint64_t x, unsigned m,
                                    double eps, std::span<const double> coeffs,
                                    std::optional<unsigned> k_override, unsigned threads) {
    if (m < 1) throw DomainError("moment_tail_experiment: m must be positive");
    if (coeffs.size() != m) throw DomainError("moment_tail_experiment: need m coefficients");
    if (eps <= 0) throw DomainError("moment_tail_experiment: eps must be positive");
    for (double c : coeffs)
        if (std::abs(c) > 1.0 + 1e-12)
            throw DomainError("moment_tail_experiment: coefficients must satisfy |c| <= 1");
    if (x + m > table.limit())
        throw RangeError("moment_tail_experiment: x + m exceeds table limit");

    MomentReport report;
    report.x = x;
    report.m = m;
    report.eps = eps;

    unsigned k;
    if (k_override) {
        k = *k_override;
    } else {
        const double target = eps * eps * static_cast<double>(m) / (4.0 * std::exp(1.0));
        k = static_cast<unsigned>(2.0 * std::llround(target / 2.0));
        k = std::max(2u, k);
    }
    if (k < 2 || (k & 1u)) throw DomainError("moment_tail_experiment: k must be even and >= 2");
    if (k > m) throw DomainError("moment_tail_experiment: k must not exceed m");
    report.k = k;

    const std::vector<std::int8_t> lam =
        bulk_values(table, CorrelationFn::liouville, x + m);

    // (a) exact tail count
    const double threshold = eps * static_cast<double>(m);
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        double s = 0.0;
        for (unsigned i = 1; i <= m; ++i) s += coeffs[i - 1] * lam[n + i];
        if (std::abs(s) >= threshold) ++count;
    }
    report.threshold_count = count;

    // (b) sum over all m^k ordered tuples of |sum_n prod lambda(n + i_j)|,
    // collapsed onto odd-multiplicity supports.
    std::vector<u128> weight_by_size(k + 1, 0);
    for (unsigned t = (k & 1u); t <= k; t += 2) weight_by_size[t] = odd_support_tuple_count(m, k, t);

    std::vector<std::vector<unsigned>> subsets;
    for (unsigned t = 0; t <= k; t += 2) {
        if (weight_by_size[t] == 0) continue;
        std::vector<unsigned> idx(t);
        for (unsigned i = 0; i < t; ++i) idx[i] = i + 1;
        for (;;) {
            subsets.push_back(idx);
            if (t == 0) break;
            // next combination of [1, m]
            int pos = static_cast<int>(t) - 1;
            while (pos >= 0 && idx[pos] == m - (t - 1 - pos)) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (unsigned i = pos + 1; i < t; ++i) idx[i] = idx[i - 1] + 1;
        }
    }

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, 64));
    std::vector<u128> partial(workers, 0);
    std::vector<std::thread> pool;
    const std::size_t per = (subsets.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * per;
        const std::size_t hi = std::min(subsets.size(), lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            u128 acc = 0;
            for (std::size_t sidx = lo; sidx < hi; ++sidx) {
                const auto& subset = subsets[sidx];
                std::int64_t corr = 0;
                if (subset.empty()) {
                    corr = static_cast<std::int64_t>(x);
                } else {
                    for (std::uint64_t n = 1; n <= x; ++n) {
                        int term = 1;
                        for (unsigned i : subset) term *= lam[n + i];
                        corr += term;
                    }
                }
                acc += checked_mul(weight_by_size[subset.size()],
                                   u128{static_cast<std::uint64_t>(std::llabs(corr))});
            }
            partial[w] = acc;
        });
    }
    for (auto& th : pool) th.join();
    u128 tuple_sum = 0;
    for (u128 p : partial) tuple_sum += p;
    report.tuple_abs_sum = tuple_sum;

    const long double denom = std::pow(static_cast<long double>(threshold),
                                       static_cast<long double>(k));
    report.chebyshev_majorant = static_cast<long double>(tuple_sum) / denom;
    report.analytic_bound =
        std::exp(-eps * eps * static_cast<double>(m) / (8.0 * std::exp(1.0)));
    // count * (eps m)^k <= tuple_abs_sum, the expanded-moment inequality
    report.chain_holds =
        static_cast<long double>(count) * denom <= static_cast<long double>(tuple_sum);
    return report;
}

void ExperimentConfig::validate() const {
    if (x < 1) throw DomainError("config: x must be positive");
    if (shifts.empty()) throw DomainError("config: need at least one shift");
    for (std::int64_t h : shifts)
        if (h < 0) throw DomainError("config: shifts must be non-negative");
    std::vector<std::int64_t> sorted(shifts);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("config: shifts must be distinct");
    if (eta_proxy && r_override)
        throw DomainError("config: eta proxy and explicit r are mutually exclusive");
    if (eta_proxy && *eta_proxy <= std::exp(std::exp(1.0)))
        throw DomainError("config: eta proxy must exceed e^e");
    if (eta_proxy || r_override) {
        const std::uint64_t r = derived_r();
        if (r < 2) throw DomainError("config: derived r is below 2");
        if (r >= x) throw DomainError("config: derived r is not below x");
    }
    if (level_constant <= 0) throw DomainError("config: level constant must be positive");
}

double ExperimentConfig::alpha() const {
    const double log_eta = std::log(*eta_proxy);
    return std::sqrt(std::log(log_eta)) * std::pow(log_eta, 1.0 / 12.0);
}

std::uint64_t ExperimentConfig::derived_r() const {
    if (r_override) return *r_override;
    if (!eta_proxy) throw DomainError("config: r requires either an explicit value or an eta proxy");
    const double val = std::pow(static_cast<double>(x), 1.0 / alpha());
    return static_cast<std::uint64_t>(std::llround(val));
}

std::optional<double> ExperimentConfig::derived_u() const {
    if (u_override) return u_override;
    if (!eta_proxy) return std::nullopt;
    return level_constant * alpha();
}

std::optional<double> ExperimentConfig::derived_a() const {
    if (a_override) return a_override;
    const auto u = derived_u();
    if (!u) return std::nullopt;
    return *u / static_cast<double>(shifts.size());
}

std::optional<double> ExperimentConfig::reference_bound() const {
    if (!eta_proxy) return std::nullopt;
    return 1.0 / alpha();
}

std::optional<bool> ExperimentConfig::x_in_window() const {
    if (!eta_proxy || !discriminant) return std::nullopt;
    const double q = static_cast<double>(*discriminant < 0 ? -*discriminant : *discriminant);
    if (q < 2) return std::nullopt;
    const double log_x = std::log(static_cast<double>(x));
    const double log_q = std::log(q);
    const double upper = std::log(std::log(*eta_proxy)) / 3.0;
    return 10.0 * log_q <= log_x && log_x <= upper * log_q;
}

} // namespace chowla
